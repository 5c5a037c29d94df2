import json

import pytest

from app.errors import DescriptorValidationError
from app.models.descriptor import QGroupDescriptor
from app.models.elements import AlgElem
from app.models.groups import SubgroupSpec, preset_group
from app.models.multiplier import Multiplier
from app.models.scalar import Scalar
from app.services import finite_backend as fb
from app.services import hopf_core as hc
from app.services.axioms import run_axioms_suite


def test_presets_and_files():
    assert fb.load_group("S3").order == 6
    assert fb.load_group("Q8").order == 8
    assert fb.load_group("V4.json").order == 4
    with pytest.raises(ValueError):
        fb.load_group("A5")


def test_malformed_group_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"name": "broken", "elements": ["e", "a"], "cayley": [[0, 1], [1, 2]]}))
    with pytest.raises(ValueError):
        fb.load_group(path)


def test_conjugacy_classes_of_s3():
    group = preset_group("S3")
    sizes = [len(cls) for cls in group.conjugacy_classes()]
    assert sizes == [1, 3, 2]
    assert group.rational_class_count() == 3


PRESETS = ["Z2", "Z3", "Z4", "Z5", "Z6", "S3", "D4", "Q8", pytest.param("S4", marks=pytest.mark.slow)]


@pytest.mark.parametrize("preset", PRESETS)
def test_axioms_pass_on_both_pictures(preset):
    group = preset_group(preset)
    for descriptor in (fb.fun_qgroup(group), fb.group_alg_qgroup(group)):
        results = run_axioms_suite(descriptor)
        assert [r.name for r in results if not r.passed] == []
        assert any(r.name == "galois_bijective" for r in results)


def test_descriptor_from_dict_round_trip():
    descriptor = fb.fun_qgroup(preset_group("Z3"))
    loaded = QGroupDescriptor.from_dict(descriptor.to_dict())
    assert loaded.basis == descriptor.basis
    assert loaded.haar_basis(loaded.basis[0]) == descriptor.haar_basis(descriptor.basis[0])


def test_descriptor_round_trip_keeps_multipliers():
    descriptor = fb.fun_qgroup(preset_group("Z3"))
    first, second, third = descriptor.basis
    left = {first: {second: Scalar(2)}, second: {second: Scalar(1)}}
    right = {first: {third: Scalar(-1)}, third: {first: Scalar(1) / 3}}
    descriptor.modular_inv_sqrt = Multiplier.from_tables(descriptor, left, right, name="inv_sqrt")
    loaded = QGroupDescriptor.from_dict(descriptor.to_dict(), trusted=True)
    for label in descriptor.basis:
        assert loaded.modular_inv_sqrt.left_act(label) == left.get(label, {})
        assert loaded.modular_inv_sqrt.right_act(label) == right.get(label, {})
    assert loaded.modular_inv_sqrt.name == "inv_sqrt"
    assert loaded.modular.equals_on(descriptor.modular, descriptor.basis)


def test_descriptor_missing_table_rejected():
    data = fb.fun_qgroup(preset_group("Z3")).to_dict()
    del data["comult"]
    with pytest.raises(DescriptorValidationError):
        QGroupDescriptor.from_dict(data)


def test_convolution_is_associative_with_involutive_star(rng):
    descriptor = fb.fun_qgroup(preset_group("S3"))
    f, g, h = (hc.random_element(descriptor, rng, terms=3) for _ in range(3))
    assert hc.conv_mul(hc.conv_mul(f, g), h) == hc.conv_mul(f, hc.conv_mul(g, h))
    assert hc.conv_star(hc.conv_star(f)) == f
    assert hc.conv_star(hc.conv_mul(f, g)) == hc.conv_mul(hc.conv_star(g), hc.conv_star(f))


def test_gns_inner_is_positive_on_basis():
    descriptor = fb.fun_qgroup(preset_group("S3"))
    for label in descriptor.basis:
        f = AlgElem.basis(descriptor, label)
        assert hc.gns_inner(f, f).rational_value() > 0


def test_rational_components_of_s3():
    group = preset_group("S3")
    descriptor = fb.fun_qgroup(group)
    components = fb.rational_components(descriptor, group)
    assert sorted(rep.dim for rep in components) == [1, 1, 4]


def test_sign_reps_follow_index_two_subgroups():
    s3 = preset_group("S3")
    assert len(fb.sign_reps(fb.fun_qgroup(s3), s3)) == 1
    v4 = fb.load_group("V4.json")
    assert len(fb.sign_reps(fb.fun_qgroup(v4), v4)) == 3


def test_subgroup_map_restricts(s3_pair):
    group, subgroup, m = s3_pair
    assert subgroup.order == 2
    assert m.target.basis == subgroup.as_group().elements
    identity = AlgElem.basis(m.source, group.elements[group.identity])
    assert m.apply_pi(identity) == AlgElem.basis(m.target, group.elements[group.identity])


def test_unknown_generator_rejected():
    with pytest.raises(ValueError):
        SubgroupSpec.from_names(preset_group("S3"), ["(0 3)"])
