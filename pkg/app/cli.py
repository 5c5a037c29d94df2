"""
Command-Line Driver
-------------------

qinduct axioms|induce|pseries|verify|sweep

Every command builds a Report, prints one line per check and optionally
writes the JSON form to --out. Exit codes: 0 when every check passes, 1 on
an identity failure, 2 on a configuration error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from app.config import DEFAULT_SEED, DEFAULT_TOL, GROUPS_DIR, LOG_LEVEL
from app.errors import ConfigError, DescriptorValidationError
from app.models.descriptor import QGroupDescriptor
from app.models.groups import FiniteGroupTable, SubgroupSpec
from app.models.labels import spin_text
from app.models.report import CheckResult, Report
from app.models.representation import RepOnSpace
from app.models.run_config import RunConfig, load_sweep
from app.models.scalar import Scalar
from app.services import finite_backend as fb
from app.services import induction as ind
from app.services import parabolic as pb
from app.services import suq2
from app.services.axioms import run_axioms_suite
from app.services.double import build_borel, build_double
from app.services.lattice import torus_algebra
from app.services.verification import verify_all

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qinduct",
        description="Exact verification of induced representations of algebraic quantum groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", default="finite:S3",
                        help="finite:<preset|file.json> or suq2:<L> (default: finite:S3)")
    common.add_argument("--q", default="exact", help="'exact' or a numeric q in (0, 1]")
    common.add_argument("--cutoff", default=None, help="Spin cutoff L, e.g. 1 or 3/2")
    common.add_argument("--window", default=None, help="Spin window of the dual coproduct")
    common.add_argument("--mu", type=int, default=0, help="Integral weight μ of the character")
    common.add_argument("--lambda", dest="lam", default="0", help="Weight λ, e.g. 1 or 0.3+0.7i")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Numeric tolerance")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for sampled identities")
    common.add_argument("--samples", type=int, default=20, help="Number of sampled inputs per identity")
    common.add_argument("--out", default=None, help="Write the JSON report to this path")
    common.add_argument("--log-level", default=LOG_LEVEL, help="DEBUG, INFO, WARNING or ERROR")

    sub.add_parser("axioms", parents=[common], help="Run the axioms suite on a backend")
    induce = sub.add_parser("induce", parents=[common], help="Induce a representation of a subgroup")
    induce.add_argument("--subgroup", nargs="*", default=None,
                        help="Generator names of the subgroup, e.g. '(0 1)'")
    induce.add_argument("--rep", default="trivial",
                        help="trivial, sign[:k] or component:k (representation of the subgroup)")
    sub.add_parser("pseries", parents=[common], help="Principal series of the SU_q(2) double")
    sub.add_parser("verify", parents=[common], help="Check every statement of the theory")
    sweep = sub.add_parser("sweep", parents=[common], help="Principal series over a parameter file")
    sweep.add_argument("--sweep-file", required=True, help="JSON file of (mu, lambda, cutoff, mode) records")
    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        backend=args.backend,
        q=args.q,
        cutoff=args.cutoff,
        mu=args.mu,
        lam=args.lam,
        tol=args.tol,
        seed=args.seed,
        out=args.out,
        log_level=args.log_level,
        window=args.window,
        samples=args.samples,
        sweep_file=getattr(args, "sweep_file", None),
        subgroup=getattr(args, "subgroup", None),
        rep=getattr(args, "rep", "trivial"),
    )


# backends


def load_finite(target: str) -> Tuple[Optional[FiniteGroupTable], List[QGroupDescriptor]]:
    """
    A preset or Cayley file gives (group, [Fun(G), C[G]]); a descriptor file
    gives (None, [descriptor]).

    Raises:
        ConfigError: If the preset or file cannot be read
        DescriptorValidationError: If a descriptor file fails its schema or axioms
    """
    path = Path(target)
    if path.suffix == ".json" and not path.exists():
        path = GROUPS_DIR / path.name
    if path.suffix == ".json":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error reading backend file {path}: {type(e).__name__}: {str(e)}")
            raise ConfigError(f"Cannot read backend file {path}: {str(e)}") from e
        if "cayley" not in data:
            return None, [QGroupDescriptor.from_dict(data)]
    try:
        group = fb.load_group(path if path.suffix == ".json" else target)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return group, [fb.fun_qgroup(group), fb.group_alg_qgroup(group)]


def _build_double(config: RunConfig):
    double = build_double(config.twice_cutoff, config.twice_window)
    borel, m = build_borel(double)
    return double, borel, m


def _named(prefix: str, checks: List[CheckResult]) -> List[CheckResult]:
    for check in checks:
        check.name = f"{prefix}:{check.name}"
    return checks


# commands


def cmd_axioms(config: RunConfig) -> Report:
    report = Report("axioms", backend=config.backend, config=config.to_dict())
    if config.backend_kind == "finite":
        _, descriptors = load_finite(config.backend_target)
        for descriptor in descriptors:
            report.add(_named(descriptor.name, run_axioms_suite(descriptor)))
        return report

    twice = config.twice_cutoff
    pw = suq2.pw_algebra(twice, use_cache=True)
    dual = suq2.dual_algebra(twice, config.twice_window)
    report.add(_named(pw.name, run_axioms_suite(pw)))
    report.add(_named(dual.name, run_axioms_suite(dual)))
    report.add([
        suq2.twist_unitarity_check(dual, pw),
        suq2.twist_factorization_check(dual, pw),
        suq2.kms_check(pw),
        suq2.right_haar_check(dual),
        suq2.torus_morphism_check(suq2.torus_map(pw, torus_algebra(twice))),
        suq2.quotient_haar_check(dual, suq2.weights_for(dual)),
    ])
    double, borel, _ = _build_double(config)
    for descriptor in (double, borel):
        window = descriptor.dual.window
        labels = [label for label in descriptor.basis if descriptor.grade(label) <= window]
        report.add(_named(descriptor.name, run_axioms_suite(descriptor, labels)))
    return report


def _subgroup_rep(spec: str, m, subgroup: SubgroupSpec, seed: int) -> RepOnSpace:
    group = subgroup.as_group()
    kind, _, index = spec.partition(":")
    if kind == "trivial":
        return fb.trivial_rep(m.target, group)
    if kind == "sign":
        reps = fb.sign_reps(m.target, group)
    elif kind == "component":
        reps = fb.rational_components(m.target, group, seed)
    else:
        raise ConfigError(f"Representation must be one of: trivial, sign[:k], component:k (got {spec!r})")
    if index and not index.isdigit():
        raise ConfigError(f"Representation index must be a nonnegative integer (got {index!r})")
    k = int(index) if index else 0
    if not 0 <= k < len(reps):
        raise ConfigError(f"{spec!r} is not available for {group.name}: {len(reps)} choices")
    return reps[k]


def cmd_induce(config: RunConfig) -> Report:
    """Induce a representation along G ⊇ B and compare with the Frobenius formula."""
    if config.backend_kind == "suq2":
        report = cmd_principal_series(config)
        report.command = "induce"
        return report
    group, _ = load_finite(config.backend_target)
    if group is None:
        raise ConfigError("induce needs a group, not a bare descriptor file")
    if not config.subgroup:
        raise ConfigError("induce needs --subgroup generators")
    try:
        subgroup = SubgroupSpec.from_names(group, config.subgroup)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    m = fb.subgroup_map(subgroup)
    rep = _subgroup_rep(config.rep, m, subgroup, config.seed)
    induced = ind.induce(m, rep)
    got = ind.induced_character(group, induced)
    oracle = ind.mackey_oracle(group, subgroup, fb.element_character(subgroup.as_group(), rep))
    expected = [value if isinstance(value, Scalar) else Scalar(value) for value in oracle]

    report = Report("induce", backend=config.backend, config=config.to_dict())
    report.add(CheckResult.from_flag(
        "mackey_oracle", got == expected, identity="χ_Ind = Frobenius formula",
        detail=f"character {[v.to_text() for v in got]}", samples=1, group="induction",
    ))
    report.add(CheckResult.from_flag(
        "essential", ind.essentialness_check(induced.as_rep()),
        identity="span D(G)*Ind V = Ind V", samples=1, group="induction",
    ))
    if subgroup.order == group.order:
        report.add(CheckResult.from_flag(
            "whole_group", induced.dimension == rep.dim, identity="Ind_G^G V ≅ V",
            detail=f"dimension {induced.dimension} vs {rep.dim}", samples=1, group="induction",
        ))
    report.results = {
        "group": group.name,
        "subgroup": subgroup.name,
        "rep": rep.name,
        "induced": induced.to_dict(),
        "oracle": [value.to_text() for value in expected],
    }
    logger.info(f"Induced {rep.name} from {subgroup.name}: dimension {induced.dimension}")
    return report


def principal_series_checks(config: RunConfig, mu: int, lam: Any) -> Tuple[List[CheckResult], Dict[str, Any]]:
    double, _, m = _build_double(config)
    param = pb.CharacterParam(mu, lam, mode=config.mode, ctx=config.numeric_context())
    space = pb.principal_series(m, param)
    tol = config.tol
    dimension, k_types = pb.expected_dimension(config.twice_cutoff, mu)
    checks = [
        CheckResult.from_flag("covariance_residual",
                              space.residual == 0 if param.exact else space.residual <= tol,
                              identity="(id⊗π_B)Δ_G(ξ) = ξ⊗(e^μ⊗K_{2ρ+λ})",
                              detail=f"residual {space.residual:.3e}", samples=space.dimension),
        CheckResult.from_flag("gram_positive", space.min_eigenvalue >= -tol,
                              identity="Gram ≥ 0", detail=f"min eigenvalue {space.min_eigenvalue:.3e}",
                              samples=1),
        CheckResult.from_flag("dimension", space.dimension == dimension,
                              identity="dim = Σ(2l+1) over admissible spins",
                              detail=f"{space.dimension} vs {dimension} ({k_types} K-types)", samples=1),
    ]
    if param.exact:
        module = pb.build_gqnq(double)
        checks += [
            pb.module_map_check(m, param),
            pb.inner_product_check(m, param),
            pb.balanced_tensor_vs_gqnq(module, m, space),
        ]
    for check in checks:
        check.group = "principal series"
    results = space.to_dict()
    if param.exact:
        results["gram"] = [[value.to_text() for value in row] for row in space.gram]
    results["expected_dimension"] = dimension
    return checks, results


def cmd_principal_series(config: RunConfig) -> Report:
    if config.backend_kind != "suq2":
        raise ConfigError("pseries requires a suq2:<L> backend")
    report = Report("pseries", backend=config.backend, config=config.to_dict())
    checks, results = principal_series_checks(config, config.mu, config.lam)
    report.add(checks)
    report.results = results
    return report


def cmd_verify(config: RunConfig) -> Report:
    if not isinstance(config.lam, int):
        raise ConfigError("verify runs the exact statements; use an integral --lambda")
    twice = config.twice_cutoff if config.backend_kind == "suq2" else 1
    report = Report("verify", backend=config.backend, config=config.to_dict())
    report.add(verify_all(twice, config.seed, config.samples, config.twice_window,
                          config.numeric_context(), mu=config.mu, lam=config.lam))
    groups: Dict[str, str] = {}
    for check in report.checks:
        current = groups.get(check.group, "PASS")
        if not check.passed:
            current = "FAIL"
        elif check.status == "discrepancy" and current == "PASS":
            current = "DISCREPANCY"
        groups[check.group] = current
    report.results = {"groups": groups}
    return report


def cmd_sweep(config: RunConfig) -> Report:
    """Principal series for every record of the sweep file, gathered into one report."""
    records = load_sweep(config.sweep_file)
    report = Report("sweep", backend=config.backend, config=config.to_dict())
    rows = []
    for n, record in enumerate(records):
        mode = record.get("mode", "exact")
        q = "exact" if mode == "exact" else record.get("q", config.numeric_context().q_value.real)
        run = RunConfig("pseries", backend=f"suq2:{record['cutoff']}", q=q, mu=record["mu"],
                        lam=record.get("lambda", 0), tol=config.tol, seed=config.seed,
                        window=None if config.twice_window is None else spin_text(config.twice_window))
        logger.info(f"Sweep record {n}: mu={run.mu}, lambda={run.lam}, L={spin_text(run.twice_cutoff)}, {mode}")
        checks, results = principal_series_checks(run, run.mu, run.lam)
        report.add(_named(f"record[{n}]", checks))
        rows.append({"record": record, **results})
    report.results = {"records": rows}
    return report


COMMANDS = {
    "axioms": cmd_axioms,
    "induce": cmd_induce,
    "pseries": cmd_principal_series,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def write_report(report: Report, out: Optional[Path]) -> None:
    for line in report.summary_lines():
        print(line)
    noted = len(report.discrepancies)
    suffix = f", {noted} discrepancies" if noted else ""
    print(f"{'PASS' if report.passed else 'FAIL'}: {len(report.checks)} checks{suffix}")
    if out is None:
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as f:
            json.dump(report.to_dict(), f, indent=2, ensure_ascii=False)
    except OSError as e:
        logger.error(f"Error writing report {out}: {type(e).__name__}: {str(e)}")
        raise
    logger.info(f"Report written to {out}")


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        report = COMMANDS[config.command](config)
    except (ConfigError, DescriptorValidationError) as e:
        logger.error(f"Configuration error: {type(e).__name__}: {str(e)}")
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_CONFIG
    write_report(report, config.out)
    return EXIT_OK if report.passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
