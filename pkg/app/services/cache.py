"""
Structure Table Cache
---------------------

Versioned JSON cache of SU_q(2) product tables, keyed by the cutoff and a
hash of the convention table. A missing, stale or corrupted file is a cache
miss and the tables are regenerated.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

from jsonschema import ValidationError, validate

from app.config import CACHE_DIR
from app.models.labels import PWLabel, parse_block_label
from app.models.scalar import Scalar

logger = logging.getLogger(__name__)

CACHE_VERSION = 1

CACHE_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "integer", "const": CACHE_VERSION},
        "convention": {"type": "string"},
        "cutoff": {"type": "integer", "minimum": 0},
        "products": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {"type": "string"},
            },
        },
    },
    "required": ["schema_version", "convention", "cutoff", "products"],
}

ProductTable = Dict[Tuple[PWLabel, PWLabel], Dict[PWLabel, Scalar]]


def cache_path(twice_cutoff: int, convention: str, cache_dir: Optional[Path] = None) -> Path:
    return Path(cache_dir or CACHE_DIR) / f"suq2_products_L{twice_cutoff}_{convention}.json"


def load_products(twice_cutoff: int, convention: str,
                  cache_dir: Optional[Path] = None) -> Optional[ProductTable]:
    """
    Read a cached product table.

    Returns:
        The table, or None on a cache miss
    """
    path = cache_path(twice_cutoff, convention, cache_dir)
    if not path.exists():
        logger.debug(f"No cached products at {path}")
        return None
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        validate(instance=data, schema=CACHE_SCHEMA)
        if data["convention"] != convention or data["cutoff"] != twice_cutoff:
            logger.warning(f"Cache file {path} does not match the requested tables; regenerating")
            return None
        table: ProductTable = {}
        for key, row in data["products"].items():
            left, _, right = key.partition("*")
            table[(parse_block_label(left), parse_block_label(right))] = {
                parse_block_label(label): Scalar.from_text(value) for label, value in row.items()
            }
    except (OSError, json.JSONDecodeError, ValidationError, ValueError) as e:
        logger.warning(f"Ignoring unreadable cache file {path}: {type(e).__name__}: {str(e)}")
        return None
    logger.info(f"Loaded {len(table)} cached products from {path}")
    return table


def save_products(twice_cutoff: int, convention: str, table: ProductTable,
                  cache_dir: Optional[Path] = None) -> Path:
    path = cache_path(twice_cutoff, convention, cache_dir)
    data = {
        "schema_version": CACHE_VERSION,
        "convention": convention,
        "cutoff": twice_cutoff,
        "products": {
            f"{left}*{right}": {str(label): value.to_text() for label, value in row.items()}
            for (left, right), row in table.items()
        },
    }
    validate(instance=data, schema=CACHE_SCHEMA)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=1, sort_keys=True)
    except OSError as e:
        logger.error(f"Error writing cache file {path}: {type(e).__name__}: {str(e)}")
        raise
    logger.info(f"Cached {len(table)} products at {path}")
    return path
