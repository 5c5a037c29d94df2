"""
Configuration
-------------

Environment-backed defaults. Values are read from the process environment
after loading an optional ``.env`` file.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

ROOT_DIR = Path(__file__).parent.parent

CACHE_DIR = Path(os.getenv("QINDUCT_CACHE_DIR", str(ROOT_DIR / "data" / "cache")))
LOG_LEVEL = os.getenv("QINDUCT_LOG_LEVEL", "INFO")
DEFAULT_SEED = int(os.getenv("QINDUCT_DEFAULT_SEED", "0"))
DEFAULT_TOL = float(os.getenv("QINDUCT_DEFAULT_TOL", "1e-9"))
DEFAULT_NUMERIC_Q = float(os.getenv("QINDUCT_NUMERIC_Q", "0.5"))
GROUPS_DIR = ROOT_DIR / "data" / "groups"
