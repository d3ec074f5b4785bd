"""
learnlab — shared API configuration.

Resolves the rules directory and the request limits from the environment.
Engines read their own defaults (LEARNLAB_BUDGET, LEARNLAB_GUARD, ...).
"""

import logging
import os
import sys
from pathlib import Path

logger = logging.getLogger("learnlab")

ROOT = Path(__file__).parent.parent
SCRIPTS_DIR = ROOT / "scripts"
if str(SCRIPTS_DIR) not in sys.path:
    sys.path.insert(0, str(SCRIPTS_DIR))

RULES_DIR = Path(os.environ.get("LEARNLAB_RULES_DIR", str(ROOT / "data" / "rules")))
MEASURES_DIR = Path(os.environ.get("LEARNLAB_MEASURES_DIR", str(ROOT / "data" / "measures")))
CORS_ORIGINS = os.environ.get("CORS_ORIGINS", "*").split(",")
VERSION = "1.0.0"
LOG_LEVEL = os.environ.get("LEARNLAB_LOG_LEVEL", "INFO")
# Set behind a TLS terminator; adds Strict-Transport-Security to responses
HTTPS_ONLY = os.environ.get("LEARNLAB_HTTPS_ONLY", "").lower() in ("1", "true", "yes")

# Requests above these limits are refused with 422
MAX_LEN_LIMIT = int(os.environ.get("LEARNLAB_API_MAX_LEN", "8"))
STEP_LIMIT = int(os.environ.get("LEARNLAB_API_MAX_STEPS", "10000"))
GENERATION_LIMIT = int(os.environ.get("LEARNLAB_API_MAX_GENERATIONS", "10000"))


def configure_logging():
    """Log to stderr at LEARNLAB_LOG_LEVEL unless something already configured logging."""
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s [%(levelname)s] %(message)s")
