"""
Configuration file for the charpoly-resolve project
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env if present
load_dotenv()

# Project paths
PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"
DATA_DIR = PROJECT_ROOT / "data"
JOBS_DIR = DATA_DIR / "jobs"
OUTPUT_DIR = PROJECT_ROOT / "output"
OUTPUT_SCHEMA_FILE = CONFIG_DIR / "output_schema.json"


# Preparation loop: default cap is factor * (lattice points of (1/n!)Z^e in [0, M]^e);
# the environment variable, read at call time, overrides it
PREPARATION_CONFIG = {
    "step_cap_factor": 10,
    "step_cap_env": "CHARPOLY_STEP_CAP",
}

# Directrix in characteristic p: exhaustive search over k-points of the linear kernel
DIRECTRIX_CONFIG = {
    "max_candidates": 10 ** 5,
}

# Brute-force solvability search over finite fields
SOLVER_CONFIG = {
    "max_search": 10 ** 5,
}

# Desk-scale limits for Hilbert functions of monomial ideals
HILBERT_CONFIG = {
    "max_vars": 6,
    "max_degree": 20,
    "max_generators": 16,
    "max_iterations": 5,
    "max_decomposition_length": 10 ** 4,
}

# Local resolution driver
DRIVER_CONFIG = {
    "max_units": 64,
    "max_unit_length": 256,
}

# Default parameters (p, a, b, A, N) of the maximal contact probe
PROBE_DEFAULTS = {
    "p": 3,
    "a": 2,
    "b": 1,
    "A": 4,
    "N": 36,
}

# Visualization settings
PLOT_CONFIG = {
    "figure_size": (6, 6),
    "dpi": 100,
    "vertex_color": "#4169E1",
    "region_color": "#87CEEB",
    "delta_line_color": "#DC143C",
    "annotation_color": "#2E8B57",
    "ascii_width": 40,
    "ascii_height": 20,
}

# Excel export styling
EXCEL_CONFIG = {
    "header": "366092",
    "very_near": "90EE90",
    "near": "FFE4B5",
    "not_near": "FFB6C1",
    "violation": "DC143C",
}

# Logging configuration
LOGGING_CONFIG = {
    "level": os.getenv("LOG_LEVEL", "INFO"),
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "file": os.getenv("CHARPOLY_LOG_FILE", str(PROJECT_ROOT / "logs" / "charpoly.log")),
}
