# genericity/core/config.py
import os
from dotenv import load_dotenv

load_dotenv()

CACHE_DIR      = os.getenv("GENERICITY_CACHE", "")
THREADS        = int(os.getenv("GENERICITY_THREADS", "1"))
LOG_LEVEL      = os.getenv("GENERICITY_LOG_LEVEL", "INFO").upper()
TORUS_GRID     = os.getenv("GENERICITY_TORUS_GRID", "50:1600:x2")
GENERAL_GRID   = os.getenv("GENERICITY_GENERAL_GRID", "8:64:x2")
WORD_CAP       = int(os.getenv("GENERICITY_WORD_CAP", "14"))
WINDOW         = int(os.getenv("GENERICITY_WINDOW", "1000"))
SEED           = int(os.getenv("GENERICITY_SEED", "0"))
TOP_FRACTION   = float(os.getenv("GENERICITY_TOP_FRACTION", "0.5"))

# bumped whenever a cached payload layout or an enumeration order changes
CACHE_FORMAT_VERSION = 1

