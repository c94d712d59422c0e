import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

class Config:
    """Application configuration."""

    # Output
    OUTPUT_FORMAT = os.getenv("CONVOTE_FORMAT", "table").lower()
    LOG_FILE = os.getenv("CONVOTE_LOG_FILE", "")

    # Negotiation (support redistribution) stopping rule
    NEGOTIATE_TOL = float(os.getenv("CONVOTE_NEGOTIATE_TOL", "1e-12"))
    MAX_ROUNDS = int(os.getenv("CONVOTE_MAX_ROUNDS", "1000000"))

    # Power iteration verifier
    POWER_TOL = float(os.getenv("CONVOTE_POWER_TOL", "1e-12"))
    POWER_MAX_STEPS = int(os.getenv("CONVOTE_POWER_MAX_STEPS", "1000000"))

    # Random-walk deliberation
    WALK_STEPS = int(os.getenv("CONVOTE_WALK_STEPS", "1000000"))
    WALK_SEED = int(os.getenv("CONVOTE_WALK_SEED", "42"))

    # JSON documents
    SCHEMA_VERSION = 1

    # Project root
    PROJECT_ROOT = Path(__file__).parent.parent

config = Config()
