import os
from pathlib import Path
from dotenv import load_dotenv

# Load .env file from project root
project_root = Path(__file__).parent.parent.parent.parent
load_dotenv(project_root / ".env")


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    return int(float(raw)) if raw else default


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    return float(raw) if raw else default


class Settings:
    def __init__(self):
        self.seed = _int_env("VORONOI_SEED", 20170101)

        # Budgets guarding exhaustive searches
        self.enumeration_budget = _int_env("VORONOI_ENUMERATION_BUDGET", 10**7)
        self.oracle_budget = _int_env("VORONOI_ORACLE_BUDGET", 10**6)
        self.search_budget = _int_env("VORONOI_SEARCH_BUDGET", 10**8)

        self.tolerance = _float_env("VORONOI_TOLERANCE", 1e-12)
        self.workers = max(1, _int_env("VORONOI_WORKERS", 1))

        self.traces_dir = Path(os.getenv("VORONOI_TRACES_DIR") or project_root / "traces")
        self.data_dir = Path(os.getenv("VORONOI_DATA_DIR") or project_root / "data")


settings = Settings()
