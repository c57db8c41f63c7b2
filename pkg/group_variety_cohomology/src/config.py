import argparse
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List

import yaml
from pydantic_settings import BaseSettings, SettingsConfigDict

DATA_DIR = Path(__file__).parent / "data"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="GVC_")

    # Brute-force oracle 配置 (GVC_ORACLE_BUDGET)
    oracle_budget: int = 10_000_000
    molien_max_order: int = 20_000

    # Explicit Hopf algebra 配置: 2^12 basis elements
    hopf_dimension_cap: int = 4096

    # Randomized verification batches
    random_seed: int = 20240917

    log_level: str = "WARNING"
    degree_table_path: Path = DATA_DIR / "invariant_degrees.yaml"


def get_config() -> Settings:
    parser = argparse.ArgumentParser(description="Group variety cohomology engine", add_help=False, allow_abbrev=False)
    parser.add_argument("--oracle-budget", type=int, help="Cap on brute-force enumeration work")
    parser.add_argument("--hopf-cap", type=int, help="Maximum basis size of explicit Hopf algebras")
    args, unknown = parser.parse_known_args()

    settings = Settings()
    if args.oracle_budget:
        settings.oracle_budget = args.oracle_budget
    if args.hopf_cap:
        settings.hopf_dimension_cap = args.hopf_cap

    return settings


@lru_cache(maxsize=None)
def load_degree_table(path: Path) -> Dict[str, Any]:
    """Load the Weyl invariant-degree table shipped as YAML."""
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def degree_table() -> Dict[str, Any]:
    return load_degree_table(config.degree_table_path)


def exceptional_degrees(name: str) -> List[int]:
    return list(degree_table()["exceptional"][name])


# Global config instance
config = get_config()
