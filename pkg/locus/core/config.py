from pydantic_settings import BaseSettings
from functools import lru_cache
from dotenv import load_dotenv

# Load .env file into environment variables (local runs)
load_dotenv()


class Settings(BaseSettings):
    # Worker pool
    LOCUS_THREADS: int = 1  # Caps Monte Carlo workers; reports do not depend on it

    # Budgets
    LOCUS_EXACT_BUDGET: int = 2 ** 20  # Max enumeration size for exact modes
    LOCUS_MATCHING_BUDGET: int = 2 ** 16  # Max candidate subsets tried by find_matchings, one span solve each
    LOCUS_LINE_BUDGET: int = 2 ** 16  # Max number of lines for a line code

    # Reproducibility
    LOCUS_SEED: int = 0  # Default master seed

    # Logging
    LOCUS_LOG_LEVEL: str = "INFO"

    # Reports
    LOCUS_REPORT_SCHEMA: int = 1


@lru_cache()
def get_settings():
    return Settings()
