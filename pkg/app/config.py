# app/config.py
import os
from dotenv import load_dotenv

# .env is loaded as soon as this module is imported
load_dotenv()

PERIODS_PER_YEAR = 252


class Settings:
    LOG_LEVEL: str = os.getenv("VOLTARGET_LOG_LEVEL", "INFO").upper()
    # joblib workers for grid cells, Monte Carlo partitions and cohort assets
    N_JOBS: int = int(os.getenv("VOLTARGET_N_JOBS", "1"))
    # Monte Carlo paths per partition
    MC_CHUNK: int = int(os.getenv("VOLTARGET_MC_CHUNK", "1000"))


settings = Settings()


# ---------------------------------------------------------------------
# Protocol defaults (annualized where the name says so)
# ---------------------------------------------------------------------
DEFAULT_TARGET_VOL_ANN = 0.15
DEFAULT_LEVERAGE = 1.5
DEFAULT_HALFLIFE = 126.0
DEFAULT_WARMUP = 10
DEFAULT_SPREAD_BPS = 5.0
DEFAULT_GAIN = 55.0
DEFAULT_KAPPA_MIN = -1.0
DEFAULT_KAPPA_MAX = 1.0
DEFAULT_THETA = 0.6
DEFAULT_PERCENTILES = (10.0, 90.0)
DEFAULT_BURN_IN = 252
DEFAULT_MIN_ANN_RETURN = 0.05
