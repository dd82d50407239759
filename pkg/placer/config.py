import os
import logging
from dataclasses import dataclass
from dotenv import load_dotenv
from pathlib import Path


load_dotenv()

# Repository root: one level above the placer package
PROJECT_ROOT = Path(__file__).parent.parent
DATA_DIR = PROJECT_ROOT / "data"
GSRC_DIR = DATA_DIR / "gsrc"  # Default benchmark directory
RESULTS_DIR = PROJECT_ROOT / "results"


def parse_region(text: str) -> tuple[float, float]:
    """Parse a 'WxH' string such as '800x800' into (W, H)."""
    parts = text.lower().replace("*", "x").split("x")
    if len(parts) != 2:
        raise ValueError(f"Invalid region '{text}'. Expected WIDTHxHEIGHT, e.g. 800x800")
    width, height = float(parts[0]), float(parts[1])
    if width <= 0 or height <= 0:
        raise ValueError(f"Region dimensions must be positive, got {text}")
    return width, height


@dataclass
class Settings:
    # Folder holding <circuit>.blocks/.nets/.pl GSRC bundles
    DATA_FOLDER: str = os.getenv("PLACER_DATA_FOLDER", str(GSRC_DIR))
    OUTPUT_FOLDER: str = os.getenv("PLACER_OUTPUT_FOLDER", str(RESULTS_DIR))

    # Die used for every GSRC circuit (floorplan files carry no die)
    REGION: str = os.getenv("PLACER_REGION", "800x800")
    SEEDS: int = int(os.getenv("PLACER_SEEDS", "5"))
    WORKERS: int = int(os.getenv("PLACER_WORKERS", "1"))
    LOG_LEVEL: str = os.getenv("PLACER_LOG_LEVEL", "INFO")

    def __post_init__(self):
        # Fail early on a malformed region instead of at the first run
        parse_region(self.REGION)
        if self.SEEDS < 1:
            raise ValueError(f"PLACER_SEEDS must be >= 1, got {self.SEEDS}")
        if self.WORKERS < 1:
            raise ValueError(f"PLACER_WORKERS must be >= 1, got {self.WORKERS}")
        if logging.getLevelName(self.LOG_LEVEL.upper()) == f"Level {self.LOG_LEVEL.upper()}":
            raise ValueError(f"Unknown PLACER_LOG_LEVEL: {self.LOG_LEVEL}")

    @property
    def region_size(self) -> tuple[float, float]:
        return parse_region(self.REGION)


settings = Settings()
