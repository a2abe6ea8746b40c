from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

SCENARIOS_DIR = Path(__file__).parent / "scenarios"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="NEURASHED_", env_file=".env")

    sigma: float = Field(default=0.05, gt=0)
    mc_samples: int = Field(default=10000, ge=1)
    eval_every: int = Field(default=50, ge=1)
    workers: int = Field(default=1, ge=1)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    scenarios_dir: Path = SCENARIOS_DIR

    def __str__(self) -> str:
        return f"Settings({', '.join(f'{k}={v!r}' for k, v in self.model_dump().items())})"

    def scenario_dir(self, *, name: str) -> Path:
        return self.scenarios_dir / name


def lock_file_for(*, out_dir: Path) -> Path:
    """Lock file guarding ``out_dir``, kept next to it so the directory stays clean."""
    return out_dir.parent / f".{out_dir.name}.lock"
