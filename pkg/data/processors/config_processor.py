# data/processors/config_processor.py
from pathlib import Path
from typing import Any, Dict, Optional, Union
import logging

from dotenv import dotenv_values
from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from data.models import ConfigError, ScenarioConfig

logger = logging.getLogger(__name__)

ECONOMY_KEYS = {"n", "non_productive", "productivity", "c_portion", "interest_rate", "alpha", "beta", "gamma"}
CURRENCY_KEYS = {"face_value", "actual_cost"}
SCENARIO_KEYS = {
    "mode", "periods", "money_policy", "money_multiplier", "agency_variant",
    "emergency_events", "emergency_rate", "rng_seed", "barter_order",
    "trade_reservation", "trace_kinds",
}
KNOWN_KEYS = ECONOMY_KEYS | CURRENCY_KEYS | SCENARIO_KEYS


class SCRSettings(BaseSettings):
    """Process-level settings read from SCR_* environment variables"""

    model_config = SettingsConfigDict(env_prefix="SCR_", extra="ignore")

    seed: Optional[int] = None
    log_level: str = "INFO"
    workers: int = 1


class ConfigProcessor:
    def __init__(self, settings: Optional[SCRSettings] = None):
        self.settings = settings or SCRSettings()

    def read_pairs(self, path: Union[str, Path]) -> Dict[str, str]:
        """Read a flat key=value scenario file"""
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise ConfigError(f"cannot read {path}: {e}") from e

        for number, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if stripped and not stripped.startswith("#") and "=" not in stripped:
                raise ConfigError(f"{path.name}:{number}: expected key=value, got {stripped!r}")

        pairs = {key.strip(): (value or "").strip() for key, value in dotenv_values(path).items()}
        unknown = sorted(set(pairs) - KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"{path.name}: unknown keys {', '.join(unknown)}")
        return pairs

    def build(self, pairs: Dict[str, Any]) -> ScenarioConfig:
        """Regroup flat keys into the nested scenario model and validate"""
        data: Dict[str, Any] = {k: v for k, v in pairs.items() if k in SCENARIO_KEYS}
        economy = {k: v for k, v in pairs.items() if k in ECONOMY_KEYS}
        currency = {k: v for k, v in pairs.items() if k in CURRENCY_KEYS}
        if currency:
            economy["currency"] = currency
        if economy:
            data["economy"] = economy
        if self.settings.seed is not None:
            data["rng_seed"] = self.settings.seed

        try:
            return ScenarioConfig.model_validate(data)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigError(problems) from e

    def load(self, path: Union[str, Path]) -> ScenarioConfig:
        config = self.build(self.read_pairs(path))
        logger.info(f"📂 Loaded scenario {Path(path).name}: mode={config.mode.value}, n={config.economy.n}")
        return config


def load_config(path: Union[str, Path], settings: Optional[SCRSettings] = None) -> ScenarioConfig:
    return ConfigProcessor(settings).load(path)
