"""
Configuration management for FuncBoost
"""

import json
import os
from pathlib import Path
from typing import Dict, Any, Optional


class Config:
    """Configuration manager for the command-line front end"""

    def __init__(self, config_path: str = None):
        """Initialize configuration"""
        if config_path is None:
            # Get the project root directory
            project_root = Path(__file__).parent.parent.parent
            config_path = project_root / "config" / "config.json"

        self.config_path = Path(config_path)
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, falling back to built-in defaults"""
        config = self._get_default_config()
        if self.config_path.exists():
            with open(self.config_path, 'r') as f:
                loaded = json.load(f)
            for section, values in loaded.items():
                if isinstance(values, dict) and isinstance(config.get(section), dict):
                    config[section].update(values)
                else:
                    config[section] = values
        return config

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration"""
        return {
            "cli": {
                "basis": "fourier",
                "nbasis": 100,
                "degree": 3,
                "algo": "logitboost",
                "learner": "stump",
                "folds": 10,
                "mmax": 200,
                "m": 100,
                "seed": 1,
                "mode": "reweight",
                "shrinkage": 1.0,
                "smoothing_lambda": 0.0,
                "learner_lambda": 1.0,
                "penalty_order": 2,
                "output_kind": "label",
                "criterion": "cv"
            },
            "processing": {
                "max_workers": 4
            },
            "logging": {
                "level": "INFO",
                "log_to_file": False
            }
        }

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    @property
    def max_workers(self) -> int:
        """Fold parallelism cap; FUNCBOOST_THREADS wins over the file"""
        env_value: Optional[str] = os.getenv("FUNCBOOST_THREADS")
        if env_value:
            try:
                return max(1, int(env_value))
            except ValueError:
                pass
        return max(1, int(self.get("processing.max_workers", 1)))
