"""
JSON configuration with dotted lookups and the thread override
"""

import json

from utils.config import Config


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


class TestConfig:
    def test_missing_file_uses_defaults(self, tmp_path):
        config = Config(str(tmp_path / "absent.json"))
        assert config.get("cli.nbasis") == 100
        assert config.get("cli.algo") == "logitboost"

    def test_file_values_merge_into_sections(self, tmp_path):
        config = Config(write_config(tmp_path, {"cli": {"nbasis": 21}}))
        assert config.get("cli.nbasis") == 21
        assert config.get("cli.learner") == "stump"

    def test_unknown_key_gives_default(self, tmp_path):
        config = Config(str(tmp_path / "absent.json"))
        assert config.get("cli.nothing", "fallback") == "fallback"
        assert config.get("cli.nbasis.deeper") is None

    def test_thread_override(self, tmp_path, monkeypatch):
        config = Config(write_config(tmp_path, {"processing": {"max_workers": 3}}))
        monkeypatch.delenv("FUNCBOOST_THREADS", raising=False)
        assert config.max_workers == 3
        monkeypatch.setenv("FUNCBOOST_THREADS", "7")
        assert config.max_workers == 7
        monkeypatch.setenv("FUNCBOOST_THREADS", "many")
        assert config.max_workers == 3
