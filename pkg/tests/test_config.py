#!/usr/bin/env python3
"""
配置加载与环境变量覆盖测试
"""

import json

import pytest

from env_utils import active_overrides, load_env_file
from revlogic.rl_config import RevLogicConfig, get_config, set_config


class TestRevLogicConfig:
    def test_defaults(self):
        config = RevLogicConfig()
        assert config.exhaustive_limit == 20
        assert config.fault_samples == 1000
        assert config.fault_seed == 2013
        assert config.workers == 1
        assert config.log_level == "INFO"
        assert config.log_file == ""

    @pytest.mark.parametrize("kwargs", [
        {"exhaustive_limit": 11},
        {"exhaustive_limit": 31},
        {"fault_samples": 0},
        {"workers": 0},
    ])
    def test_invalid_values(self, kwargs):
        with pytest.raises(ValueError):
            RevLogicConfig(**kwargs)

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"exhaustive_limit": 16, "workers": 4}), encoding="utf-8")
        config = RevLogicConfig.from_config_file(str(path))
        assert config.exhaustive_limit == 16
        assert config.workers == 4
        assert config.fault_seed == 2013

    def test_unknown_keys_are_ignored(self, tmp_path, caplog):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"udp_port": 1234, "fault_seed": 5}), encoding="utf-8")
        config = RevLogicConfig.from_config_file(str(path))
        assert config.fault_seed == 5
        assert "udp_port" in caplog.text

    @pytest.mark.parametrize("content", ["", "   ", "{not json", json.dumps({"workers": -1})])
    def test_fallback_to_defaults(self, tmp_path, content):
        path = tmp_path / "config.json"
        path.write_text(content, encoding="utf-8")
        assert RevLogicConfig.from_config_file(str(path)) == RevLogicConfig()

    def test_missing_file(self, tmp_path):
        assert RevLogicConfig.from_config_file(str(tmp_path / "nope.json")) == RevLogicConfig()

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("REVLOGIC_FAULT_SAMPLES", "50")
        monkeypatch.setenv("REVLOGIC_LOG_LEVEL", "DEBUG")
        monkeypatch.setenv("REVLOGIC_WORKERS", "many")
        config = RevLogicConfig().with_env_overrides()
        assert config.fault_samples == 50
        assert config.log_level == "DEBUG"
        assert config.workers == 1

    def test_no_overrides_returns_same_object(self, monkeypatch):
        for name in ("REVLOGIC_EXHAUSTIVE_LIMIT", "REVLOGIC_FAULT_SAMPLES", "REVLOGIC_FAULT_SEED",
                     "REVLOGIC_WORKERS", "REVLOGIC_LOG_LEVEL", "REVLOGIC_LOG_FILE"):
            monkeypatch.delenv(name, raising=False)
        config = RevLogicConfig()
        assert config.with_env_overrides() is config

    def test_active_config(self, monkeypatch):
        monkeypatch.setenv("REVLOGIC_FAULT_SEED", "99")
        set_config(None)
        assert get_config().fault_seed == 99
        custom = RevLogicConfig(workers=2)
        set_config(custom)
        assert get_config() is custom


class TestEnvFile:
    def test_load_env_file(self, tmp_path, monkeypatch):
        monkeypatch.delenv("REVLOGIC_FAULT_SEED", raising=False)
        env = tmp_path / ".env"
        env.write_text("REVLOGIC_FAULT_SEED=42\n", encoding="utf-8")
        assert load_env_file(str(env))
        assert active_overrides()["REVLOGIC_FAULT_SEED"] == "42"
        assert RevLogicConfig().with_env_overrides().fault_seed == 42

    def test_existing_environment_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv("REVLOGIC_FAULT_SEED", "7")
        env = tmp_path / ".env"
        env.write_text("REVLOGIC_FAULT_SEED=42\n", encoding="utf-8")
        load_env_file(str(env))
        assert active_overrides()["REVLOGIC_FAULT_SEED"] == "7"

    def test_missing_env_file(self, tmp_path):
        assert not load_env_file(str(tmp_path / ".env"))
