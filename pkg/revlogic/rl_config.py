#!/usr/bin/env python3
"""
可逆逻辑工具包配置模块
"""

import os
import json
import logging
from dataclasses import dataclass, fields, replace
from typing import Optional

logger = logging.getLogger(__name__)

# 环境变量名 -> 配置字段
ENV_OVERRIDES = {
    "REVLOGIC_EXHAUSTIVE_LIMIT": "exhaustive_limit",
    "REVLOGIC_FAULT_SAMPLES": "fault_samples",
    "REVLOGIC_FAULT_SEED": "fault_seed",
    "REVLOGIC_WORKERS": "workers",
    "REVLOGIC_LOG_LEVEL": "log_level",
    "REVLOGIC_LOG_FILE": "log_file",
}


@dataclass(frozen=True)
class RevLogicConfig:
    """工具包配置"""
    # 穷举配置：任何穷举扫描允许的最大自由位数
    exhaustive_limit: int = 20

    # 故障扫描配置
    fault_samples: int = 1000
    fault_seed: int = 2013
    workers: int = 1

    # 日志配置
    log_level: str = "INFO"
    log_file: str = ""

    def __post_init__(self):
        if self.exhaustive_limit < 12:
            raise ValueError(f"exhaustive_limit 至少为12，当前: {self.exhaustive_limit}")
        if self.exhaustive_limit > 30:
            raise ValueError(f"exhaustive_limit 不能超过30，当前: {self.exhaustive_limit}")
        if self.fault_samples < 1:
            raise ValueError(f"fault_samples 必须为正数，当前: {self.fault_samples}")
        if self.workers < 1:
            raise ValueError(f"workers 必须为正数，当前: {self.workers}")

    @classmethod
    def from_config_file(cls, config_path: str = "config.json") -> "RevLogicConfig":
        """从配置文件加载，失败时回退到默认配置"""
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config_data = f.read()
                if not config_data.strip():
                    logger.warning(f"配置文件 {config_path} 为空，使用默认配置")
                    return cls()

                config_dict = json.loads(config_data)
                known = {f.name for f in fields(cls)}
                unknown = sorted(set(config_dict) - known)
                if unknown:
                    logger.warning(f"配置文件 {config_path} 含未知字段，已忽略: {unknown}")
                return cls(**{k: v for k, v in config_dict.items() if k in known})
        except FileNotFoundError:
            logger.warning(f"配置文件 {config_path} 不存在，使用默认配置")
            return cls()
        except json.JSONDecodeError as e:
            logger.error(f"配置文件 {config_path} 格式错误: {e}，使用默认配置")
            return cls()
        except (TypeError, ValueError) as e:
            logger.error(f"配置文件 {config_path} 取值无效: {e}，使用默认配置")
            return cls()

    def with_env_overrides(self) -> "RevLogicConfig":
        """用 REVLOGIC_* 环境变量覆盖配置"""
        changes = {}
        for env_name, field_name in ENV_OVERRIDES.items():
            raw = os.environ.get(env_name)
            if raw is None or raw == "":
                continue
            if field_name in ("log_level", "log_file"):
                changes[field_name] = raw
                continue
            try:
                changes[field_name] = int(raw)
            except ValueError:
                logger.error(f"环境变量 {env_name}={raw!r} 不是整数，已忽略")
        if not changes:
            return self
        logger.info(f"环境变量覆盖配置: {changes}")
        return replace(self, **changes)


_active_config: Optional[RevLogicConfig] = None


def get_config() -> RevLogicConfig:
    """返回当前生效的配置（首次调用时取默认值并应用环境变量）"""
    global _active_config
    if _active_config is None:
        _active_config = RevLogicConfig().with_env_overrides()
    return _active_config


def set_config(config: Optional[RevLogicConfig]) -> None:
    """替换当前生效的配置；传入 None 恢复为默认"""
    global _active_config
    _active_config = config
