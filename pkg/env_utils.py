#!/usr/bin/env python3
"""
环境变量加载工具
支持从.env文件加载 REVLOGIC_* 配置覆盖
"""

import os
import logging
from pathlib import Path

from dotenv import load_dotenv

from revlogic.rl_config import ENV_OVERRIDES

logger = logging.getLogger(__name__)


def load_env_file(env_path: str = ".env") -> bool:
    """从.env文件加载环境变量，已存在的环境变量不被覆盖"""
    env_file = Path(env_path)

    if not env_file.exists():
        return False

    try:
        load_dotenv(env_file, override=False)
        logger.info(f"已从 {env_path} 加载环境变量")
        return True
    except Exception as e:
        logger.error(f"加载环境变量失败: {e}")
        return False


def active_overrides() -> dict:
    """当前生效的 REVLOGIC_* 环境变量"""
    return {name: os.environ[name] for name in ENV_OVERRIDES if os.environ.get(name)}


if __name__ == "__main__":
    load_env_file()
    overrides = active_overrides()
    if overrides:
        print("✅ 已设置的配置覆盖:")
        for name, value in overrides.items():
            print(f"   {name}={value}")
    else:
        print("未设置任何 REVLOGIC_* 环境变量，使用配置文件或默认值")
