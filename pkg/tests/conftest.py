#!/usr/bin/env python3
"""
测试公共夹具与辅助函数
"""

import logging
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pytest

from revlogic.rl_config import set_config
from revlogic.rl_netlist import Netlist, input_space, signal_of, simulate, simulate_batch

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def reset_state():
    """每个用例使用默认配置，并还原根日志处理器"""
    root = logging.getLogger()
    handlers = list(root.handlers)
    level = root.level
    set_config(None)
    yield
    set_config(None)
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


def exhaustive_signals(net: Netlist) -> Tuple[Dict[str, np.ndarray], Dict[str, np.ndarray]]:
    """穷举全部外部信号，返回 (信号列, 功能输出列)"""
    signals = net.signals
    space = input_space(len(signals)).astype(np.int64)
    columns = {s: space[:, k] for k, s in enumerate(signals)}
    return columns, drive_batch(net, columns)


def drive_batch(net: Netlist, columns: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    matrix = np.stack([columns[signal_of(name)] for name in net.inputs], axis=1).astype(np.uint8)
    outs = simulate_batch(net, matrix).astype(np.int64)
    return {name: outs[:, k] for k, name in enumerate(net.outputs)}


def word(columns: Dict[str, np.ndarray], prefix: str, n: int) -> np.ndarray:
    return sum(columns[f"{prefix}{i}"].astype(np.int64) << i for i in range(n))


def run_word(net: Netlist, n: int, a: int, b: int, **selects: int) -> int:
    """单组操作数运行 ALU，返回 f0..f{n-1} 组成的整数"""
    values = {f"a{i}": (a >> i) & 1 for i in range(n)}
    values.update({f"b{i}": (b >> i) & 1 for i in range(n)})
    values.setdefault("cin", 0)
    values.update(selects)
    out = net.read(simulate(net, net.drive(values)))
    return sum(out[f"f{i}"] << i for i in range(n))
