#!/usr/bin/env python3
"""
可逆逻辑工具包异常定义
"""

from typing import List, Optional


class RevLogicError(Exception):
    """工具包所有异常的基类"""


class ArityError(RevLogicError, ValueError):
    """输入位宽与门/网表端口数不一致"""


class CapacityError(RevLogicError, ValueError):
    """穷举规模超过配置上限"""


class WiringError(RevLogicError, ValueError):
    """连线错误：重复绑定、重名、悬空的连接映射"""


class FaultSiteError(RevLogicError, ValueError):
    """故障注入位置无效"""


class GateError(RevLogicError, ValueError):
    """门定义无效或门目录自检失败"""


class NetlistFormatError(RevLogicError):
    """网表文本无法解析，附带全部诊断信息"""

    def __init__(self, message: str, diagnostics: Optional[List] = None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])
