#!/usr/bin/env python3
"""
可逆门模块 - 位向量、门抽象、标准门与保奇偶门目录

门的映射统一用长度为 2^N 的置换表表示：输入第 k 位（第 k 条线）
对应表下标的第 k 个二进制位，输出同理。
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .rl_config import get_config
from .rl_errors import ArityError, CapacityError, GateError

logger = logging.getLogger(__name__)

UNSPECIFIED = "unspecified"


def _parity(value: int) -> int:
    return bin(value).count("1") & 1


@dataclass(frozen=True)
class BitVector:
    """定宽位向量，下标0为最低位"""
    bits: Tuple[int, ...]

    def __post_init__(self):
        raw = tuple(self.bits)
        if not raw:
            raise ArityError("位向量宽度至少为1")
        for b in raw:
            if isinstance(b, str) or b not in (0, 1):
                raise ValueError(f"位向量只能包含0或1，收到: {b!r}")
        object.__setattr__(self, "bits", tuple(int(b) for b in raw))

    @property
    def width(self) -> int:
        return len(self.bits)

    @classmethod
    def from_integer(cls, value: int, width: int) -> "BitVector":
        if width < 1:
            raise ArityError(f"位宽必须为正数，收到: {width}")
        if value < 0 or value >= (1 << width):
            raise ValueError(f"整数 {value} 超出 {width} 位的表示范围")
        return cls(tuple((value >> k) & 1 for k in range(width)))

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """按字符顺序解析，第一个字符为下标0"""
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"无效的位串: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def to_integer(self) -> int:
        return sum(b << k for k, b in enumerate(self.bits))

    def parity(self) -> int:
        return sum(self.bits) & 1

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, index: int) -> int:
        return self.bits[index]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class Gate:
    """N 入 N 出的门，table[i] 为输入编码 i 的输出编码"""
    name: str
    arity: int
    table: Tuple[int, ...]
    quantum_cost: Optional[int] = None
    parity_preserving: bool = False

    def __post_init__(self):
        if self.arity < 1:
            raise GateError(f"门 {self.name} 的端口数必须为正数")
        table = tuple(self.table)
        size = 1 << self.arity
        if len(table) != size:
            raise GateError(f"门 {self.name} 的映射表长度应为 {size}，实际 {len(table)}")
        if any(not 0 <= v < size for v in table):
            raise GateError(f"门 {self.name} 的映射表含越界取值")
        if self.quantum_cost is not None and self.quantum_cost < 0:
            raise GateError(f"门 {self.name} 的量子代价不能为负")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, name: str, arity: int,
                      fn: Callable[[Tuple[int, ...]], Sequence[int]],
                      quantum_cost: Optional[int] = None,
                      parity_preserving: bool = False) -> "Gate":
        """由逐位函数穷举生成映射表"""
        table = []
        for index in range(1 << arity):
            bits = tuple((index >> k) & 1 for k in range(arity))
            out = tuple(fn(bits))
            if len(out) != arity:
                raise GateError(f"门 {name} 的函数输出宽度应为 {arity}")
            table.append(sum((b & 1) << k for k, b in enumerate(out)))
        return cls(name, arity, tuple(table), quantum_cost, parity_preserving)


MappingLike = Union[Gate, Sequence[int], Callable[[BitVector], BitVector]]


def apply(gate: Gate, vector: BitVector) -> BitVector:
    """对位向量施加门"""
    if vector.width != gate.arity:
        raise ArityError(f"门 {gate.name} 需要 {gate.arity} 位输入，收到 {vector.width} 位")
    return BitVector.from_integer(gate.table[vector.to_integer()], gate.arity)


def _resolve_table(mapping: MappingLike, arity: Optional[int], limit: int) -> Tuple[int, Tuple[int, ...]]:
    if isinstance(mapping, Gate):
        arity = mapping.arity
        if arity > limit:
            raise CapacityError(f"门 {mapping.name} 有 {arity} 位，超过穷举上限 {limit}")
        return arity, mapping.table
    if callable(mapping):
        if arity is None:
            raise ArityError("以函数形式给出映射时必须指定 arity")
        if arity > limit:
            raise CapacityError(f"{arity} 位映射超过穷举上限 {limit}")
        table = []
        for index in range(1 << arity):
            out = mapping(BitVector.from_integer(index, arity))
            if out.width != arity:
                raise ArityError(f"映射输出宽度 {out.width} 与输入宽度 {arity} 不一致")
            table.append(out.to_integer())
        return arity, tuple(table)
    table = tuple(mapping)
    size = len(table)
    width = size.bit_length() - 1
    if size == 0 or (1 << width) != size:
        raise ArityError(f"映射表长度 {size} 不是2的幂")
    if arity is not None and arity != width:
        raise ArityError(f"映射表长度 {size} 与 arity={arity} 不一致")
    if width > limit:
        raise CapacityError(f"{width} 位映射超过穷举上限 {limit}")
    return width, table


def is_reversible(mapping: MappingLike, arity: Optional[int] = None,
                  limit: Optional[int] = None) -> bool:
    """穷举检查映射是否为 2^N 输入空间上的双射"""
    limit = get_config().exhaustive_limit if limit is None else limit
    width, table = _resolve_table(mapping, arity, limit)
    size = 1 << width
    return len(table) == size and len(set(table)) == size and all(0 <= v < size for v in table)


@lru_cache(maxsize=None)
def is_parity_preserving(gate: Gate) -> bool:
    """所有输入下输入各位异或等于输出各位异或"""
    return all(_parity(index) == _parity(out) for index, out in enumerate(gate.table))


def parity_counterexample(gate: Gate) -> Optional[BitVector]:
    """返回第一个破坏奇偶性的输入，没有则返回 None"""
    for index, out in enumerate(gate.table):
        if _parity(index) != _parity(out):
            return BitVector.from_integer(index, gate.arity)
    return None


def inverse(gate: Gate) -> Gate:
    """逆门；对合门返回自身，量子代价不变"""
    if not is_reversible(gate, limit=max(gate.arity, 1)):
        raise GateError(f"门 {gate.name} 不是双射，无法求逆")
    inv = [0] * len(gate.table)
    for index, out in enumerate(gate.table):
        inv[out] = index
    inv_table = tuple(inv)
    if inv_table == gate.table:
        return gate
    return Gate(f"{gate.name}_INV", gate.arity, inv_table, gate.quantum_cost, gate.parity_preserving)


def quantum_cost(gate: Gate) -> Union[int, str]:
    """目录常量；未登记时返回 "unspecified" """
    return UNSPECIFIED if gate.quantum_cost is None else gate.quantum_cost


def flatten_cascade(name: str, arity: int, steps: Sequence[Tuple[Gate, Sequence[int]]],
                    quantum_cost: Optional[int] = None,
                    parity_preserving: bool = False) -> Gate:
    """把若干门在 arity 条线上的级联压平为一个门"""
    table = []
    for index in range(1 << arity):
        state = [(index >> k) & 1 for k in range(arity)]
        for gate, positions in steps:
            packed = sum(state[p] << k for k, p in enumerate(positions))
            out = gate.table[packed]
            for k, p in enumerate(positions):
                state[p] = (out >> k) & 1
        table.append(sum(b << k for k, b in enumerate(state)))
    return Gate(name, arity, tuple(table), quantum_cost, parity_preserving)


# ---------------------------------------------------------------------------
# 门目录
# ---------------------------------------------------------------------------

FEYNMAN = Gate.from_function("FEYNMAN", 2, lambda v: (v[0], v[0] ^ v[1]), quantum_cost=1)

F2G = Gate.from_function(
    "F2G", 3, lambda v: (v[0], v[0] ^ v[1], v[0] ^ v[2]),
    quantum_cost=2, parity_preserving=True)

TOFFOLI = Gate.from_function(
    "TOFFOLI", 3, lambda v: (v[0], v[1], (v[0] & v[1]) ^ v[2]), quantum_cost=5)

PERES = Gate.from_function(
    "PERES", 3, lambda v: (v[0], v[0] ^ v[1], (v[0] & v[1]) ^ v[2]), quantum_cost=4)

# 控制线为第0条线：A=0 直通，A=1 交换
FREDKIN = Gate.from_function(
    "FREDKIN", 3,
    lambda v: (v[0],
               ((1 - v[0]) & v[1]) ^ (v[0] & v[2]),
               ((1 - v[0]) & v[2]) ^ (v[0] & v[1])),
    quantum_cost=5, parity_preserving=True)

NFT = Gate.from_function(
    "NFT", 3,
    lambda v: (v[0] ^ v[1],
               ((1 - v[1]) & v[2]) ^ (v[0] & (1 - v[2])),
               (v[1] & v[2]) ^ (v[0] & (1 - v[2]))),
    quantum_cost=5, parity_preserving=True)

# 第四个输出 AB'⊕D 是使输入输出奇偶相等的唯一补全
IG = Gate.from_function(
    "IG", 4,
    lambda v: (v[0],
               v[0] ^ v[1],
               (v[0] & v[1]) ^ v[2],
               (v[0] & (1 - v[1])) ^ v[3]),
    parity_preserving=True)

# 两个5x5全加门由目录中的保奇偶门级联压平得到；
# 输入 (A, B, C, 0, 0) 时和与进位出现在 ADDER_PORTS 指定的位置
PPPG = flatten_cascade(
    "PPPG", 5,
    [(IG, (0, 1, 3, 4)), (IG, (1, 2, 3, 4))],
    parity_preserving=True)

F2PG = flatten_cascade(
    "F2PG", 5,
    [(F2G, (0, 1, 3)), (F2G, (2, 4, 0)), (FREDKIN, (1, 3, 2)), (F2G, (1, 4, 0))],
    parity_preserving=True)

# 门名 -> (和输出位置, 进位输出位置)
ADDER_PORTS: Mapping[str, Tuple[int, int]] = MappingProxyType({
    "PPPG": (2, 3),
    "F2PG": (4, 3),
})


def _adder_contract_holds(gate: Gate) -> bool:
    sum_pos, carry_pos = ADDER_PORTS[gate.name]
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                out = gate.table[a | (b << 1) | (c << 2)]
                if (out >> sum_pos) & 1 != a ^ b ^ c:
                    return False
                if (out >> carry_pos) & 1 != (a & b) | (b & c) | (a & c):
                    return False
    return True


def validate_catalog(catalog: Mapping[str, Gate]) -> None:
    """启动自检：双射、奇偶登记与实测一致、全加门契约"""
    for name, gate in catalog.items():
        if name != gate.name:
            raise GateError(f"目录键 {name} 与门名 {gate.name} 不一致")
        if not is_reversible(gate):
            raise GateError(f"目录门 {name} 不是双射")
        if is_parity_preserving(gate) != gate.parity_preserving:
            raise GateError(f"目录门 {name} 的保奇偶登记与实测不符")
        if name in ADDER_PORTS and not _adder_contract_holds(gate):
            raise GateError(f"目录门 {name} 不满足全加器契约")
    logger.debug(f"门目录自检通过: {', '.join(catalog)}")


CATALOG: Mapping[str, Gate] = MappingProxyType({
    gate.name: gate
    for gate in (FEYNMAN, F2G, TOFFOLI, PERES, FREDKIN, NFT, IG, PPPG, F2PG)
})

validate_catalog(CATALOG)


def get_gate(name: str) -> Gate:
    """按名称（大写）取目录门"""
    try:
        return CATALOG[name.upper()]
    except KeyError:
        raise GateError(f"未知的门: {name}") from None


def catalog_summary() -> Dict[str, Dict[str, object]]:
    """目录概要：端口数、量子代价、是否保奇偶"""
    return {
        name: {
            "arity": gate.arity,
            "quantum_cost": quantum_cost(gate),
            "parity_preserving": gate.parity_preserving,
        }
        for name, gate in CATALOG.items()
    }
