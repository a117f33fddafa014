#!/usr/bin/env python3
"""
网表文本格式 - 解析（带定位诊断）与规范化输出

    revnet 1
    #! design = 2
    perm SWAP 2 0 2 1 3
    line a in out a
    line k0 const0 garbage
    gate F2G a k0 k1

规则：
- 第一条语句必须是 `revnet 1`
- `#` 到行尾为注释；以 `#!` 开头的整行为元数据 `key = value`，随文档保留
- 线必须先声明后使用；缺省输出子句即垃圾输出
- `perm NAME ARITY v0 .. v{2^ARITY-1}` 声明内联门，ARITY 不超过 8
解析器对任何输入都不抛异常，错误以诊断列表返回。
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .rl_errors import GateError, NetlistFormatError, WiringError
from .rl_gates import CATALOG, Gate, is_parity_preserving, is_reversible
from .rl_netlist import GateInstance, Line, Netlist, Source

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAX_PERM_ARITY = 8

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.@\[\]]*")
_INT = re.compile(r"[0-9]{1,9}")
_TOKEN = re.compile(r"\S+")
_META = re.compile(r"#!\s*([A-Za-z_][A-Za-z0-9_.-]*)\s*=\s*(.*?)\s*$")

_SOURCES = {source.value: source for source in Source}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    line: int
    column: int
    message: str
    token: str = ""

    def __str__(self) -> str:
        near = f" (near {self.token!r})" if self.token else ""
        return f"{self.line}:{self.column}: {self.severity}: {self.message}{near}"


@dataclass(frozen=True)
class NetlistDocument:
    """解析后的文档：网表 + 元数据（保持出现顺序）"""
    netlist: Netlist
    metadata: Tuple[Tuple[str, str], ...] = ()
    version: int = FORMAT_VERSION

    @property
    def meta(self) -> Dict[str, str]:
        return dict(self.metadata)


@dataclass
class ParseResult:
    document: Optional[NetlistDocument] = None
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def warnings(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "warning"]

    @property
    def ok(self) -> bool:
        return self.document is not None and not self.errors


class _Parser:
    def __init__(self):
        self.diagnostics: List[Diagnostic] = []
        self.metadata: Dict[str, str] = {}
        self.perms: Dict[str, Gate] = {}
        self.lines: List[Line] = []
        self.line_index: Dict[str, int] = {}
        self.output_names: Dict[str, int] = {}
        self.gates: List[GateInstance] = []
        self.header_seen = False

    def error(self, lineno: int, column: int, message: str, token: str = "") -> None:
        self.diagnostics.append(Diagnostic("error", lineno, column, message, token))

    def warning(self, lineno: int, column: int, message: str, token: str = "") -> None:
        self.diagnostics.append(Diagnostic("warning", lineno, column, message, token))

    # ------------------------------------------------------------------

    def run(self, text: str) -> ParseResult:
        physical = text.splitlines()
        for lineno, raw in enumerate(physical, start=1):
            stripped = raw.lstrip()
            if stripped.startswith("#!"):
                self.metadata_line(lineno, raw, len(raw) - len(stripped) + 1)
                continue
            code = raw.split("#", 1)[0]
            tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]
            if tokens:
                self.statement(lineno, tokens)

        end = len(physical) + 1
        if not self.header_seen:
            self.error(1, 1, "缺少文件头 `revnet 1`")
        if not self.lines:
            self.error(end, 1, "文档没有声明任何线")

        if any(d.severity == "error" for d in self.diagnostics):
            return ParseResult(None, self.diagnostics)
        try:
            net = Netlist(tuple(self.lines), tuple(self.gates))
        except (WiringError, GateError, ValueError) as e:
            self.error(end, 1, f"无法构成网表: {e}")
            return ParseResult(None, self.diagnostics)
        return ParseResult(NetlistDocument(net, tuple(self.metadata.items())), self.diagnostics)

    def metadata_line(self, lineno: int, raw: str, column: int) -> None:
        match = _META.match(raw.strip())
        if not match:
            self.warning(lineno, column, "元数据应为 `#! key = value`，已忽略", raw.strip())
            return
        key, value = match.group(1), match.group(2)
        if key in self.metadata:
            self.warning(lineno, column, f"元数据 {key} 重复，以最后一次为准", key)
        self.metadata[key] = value

    def statement(self, lineno: int, tokens: List[Tuple[str, int]]) -> None:
        keyword, column = tokens[0]
        if not self.header_seen:
            if keyword != "revnet":
                self.error(lineno, column, "第一条语句必须是 `revnet 1`", keyword)
                self.header_seen = True
                return
            self.header_seen = True
            self.header(lineno, tokens)
            return
        handler = {
            "line": self.line_decl,
            "gate": self.gate_stmt,
            "perm": self.perm_decl,
        }.get(keyword)
        if keyword == "revnet":
            self.error(lineno, column, "文件头重复", keyword)
        elif handler is None:
            self.error(lineno, column, f"未知的语句: {keyword}", keyword)
        else:
            handler(lineno, tokens)

    def header(self, lineno: int, tokens: List[Tuple[str, int]]) -> None:
        if len(tokens) != 2:
            self.error(lineno, tokens[0][1], "文件头应为 `revnet 1`", tokens[0][0])
            return
        version, column = tokens[1]
        if version != str(FORMAT_VERSION):
            self.error(lineno, column, f"不支持的格式版本: {version}", version)

    def _name(self, lineno: int, token: Tuple[str, int], what: str) -> bool:
        text, column = token
        if _NAME.fullmatch(text):
            return True
        self.error(lineno, column, f"无效的{what}名", text)
        return False

    def line_decl(self, lineno: int, tokens: List[Tuple[str, int]]) -> None:
        if len(tokens) < 3:
            self.error(lineno, tokens[0][1], "线声明应为 `line NAME in|const0|const1 [out NAME|garbage]`",
                       tokens[0][0])
            return
        name_tok, source_tok = tokens[1], tokens[2]
        if not self._name(lineno, name_tok, "线"):
            return
        name = name_tok[0]
        source = _SOURCES.get(source_tok[0])
        if source is None:
            self.error(lineno, source_tok[1], "线的来源只能是 in、const0 或 const1", source_tok[0])
            return

        output = None
        rest = tokens[3:]
        if rest:
            if rest[0][0] == "garbage" and len(rest) == 1:
                pass
            elif rest[0][0] == "out" and len(rest) == 2:
                if not self._name(lineno, rest[1], "输出"):
                    return
                output = rest[1][0]
                if output in self.output_names:
                    self.error(lineno, rest[1][1], f"功能输出名重复: {output}", output)
                    return
            else:
                self.error(lineno, rest[0][1], "输出子句应为 `out NAME` 或 `garbage`", rest[0][0])
                return

        if name in self.line_index:
            self.error(lineno, name_tok[1], f"线名重复: {name}", name)
            return
        self.line_index[name] = len(self.lines)
        if output is not None:
            self.output_names[output] = len(self.lines)
        self.lines.append(Line(name, source, output))

    def _lookup_gate(self, name: str) -> Optional[Gate]:
        if name in self.perms:
            return self.perms[name]
        return CATALOG.get(name.upper())

    def gate_stmt(self, lineno: int, tokens: List[Tuple[str, int]]) -> None:
        if len(tokens) < 2:
            self.error(lineno, tokens[0][1], "门语句应为 `gate NAME L1 .. Lk`", tokens[0][0])
            return
        gate_name, gate_col = tokens[1]
        gate = self._lookup_gate(gate_name)
        if gate is None:
            self.error(lineno, gate_col, f"未知的门: {gate_name}", gate_name)
            return
        operands = tokens[2:]
        if len(operands) != gate.arity:
            self.error(lineno, gate_col,
                       f"门 {gate.name} 需要 {gate.arity} 条线，实际 {len(operands)} 条", gate_name)
            return
        bindings: List[int] = []
        ok = True
        for text, column in operands:
            if text not in self.line_index:
                self.error(lineno, column, f"未声明的线: {text}", text)
                ok = False
                continue
            index = self.line_index[text]
            if index in bindings:
                self.error(lineno, column, f"duplicate binding: 线 {text} 在同一个门中重复绑定", text)
                ok = False
                continue
            bindings.append(index)
        if ok:
            self.gates.append(GateInstance(gate, tuple(bindings)))

    def perm_decl(self, lineno: int, tokens: List[Tuple[str, int]]) -> None:
        if len(tokens) < 3:
            self.error(lineno, tokens[0][1], "内联门应为 `perm NAME ARITY v0 ..`", tokens[0][0])
            return
        name_tok, arity_tok = tokens[1], tokens[2]
        if not self._name(lineno, name_tok, "门"):
            return
        name = name_tok[0]
        if name.upper() in CATALOG or name in self.perms:
            self.error(lineno, name_tok[1], f"门名已存在: {name}", name)
            return
        if not _INT.fullmatch(arity_tok[0]) or not 1 <= int(arity_tok[0]) <= MAX_PERM_ARITY:
            self.error(lineno, arity_tok[1], f"内联门端口数应为 1..{MAX_PERM_ARITY}", arity_tok[0])
            return
        arity = int(arity_tok[0])
        size = 1 << arity
        values = tokens[3:]
        if len(values) != size:
            self.error(lineno, name_tok[1], f"内联门 {name} 需要 {size} 个表项，实际 {len(values)} 个", name)
            return
        table = []
        for text, column in values:
            if not _INT.fullmatch(text) or int(text) >= size:
                self.error(lineno, column, f"表项应为 0..{size - 1} 的整数", text)
                return
            table.append(int(text))

        probe = Gate(name, arity, tuple(table))
        gate = Gate(name, arity, tuple(table), parity_preserving=is_parity_preserving(probe))
        if not is_reversible(gate, limit=MAX_PERM_ARITY):
            self.warning(lineno, name_tok[1], f"内联门 {name} 不是双射", name)
        self.perms[name] = gate


def parse(text: Union[str, bytes]) -> ParseResult:
    """解析网表文本；不抛异常，失败时 document 为 None 且至少含一条错误诊断"""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            prefix = bytes(text[:e.start])
            lineno = prefix.count(b"\n") + 1
            column = e.start - (prefix.rfind(b"\n") + 1) + 1
            return ParseResult(None, [Diagnostic("error", lineno, column, "文本不是有效的 UTF-8")])
    result = _Parser().run(text)
    if result.errors:
        logger.debug(f"网表文本解析失败，{len(result.errors)} 条错误")
    return result


def loads(text: Union[str, bytes]) -> NetlistDocument:
    """解析网表文本，失败时抛出 NetlistFormatError（附带全部诊断）"""
    result = parse(text)
    if not result.ok:
        first = result.errors[0] if result.errors else None
        raise NetlistFormatError(f"网表文本解析失败: {first}", result.diagnostics)
    return result.document


# ---------------------------------------------------------------------------
# 输出
# ---------------------------------------------------------------------------

def _check_name(name: str, what: str) -> str:
    if not _NAME.fullmatch(name):
        raise WiringError(f"{what}名 {name!r} 无法写入网表文本")
    return name


def _inline_gates(net: Netlist) -> List[Gate]:
    """不在目录中（或与目录同名但映射不同）的门需要 perm 声明"""
    inline: Dict[str, Gate] = {}
    for inst in net.gates:
        gate = inst.gate
        known = CATALOG.get(gate.name.upper())
        if known is not None:
            if known.table != gate.table:
                raise GateError(f"门 {gate.name} 与目录同名但映射不同，无法写入网表文本")
            continue
        if gate.arity > MAX_PERM_ARITY:
            raise GateError(f"门 {gate.name} 端口数 {gate.arity} 超过内联上限 {MAX_PERM_ARITY}")
        seen = inline.get(gate.name)
        if seen is not None and seen.table != gate.table:
            raise GateError(f"存在两个同名但映射不同的门: {gate.name}")
        inline[_check_name(gate.name, "门")] = gate
    return list(inline.values())


def print_document(document: NetlistDocument) -> str:
    """规范化文本：文件头、元数据、内联门、线声明、门语句"""
    net = document.netlist
    out = [f"revnet {document.version}"]
    for key, value in document.metadata:
        out.append(f"#! {key} = {value}")
    for gate in _inline_gates(net):
        out.append(f"perm {gate.name} {gate.arity} " + " ".join(str(v) for v in gate.table))
    for line in net.lines:
        role = "garbage" if line.output is None else f"out {_check_name(line.output, '输出')}"
        out.append(f"line {_check_name(line.name, '线')} {line.source.value} {role}")
    names = net.line_names
    for inst in net.gates:
        out.append(f"gate {inst.gate.name} " + " ".join(names[b] for b in inst.bindings))
    return "\n".join(out) + "\n"


def from_netlist(net: Netlist, metadata: Optional[Sequence[Tuple[str, object]]] = None) -> NetlistDocument:
    pairs = tuple((str(k), str(v)) for k, v in (metadata or ()))
    return NetlistDocument(net, pairs)


def to_netlist(document: NetlistDocument) -> Netlist:
    return document.netlist


def dumps(net: Union[Netlist, NetlistDocument],
          metadata: Optional[Sequence[Tuple[str, object]]] = None) -> str:
    document = net if isinstance(net, NetlistDocument) else from_netlist(net, metadata)
    return print_document(document)
