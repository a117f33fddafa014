"""
可逆逻辑工具包 - 保奇偶可逆门、网表仿真、容错全加器与 ALU
"""

from .rl_errors import (
    RevLogicError,
    ArityError,
    CapacityError,
    WiringError,
    FaultSiteError,
    GateError,
    NetlistFormatError,
)
from .rl_config import RevLogicConfig, get_config, set_config
from .rl_gates import (
    BitVector,
    Gate,
    CATALOG,
    ADDER_PORTS,
    apply,
    is_reversible,
    is_parity_preserving,
    inverse,
    quantum_cost,
    get_gate,
)
from .rl_netlist import (
    Source,
    Line,
    GateInstance,
    Netlist,
    NetlistBuilder,
    CostReport,
    ParityVerdict,
    simulate,
    simulate_lines,
    truth_table,
    verify_parity_preserving,
    verify_bijective,
    cost_report,
    compose,
    parallel,
    reverse,
)
from .rl_adders import FtfaVariant, build_ftfa, build_rca
from .rl_alu import (
    AluOpcode,
    FunctionTableRow,
    FunctionTableReport,
    ARITHMETIC_TABLE,
    LOGIC_TABLE,
    ALU_TABLE,
    build_y_selector,
    build_arith_unit,
    build_logic_unit,
    build_function_selector,
    build_alu_design1,
    build_alu_design2,
    build_alu,
    verify_function_table,
    compare_costs,
    format_cost_tables,
)
from .rl_faults import FaultSite, FaultScanReport, simulate_with_fault, fault_scan
from .rl_dsl import Diagnostic, NetlistDocument, ParseResult, parse, loads, dumps

__all__ = [
    'RevLogicError', 'ArityError', 'CapacityError', 'WiringError',
    'FaultSiteError', 'GateError', 'NetlistFormatError',
    'RevLogicConfig', 'get_config', 'set_config',
    'BitVector', 'Gate', 'CATALOG', 'ADDER_PORTS', 'apply', 'is_reversible',
    'is_parity_preserving', 'inverse', 'quantum_cost', 'get_gate',
    'Source', 'Line', 'GateInstance', 'Netlist', 'NetlistBuilder', 'CostReport',
    'ParityVerdict', 'simulate', 'simulate_lines', 'truth_table',
    'verify_parity_preserving', 'verify_bijective', 'cost_report', 'compose',
    'parallel', 'reverse',
    'FtfaVariant', 'build_ftfa', 'build_rca',
    'AluOpcode', 'FunctionTableRow', 'FunctionTableReport', 'ARITHMETIC_TABLE',
    'LOGIC_TABLE', 'ALU_TABLE', 'build_y_selector', 'build_arith_unit',
    'build_logic_unit', 'build_function_selector', 'build_alu_design1',
    'build_alu_design2', 'build_alu', 'verify_function_table', 'compare_costs',
    'format_cost_tables',
    'FaultSite', 'FaultScanReport', 'simulate_with_fault', 'fault_scan',
    'Diagnostic', 'NetlistDocument', 'ParseResult', 'parse', 'loads', 'dumps',
]
