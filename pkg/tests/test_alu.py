#!/usr/bin/env python3
"""
ALU 构建、功能表校验与代价对照测试
"""

from dataclasses import replace

import numpy as np
import pytest

from conftest import drive_batch, exhaustive_signals, run_word
from revlogic.rl_adders import FtfaVariant
from revlogic.rl_alu import (
    ALU_TABLE,
    ARITHMETIC_TABLE,
    COST_REFERENCES,
    LOGIC_TABLE,
    AluOpcode,
    build_alu,
    build_alu_design1,
    build_alu_design2,
    build_arith_unit,
    build_fanout,
    build_function_selector,
    build_logic_unit,
    build_y_selector,
    compare_costs,
    design1_table,
    format_cost_tables,
    table_for,
    verify_function_table,
)
from revlogic.rl_errors import ArityError, WiringError
from revlogic.rl_gates import FEYNMAN, FREDKIN
from revlogic.rl_netlist import (
    GateInstance,
    Netlist,
    cost_report,
    input_space,
    simulate,
    verify_parity_preserving,
)

VARIANTS = list(FtfaVariant)


def gc_go_ci(net):
    report = cost_report(net)
    return report.gate_count, report.garbage_outputs, report.constant_inputs


class TestBlocks:
    @pytest.mark.parametrize("s1, s0, expect", [
        (0, 0, lambda b: 0),
        (0, 1, lambda b: b),
        (1, 0, lambda b: 1 - b),
        (1, 1, lambda b: 1),
    ])
    def test_y_selector(self, s1, s0, expect):
        net = build_y_selector()
        for b in (0, 1):
            out = net.read(simulate(net, net.drive({"b": b, "s1": s1, "s0": s0})))
            assert out == {"y": expect(b)}
        assert gc_go_ci(net) == (1, 2, 0)

    @pytest.mark.parametrize("copies, gates", [(1, 0), (2, 1), (3, 1), (4, 2), (5, 2)])
    def test_fanout(self, copies, gates):
        net = build_fanout("s", copies)
        assert len(net.gates) == gates
        assert all(inst.gate.name == "F2G" for inst in net.gates)
        assert net.outputs == tuple(f"s.{i}" for i in range(copies))
        for s in (0, 1):
            out = net.read(simulate(net, net.drive({"s": s})))
            assert set(out.values()) == {s}

    def test_fanout_needs_a_copy(self):
        with pytest.raises(WiringError):
            build_fanout("s", 0)

    def test_function_selector_equations(self):
        """X = A + S2·S0'·(S1⊕B)，Y = S0·B + S1·B'，Z = S2'·C"""
        net = build_function_selector()
        assert set(net.signals) == {"a", "b", "c", "s2", "s1", "s0"}
        columns, out = exhaustive_signals(net)
        a, b, c = columns["a"], columns["b"], columns["c"]
        s2, s1, s0 = columns["s2"], columns["s1"], columns["s0"]
        assert np.array_equal(out["x"], a | (s2 & (1 - s0) & (s1 ^ b)))
        assert np.array_equal(out["y"], (s0 & b) | (s1 & (1 - b)))
        assert np.array_equal(out["z"], (1 - s2) & c)

    def test_function_selector_reduces_for_arithmetic(self):
        net = build_function_selector()
        columns, out = exhaustive_signals(net)
        arith = columns["s2"] == 0
        assert np.array_equal(out["x"][arith], columns["a"][arith])
        assert np.array_equal(out["z"][arith], columns["c"][arith])
        assert not out["z"][columns["s2"] == 1].any()

    def test_x_differs_from_a_in_logic_mode(self):
        """S2=1, S0=0 时 X 并不总等于 A，但功能表仍然全部成立"""
        net = build_function_selector()
        columns, out = exhaustive_signals(net)
        mask = (columns["s2"] == 1) & (columns["s0"] == 0)
        assert (out["x"][mask] != columns["a"][mask]).any()
        assert verify_function_table(build_alu_design2(4, FtfaVariant.PPPG_6), ALU_TABLE, 4).passed

    def test_or_row_sample(self):
        net = build_function_selector()
        out = net.read(simulate(
            net, net.drive({"a": 1, "b": 1, "c": 0, "s2": 1, "s1": 0, "s0": 0})))
        assert out == {"x": 1, "y": 0, "z": 0}


class TestUnits:
    @pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.value)
    def test_arith_unit_table(self, variant):
        report = verify_function_table(build_arith_unit(4, variant), ARITHMETIC_TABLE, 4)
        assert report.passed
        assert report.total_checks == 8 * 256

    @pytest.mark.parametrize("cin, s1, s0, a, b, expected", [
        (1, 0, 0, 5, 0, 6),
        (1, 1, 0, 9, 3, 6),
        (0, 1, 1, 0, 7, 15),
    ])
    def test_arith_examples(self, cin, s1, s0, a, b, expected):
        net = build_arith_unit(4, FtfaVariant.IG_8)
        assert run_word(net, 4, a, b, s1=s1, s0=s0, cin=cin) == expected

    def test_logic_unit_table(self):
        report = verify_function_table(build_logic_unit(4), LOGIC_TABLE, 4)
        assert report.passed
        assert report.total_checks == 4 * 256

    @pytest.mark.parametrize("s1, s0, a, b, expected", [
        (0, 0, 0b1100, 0b1010, 0b1110),
        (0, 1, 0b1100, 0b1010, 0b0110),
        (1, 0, 0b1100, 0b1010, 0b1000),
        (1, 1, 0b1100, 0b0101, 0b0011),
    ])
    def test_logic_examples(self, s1, s0, a, b, expected):
        assert run_word(build_logic_unit(4), 4, a, b, s1=s1, s0=s0) == expected

    def test_logic_slice_cost(self):
        assert gc_go_ci(build_logic_unit(1)) == (7, 10, 7)

    def test_transfer_rows_agree(self):
        net = build_arith_unit(4, FtfaVariant.PPPG_6)
        operands = input_space(8).astype(np.int64)
        columns = {f"a{i}": operands[:, i] for i in range(4)}
        columns.update({f"b{i}": operands[:, 4 + i] for i in range(4)})
        ones = np.ones(256, dtype=np.int64)
        low = drive_batch(net, {**columns, "s1": 0 * ones, "s0": 0 * ones, "cin": 0 * ones})
        high = drive_batch(net, {**columns, "s1": ones, "s0": ones, "cin": ones})
        for i in range(4):
            assert np.array_equal(low[f"f{i}"], high[f"f{i}"])

    @pytest.mark.parametrize("n", [0, -1])
    def test_width_must_be_positive(self, n):
        with pytest.raises(WiringError):
            build_logic_unit(n)


class TestAlu:
    @pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.value)
    def test_design2_matches_complete_table(self, variant):
        report = verify_function_table(build_alu_design2(4, variant), ALU_TABLE, 4)
        assert report.passed, report.format()
        assert len(report.results) == 12
        assert report.total_checks == 8 * 256 + 4 * 512

    @pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.value)
    def test_design1_matches_unit_tables(self, variant):
        report = verify_function_table(build_alu_design1(4, variant), design1_table(), 4)
        assert report.passed, report.format()

    def test_design1_examples(self):
        net = build_alu_design1(4, FtfaVariant.PPPG_6)
        assert run_word(net, 4, 2, 3, s2=0, s1=0, s0=1, cin=0) == 5
        assert run_word(net, 4, 0b0110, 0b0011, s2=1, s1=1, s0=0) == 0b0010

    @pytest.mark.parametrize("s2, s1, s0, cin, a, b, expected", [
        (0, 1, 0, 0, 5, 3, 1),
        (1, 0, 1, 0, 0b0110, 0b0101, 0b0011),
        (0, 0, 0, 0, 11, 7, 11),
    ])
    def test_design2_examples(self, s2, s1, s0, cin, a, b, expected):
        net = build_alu_design2(4, FtfaVariant.PPPG_6)
        assert run_word(net, 4, a, b, s2=s2, s1=s1, s0=s0, cin=cin) == expected

    def test_designs_agree(self):
        one = build_alu_design1(4, FtfaVariant.IG_8)
        two = build_alu_design2(4, FtfaVariant.IG_8)
        operands = input_space(9).astype(np.int64)
        columns = {f"a{i}": operands[:, i] for i in range(4)}
        columns.update({f"b{i}": operands[:, 4 + i] for i in range(4)})
        columns["cin"] = operands[:, 8]
        for row in ALU_TABLE:
            fixed = {k: np.full(operands.shape[0], v, dtype=np.int64)
                     for k, v in row.opcode.assignments().items()}
            got_one = drive_batch(one, {**columns, **fixed})
            got_two = drive_batch(two, {**columns, **fixed})
            for i in range(4):
                assert np.array_equal(got_one[f"f{i}"], got_two[f"f{i}"]), row.expression

    def test_subtraction_identities(self):
        by_expr = {row.expression: row for row in ALU_TABLE}
        unit = {row.expression: row for row in ARITHMETIC_TABLE}
        a = np.arange(16)[:, None]
        b = np.arange(16)[None, :]
        m = 15
        assert np.array_equal(by_expr["A-B"].oracle(a, b, m) & m, unit["A+B'+1"].oracle(a, b, m) & m)
        assert np.array_equal(by_expr["A-B-1"].oracle(a, b, m) & m, unit["A+B'"].oracle(a, b, m) & m)

    @pytest.mark.parametrize("builder", [
        lambda: build_alu_design1(2, FtfaVariant.COMPOSITE_12_14),
        lambda: build_alu_design2(2, FtfaVariant.COMPOSITE_12_12),
        lambda: build_alu_design2(3, FtfaVariant.F2PG_13),
        lambda: build_arith_unit(3, FtfaVariant.IG_8),
        build_function_selector,
        build_y_selector,
    ])
    def test_only_parity_preserving_gates(self, builder):
        net = builder()
        assert verify_parity_preserving(net, "structural")
        assert all(inst.gate is not FEYNMAN for inst in net.gates)

    def test_corrupted_alu_is_caught(self):
        net = build_alu_design2(2, FtfaVariant.PPPG_6)
        position = next(i for i, inst in enumerate(net.gates) if inst.gate is FREDKIN)
        bad = net.gates[position]
        swapped = GateInstance(FREDKIN, (bad.bindings[1], bad.bindings[0], bad.bindings[2]))
        gates = net.gates[:position] + (swapped,) + net.gates[position + 1:]
        report = verify_function_table(Netlist(net.lines, gates), ALU_TABLE, 2)
        assert not report.passed
        failed = [r for r in report.results if not r.passed]
        assert failed[0].counterexample is not None
        assert "FAIL" in report.format()

    def test_missing_operands(self):
        with pytest.raises(ArityError):
            verify_function_table(build_logic_unit(2), LOGIC_TABLE, 3)

    def test_dispatch(self):
        assert build_alu(1, 1, FtfaVariant.IG_8) == build_alu_design1(1, FtfaVariant.IG_8)
        assert table_for(2) is ALU_TABLE
        with pytest.raises(ValueError):
            build_alu(3, 1, FtfaVariant.IG_8)

    def test_opcode_text(self):
        assert str(AluOpcode(1, 0, 1, None)) == "1 0 1 X"
        assert AluOpcode(None, 1, 1, 0).assignments() == {"s1": 1, "s0": 1, "cin": 0}

    def test_design1_table_rows(self):
        rows = design1_table()
        assert len(rows) == 12
        assert [r.opcode.s2 for r in rows] == [0] * 8 + [1] * 4
        assert replace(rows[0].opcode, s2=None) == ARITHMETIC_TABLE[0].opcode


class TestCostTables:
    @pytest.mark.parametrize("variant, expected", [
        (FtfaVariant.IG_8, (3, 5, 2)),
        (FtfaVariant.PPPG_6, (2, 5, 2)),
        (FtfaVariant.F2PG_13, (2, 5, 2)),
    ])
    def test_arith_slice(self, variant, expected):
        assert gc_go_ci(build_arith_unit(1, variant)) == expected

    @pytest.mark.parametrize("variant, expected", [
        (FtfaVariant.IG_8, (11, 17, 9)),
        (FtfaVariant.PPPG_6, (10, 17, 9)),
        (FtfaVariant.F2PG_13, (10, 17, 9)),
        (FtfaVariant.COMPOSITE_12_14, (17, 24, 16)),
    ])
    def test_design1_slice(self, variant, expected):
        assert gc_go_ci(build_alu_design1(1, variant)) == expected

    def test_required_rows_match(self):
        comparisons = compare_costs()
        required = [c for c in comparisons if c.reference.required]
        assert len(required) == 9
        assert all(c.deviation == 0 for c in required)
        assert all(c.ok for c in comparisons)

    def test_soft_rows_stay_close(self):
        by_label = {c.reference.label: c for c in compare_costs()}
        assert by_label["selector"].verdict == "within 2"
        assert by_label["logic"].verdict == "exact"
        assert by_label["alu2 pppg"].verdict == "off by 4"

    def test_mismatch_on_required_row_is_flagged(self):
        ref = replace(COST_REFERENCES[2], published=(9, 9, 9))
        [cmp] = compare_costs([ref])
        assert not cmp.ok
        assert cmp.verdict.startswith("MISMATCH")

    def test_golden_report(self, golden_dir):
        expected = (golden_dir / "tables.txt").read_text(encoding="utf-8")
        assert format_cost_tables(compare_costs()) + "\n" == expected
