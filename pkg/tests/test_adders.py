#!/usr/bin/env python3
"""
容错全加器与行波进位加法器测试
"""

import numpy as np
import pytest

from conftest import exhaustive_signals, word
from revlogic.rl_adders import FtfaVariant, build_ftfa, build_rca
from revlogic.rl_errors import WiringError
from revlogic.rl_netlist import cost_report, simulate, verify_parity_preserving

VARIANTS = list(FtfaVariant)


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.value)
class TestFtfa:
    def test_full_adder_oracle(self, variant):
        net = build_ftfa(variant)
        assert net.inputs == ("a", "b", "cin")
        assert set(net.outputs) == {"sum", "cout"}
        for code in range(8):
            a, b, c = code & 1, (code >> 1) & 1, (code >> 2) & 1
            out = net.read(simulate(net, net.drive({"a": a, "b": b, "cin": c})))
            assert out["sum"] == a ^ b ^ c
            assert out["cout"] == (a & b) | (b & c) | (a & c)

    def test_parity_preserving(self, variant):
        net = build_ftfa(variant)
        assert verify_parity_preserving(net, "structural")
        assert verify_parity_preserving(net, "exhaustive")

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_ripple_carry_matches_integer_addition(self, variant, n):
        net = build_rca(n, variant)
        columns, outputs = exhaustive_signals(net)
        total = word(outputs, "f", n) + (outputs["cout"] << n)
        expected = word(columns, "a", n) + word(columns, "b", n) + columns["cin"]
        assert np.array_equal(total, expected)


@pytest.mark.parametrize("variant, expected", [
    (FtfaVariant.IG_8, (2, 3, 2)),
    (FtfaVariant.PPPG_6, (1, 3, 2)),
    (FtfaVariant.F2PG_13, (1, 3, 2)),
    (FtfaVariant.COMPOSITE_12_14, (8, 10, 9)),
])
def test_published_costs(variant, expected):
    report = cost_report(build_ftfa(variant))
    assert (report.gate_count, report.garbage_outputs, report.constant_inputs) == expected


def test_composite_quantum_cost():
    assert cost_report(build_ftfa(FtfaVariant.COMPOSITE_12_14)).quantum_cost == 22
    assert cost_report(build_ftfa(FtfaVariant.IG_8)).quantum_cost is None


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.value)
def test_rca_cost_scales_linearly(variant):
    one = cost_report(build_ftfa(variant))
    four = cost_report(build_rca(4, variant))
    assert four.gate_count == 4 * one.gate_count
    assert four.constant_inputs == 4 * one.constant_inputs
    assert four.garbage_outputs == 4 * one.garbage_outputs


def test_rca_ports():
    net = build_rca(2, FtfaVariant.IG_8)
    assert set(net.signals) == {"a0", "b0", "cin", "a1", "b1"}
    assert set(net.outputs) == {"f0", "f1", "cout"}


def test_rca_width_must_be_positive():
    with pytest.raises(WiringError):
        build_rca(0, FtfaVariant.IG_8)


class TestVariantTags:
    @pytest.mark.parametrize("tag, variant", [
        ("pppg", FtfaVariant.PPPG_6),
        ("PPPG", FtfaVariant.PPPG_6),
        ("c1214", FtfaVariant.COMPOSITE_12_14),
        ("ig_8", FtfaVariant.IG_8),
    ])
    def test_from_tag(self, tag, variant):
        assert FtfaVariant.from_tag(tag) is variant

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            FtfaVariant.from_tag("nft")
