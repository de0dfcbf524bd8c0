import json
from fractions import Fraction

import pytest

from moonframe.moonshine import (
    IrrepLabel,
    all_labels,
    assemble_character,
    char_of_label,
    decompose,
    mckay_thompson_4A,
    mu_image_order,
    mu_k,
    sigma_exponent_twisted,
    sigma_exponent_untwisted,
    slot_of_value,
    table_to_json,
    table_to_text,
    trace_sigma,
    verify_against_j,
)
from moonframe.qseries import series_b, theta_a, twisted_pair
from moonframe.zkcode import ZkCode


# -- labels and eigenvalue tables ----------------------------------------------

def test_label_normalization():
    assert IrrepLabel.vr(3, 5) == IrrepLabel.vr(3, 1)
    assert str(IrrepLabel.vr(4, 3)) == "V3"
    with pytest.raises(ValueError):
        IrrepLabel.vr(3, 3)  # that slot is Vhalf, not Vr
    assert len(all_labels(2)) == 9
    assert len(all_labels(5)) == 12


def test_mu_tables_odd_k():
    k = 3
    assert mu_k(k, IrrepLabel("T0+")) == 1   # value i
    assert mu_k(k, IrrepLabel("T0-")) == 1
    assert mu_k(k, IrrepLabel("T1+")) == 3   # value -i
    assert mu_k(k, IrrepLabel("Vhalf+")) == 2
    assert mu_k(k, IrrepLabel("Vhalf-")) == 2
    assert mu_k(k, IrrepLabel("V+")) == 0
    assert mu_k(k, IrrepLabel.vr(k, 1)) == 2  # odd numerator
    assert mu_k(k, IrrepLabel.vr(k, 2)) == 0  # even numerator


def test_mu_tables_even_k():
    k = 2
    assert mu_k(k, IrrepLabel("Vhalf+")) == 0
    assert mu_k(k, IrrepLabel("V-")) == 0
    assert mu_k(k, IrrepLabel.vr(k, 1)) == 0
    for t in ("T0+", "T0-", "T1+", "T1-"):
        assert mu_k(k, IrrepLabel(t)) == 2


def test_mu_image_order():
    assert mu_image_order(3) == 4
    assert mu_image_order(5) == 4
    assert mu_image_order(2) == 2
    assert mu_image_order(4) == 2


def test_mu_constant_on_slots():
    # the eigenvalue depends only on the coordinate slot, never on +-
    for k in (2, 3, 4, 5):
        assert mu_k(k, IrrepLabel("V+")) == mu_k(k, IrrepLabel("V-"))
        assert mu_k(k, IrrepLabel("Vhalf+")) == mu_k(k, IrrepLabel("Vhalf-"))
        assert mu_k(k, IrrepLabel("T0+")) == mu_k(k, IrrepLabel("T0-"))
        for v in range(2 * k):
            slot = slot_of_value(k, v)
            e = sigma_exponent_untwisted(k, v)
            if slot == "V":
                assert e == mu_k(k, IrrepLabel("V+"))
            elif slot == "Vhalf":
                assert e == mu_k(k, IrrepLabel("Vhalf+"))
            else:
                assert e == mu_k(k, IrrepLabel.vr(k, slot))
        for bit in (0, 1):
            assert sigma_exponent_twisted(k, bit) == mu_k(
                k, IrrepLabel(f"T{bit}+"))


# -- factor characters -----------------------------------------------------------

def test_char_eigenspace_sums():
    for k in (2, 3):
        plus = char_of_label(k, IrrepLabel("V+"), 8)
        minus = char_of_label(k, IrrepLabel("V-"), 8)
        assert (plus + minus).agree_through(theta_a(k, 0, 8), 7)
        assert (plus - minus).agree_through(series_b(8), 7)
        hp = char_of_label(k, IrrepLabel("Vhalf+"), 8)
        hm = char_of_label(k, IrrepLabel("Vhalf-"), 8)
        assert (hp - hm).is_zero()
        assert (hp + hm).agree_through(theta_a(k, k, 8), 7)
    F, G = twisted_pair(8)
    tp = char_of_label(2, IrrepLabel("T0+"), 8)
    tm = char_of_label(2, IrrepLabel("T0-"), 8)
    assert (tp - tm).agree_through(G, 7)
    assert (tp + tm).agree_through(F, 7)


# -- k=2 pipeline -----------------------------------------------------------------

def test_decompose_rejects_non_extremal():
    code = ZkCode([[1, 1, 1, 1], [0, 2, 0, 2], [0, 0, 2, 2]], 4)
    with pytest.raises(ValueError):
        decompose(code)


def test_table_bookkeeping_k2(table_k2):
    t = table_k2
    assert t.m >= 12
    assert t.untwisted_line_count == (1 << t.m) + (4 ** 12 - (1 << t.m)) // 2
    assert t.twisted_line_count == 1 << (24 - t.m)
    assert t.twisted.multiplicity == 1 << (t.m - 12)
    assert t.twisted_line_count * t.twisted.multiplicity == 1 << 12
    # pair character lowest exponents: Ewt/(4k) >= 2 by extremality
    for g in t.pair_groups:
        exp, _ = g.character.leading()
        assert exp >= 2
        ewt = sum(c * c * n for c, n in enumerate(g.composition))
        assert exp == Fraction(ewt, 8)


def test_assembled_character_matches_j(table_k2):
    asm = assemble_character(table_k2)
    assert asm.total.coeff(0) == 1
    assert asm.total.coeff(1) == 0
    assert asm.total.coeff(2) == 196884
    assert asm.total.coeff(3) == 21493760
    assert asm.total.coeff(Fraction(3, 2)) == 0
    assert verify_against_j(asm, 8) is None


def test_untwisted_part_closed_form(table_k2):
    from moonframe.qseries import QSeries
    asm = assemble_character(table_k2)
    values = [theta_a(2, c, table_k2.order) for c in range(3)]
    swe_eval = table_k2.swe.histogram.evaluate(values)
    b24 = series_b(table_k2.order) ** 24
    assert asm.untwisted.agree_through((swe_eval + b24) / 2, 8)


def test_even_k_trace_identity(table_k2):
    asm = assemble_character(table_k2)
    for i in (0, 5, 23):
        tr = trace_sigma(table_k2, i)
        assert tr.untwisted.agree_through(asm.untwisted, 8)
        assert tr.twisted.agree_through(-1 * asm.twisted, 8)
        assert tr.total.agree_through(asm.untwisted - asm.twisted, 8)


def test_mckay_thompson_requires_odd_k(table_k2):
    with pytest.raises(ValueError):
        mckay_thompson_4A(table_k2, 0)


def test_table_exports(table_k2):
    doc = table_to_json(table_k2)
    assert doc["counts"]["twisted_total_multiplicity"] == str(1 << 12)
    assert doc["k"] == 2 and doc["m"] == table_k2.m
    json.dumps(doc)
    text = table_to_text(table_k2)
    assert "untwisted-pair" in text and "twisted" in text


# -- trace internals exercised on a tiny odd-k surrogate ---------------------------

def test_trace_sigma_balance_check(table_k2):
    # C2-dual of the k=2 table balances on every coordinate
    for i in range(24):
        tr = trace_sigma(table_k2, i)
        zeros, ones = tr.twisted_balance
        assert zeros == ones
