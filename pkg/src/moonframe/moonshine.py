"""Summand tables, character assembly, diagonal traces, and the 4A series.

The decomposition of the full graded character with respect to a verified
extremal Type II code over Z_2k is organized as line groups: one line per
codeword of the binary subcode C2, one per +-pair of the remaining
codewords (grouped by residue composition, with characters computed once
per composition class), and 2^(24-m) twisted lines of multiplicity
2^(m-12).  Per-line diagonal eigenvalues are exact fourth roots of unity
represented by their exponent e (the value is i^e).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import qseries
from .errors import ConsistencyError
from .qseries import (
    QSeries,
    eisenstein_e4,
    delta,
    eta_quotient,
    j_minus_744,
    phi,
    series_b,
    theta_a,
    twisted_pair,
)
from .zkcode import c2_analysis, enumerate_swe, verify_type_ii

UNIT4 = ("1", "i", "-1", "-i")


@dataclass(frozen=True)
class IrrepLabel:
    """An irreducible-module label for one tensor factor."""

    kind: str  # "V+", "V-", "Vhalf+", "Vhalf-", "T0+", "T0-", "T1+", "T1-", "Vr"
    r: int = 0

    @classmethod
    def vr(cls, k, r):
        r %= 2 * k
        if r > k:
            r = 2 * k - r
        if not 1 <= r <= k - 1:
            raise ValueError(f"Vr index {r} outside 1..{k - 1}")
        return cls("Vr", r)

    def __str__(self):
        return f"V{self.r}" if self.kind == "Vr" else self.kind


ALL_KINDS = ("V+", "V-", "Vhalf+", "Vhalf-", "T0+", "T0-", "T1+", "T1-")


def all_labels(k):
    out = [IrrepLabel(kind) for kind in ALL_KINDS]
    out += [IrrepLabel.vr(k, r) for r in range(1, k)]
    return out


def mu_k(k, label):
    """Exponent e with mu_k(label) = i^e, from the two fusion tables.

    Odd k: +1 on V+- and even-index Vr, -1 on Vhalf+- and odd-index Vr,
    i on T0+-, -i on T1+-.  Even k: +1 on every untwisted label and -1 on
    every twisted one.
    """
    kind = label.kind
    if k % 2 == 0:
        return 2 if kind.startswith("T") else 0
    if kind in ("V+", "V-"):
        return 0
    if kind in ("Vhalf+", "Vhalf-"):
        return 2
    if kind == "Vr":
        return 0 if label.r % 2 == 0 else 2
    if kind in ("T0+", "T0-"):
        return 1
    if kind in ("T1+", "T1-"):
        return 3
    raise ValueError(f"unknown label {label}")


def mu_image_order(k):
    """Multiplicative order of the eigenvalue group: 4 odd, 2 even."""
    exps = {mu_k(k, lab) for lab in all_labels(k)}
    order = 1
    for e in exps:
        o = {0: 1, 1: 4, 2: 2, 3: 4}[e]
        order = order * o // math.gcd(order, o)
    return order


def slot_of_value(k, v):
    """The factor-label slot of a coordinate value: 'V', 'Vhalf', or r."""
    v %= 2 * k
    c = min(v, 2 * k - v)
    if c == 0:
        return "V"
    if c == k:
        return "Vhalf"
    return c


def sigma_exponent_untwisted(k, v):
    """Eigenvalue exponent of the diagonal automorphism on an untwisted slot."""
    if k % 2 == 0:
        return 0
    return 2 if v % 2 else 0


def sigma_exponent_twisted(k, bit):
    """Eigenvalue exponent on a twisted slot T_bit."""
    if k % 2 == 0:
        return 2
    return 1 if bit == 0 else 3


def char_of_label(k, label, order):
    """Exact graded character of one irreducible factor."""
    kind = label.kind
    if kind == "Vr":
        return theta_a(k, label.r, order)
    if kind in ("V+", "V-"):
        sign = 1 if kind == "V+" else -1
        return (theta_a(k, 0, order) + sign * series_b(order)) / 2
    if kind in ("Vhalf+", "Vhalf-"):
        return theta_a(k, k, order) / 2
    if kind in ("T0+", "T0-", "T1+", "T1-"):
        F, G = twisted_pair(order)
        sign = 1 if kind.endswith("+") else -1
        return (F + sign * G) / 2
    raise ValueError(f"unknown label {label}")


# -- summand table ---------------------------------------------------------------


@dataclass(frozen=True)
class LineGroup:
    """All summand lines sharing one residue composition.

    kind 'untwisted-c2' groups lines M(c)^+ for c in C2 (count of them),
    'untwisted-pair' groups lines M(c) for +-pairs in C minus C2 (count =
    number of pairs), 'twisted' groups the 2^(24-m) twisted lines.
    character is the exact per-line character; multiplicity the per-line
    multiplicity.
    """

    kind: str
    composition: tuple
    count: int
    multiplicity: int
    character: QSeries


@dataclass(frozen=True)
class SummandTable:
    k: int
    m: int
    order: int
    code: object
    zero_line: LineGroup
    c2_groups: tuple
    pair_groups: tuple
    twisted: LineGroup
    swe: object  # SweData, kept for the trace formulas
    c2_words: tuple  # bitmasks of C2 as binary words
    c2_dual_words: tuple

    @property
    def untwisted_line_count(self):
        return (self.zero_line.count + sum(g.count for g in self.c2_groups)
                + sum(g.count for g in self.pair_groups))

    @property
    def twisted_line_count(self):
        return self.twisted.count

    def untwisted_character(self):
        total = self.zero_line.character * self.zero_line.count
        for g in self.c2_groups:
            total = total + g.character * g.count
        for g in self.pair_groups:
            total = total + g.character * g.count
        return total

    def twisted_character(self):
        return self.twisted.character * (self.twisted.count
                                         * self.twisted.multiplicity)

    def line_groups(self):
        return (self.zero_line,) + self.c2_groups + self.pair_groups \
            + (self.twisted,)


def decompose(code, order=10, swe_data=None, workers=1, budget_seconds=None,
              backend=None):
    """Build the summand table of a verified extremal Type II code.

    Characters are computed once per residue composition from the swe
    histogram, never per codeword.  swe_data may be passed in when the
    enumeration (the expensive step for large k) already ran.
    """
    rep = verify_type_ii(code)
    if not rep.type_ii:
        raise ValueError(f"input code is not Type II: {rep}")
    k = code.modulus // 2
    n = code.length
    if swe_data is None:
        swe_data = enumerate_swe(code, signed=True, workers=workers,
                                 budget_seconds=budget_seconds,
                                 backend=backend)
    if swe_data.histogram.min_euclidean_weight() != 4 * code.modulus:
        raise ValueError(
            f"input code is not extremal: min Ewt "
            f"{swe_data.histogram.min_euclidean_weight()} != {4 * code.modulus}")

    c2 = c2_analysis(code)
    m = c2.m
    if len(c2.c2_words_mod2) != 1 << m:
        raise AssertionError("C2 word list disagrees with its dimension")

    values = [theta_a(k, c, order) for c in range(k + 1)]
    b24 = series_b(order) ** 24
    F, G = twisted_pair(order)
    twisted_line_char = (F ** 24 - G ** 24) / 2

    zero_comp = (n,) + (0,) * k
    zero_line = None
    c2_groups = []
    pair_groups = []
    hist = swe_data.histogram
    for comp, count, product in hist.compositions_and_products(values):
        in_c2 = all(comp[c] == 0 for c in range(1, k))
        if comp == zero_comp:
            zero_line = LineGroup("untwisted-c2", comp, 1, 1,
                                  (product + b24) / 2)
        elif in_c2:
            c2_groups.append(LineGroup("untwisted-c2", comp, count, 1,
                                       product / 2))
        else:
            if count % 2:
                raise AssertionError("odd pair-class count")
            pair_groups.append(LineGroup("untwisted-pair", comp, count // 2,
                                         1, product))
    if zero_line is None:
        raise AssertionError("zero codeword missing from the histogram")

    c2_count = 1 + sum(g.count for g in c2_groups)
    if c2_count != 1 << m:
        raise ConsistencyError(
            f"swe C2-type count {c2_count} != 2^m = {1 << m}")
    twisted = LineGroup("twisted", None, 1 << (n - m), 1 << (m - 12),
                        twisted_line_char)

    return SummandTable(
        k, m, order, code, zero_line, tuple(c2_groups), tuple(pair_groups),
        twisted, swe_data, c2.c2_words_mod2, tuple(c2.c2_dual.words()))


# -- character assembly ------------------------------------------------------------


@dataclass(frozen=True)
class Assembly:
    total: QSeries
    untwisted: QSeries
    twisted: QSeries


def assemble_character(table):
    """The full graded character, cross-checked along three routes.

    Route 1 sums the table's line groups.  Route 2 evaluates the closed
    form: (swe evaluation at the theta cosets)/2 + b^24/2 + 2^11 (F^24 -
    G^24).  Route 3 re-derives the untwisted part through the theta
    series of the lattice, taken from the independent Eisenstein/Delta
    expansion, divided by phi^24.  Any disagreement raises.
    """
    order = table.order
    k = table.k
    untwisted = table.untwisted_character()
    twisted = table.twisted_character()
    route1 = untwisted + twisted

    values = [theta_a(k, c, order) for c in range(k + 1)]
    swe_eval = table.swe.histogram.evaluate(values)
    b24 = series_b(order) ** 24
    F, G = twisted_pair(order)
    twisted_closed = (F ** 24 - G ** 24) * 2 ** 11
    route2 = swe_eval / 2 + b24 / 2 + twisted_closed

    theta_lat = eisenstein_e4(order) ** 3 - 720 * delta(order)
    phi24 = phi(order) ** 24
    phi2_24 = phi(order, Fraction(2)) ** 24
    route3 = (theta_lat * phi24.invert() + phi24 * phi2_24.invert()) / 2 \
        + twisted_closed

    bound = order - 1
    if not route1.agree_through(route2, bound):
        e, a, b = route1.first_difference(route2, bound)
        raise ConsistencyError(
            f"line-sum and closed-form assemblies differ at q^{e}: {a} != {b}")
    if not route1.agree_through(route3, bound):
        e, a, b = route1.first_difference(route3, bound)
        raise ConsistencyError(
            f"line-sum and theta-route assemblies differ at q^{e}: {a} != {b}")

    for name, s in (("untwisted", untwisted), ("twisted", twisted)):
        if not s.has_integral_exponents():
            raise ConsistencyError(f"{name} character has fractional exponents")
    total = route1
    if not total.is_integral():
        raise ConsistencyError("total character has non-integer coefficients")
    if any(c < 0 for c in total.coeffs):
        raise ConsistencyError("total character has negative coefficients")
    return Assembly(total, untwisted, twisted)


def verify_against_j(assembly, through):
    """Exact comparison of the total character with q*(J - 744)."""
    target = j_minus_744(through + 2).shift(1)
    return assembly.total.first_difference(target, through)


# -- diagonal traces ----------------------------------------------------------------


@dataclass(frozen=True)
class SigmaTrace:
    coordinate: int
    untwisted: QSeries
    twisted: QSeries
    total: QSeries
    twisted_balance: tuple  # (#c2perp words with bit 0, with bit 1)


def trace_sigma(table, i):
    """Graded trace of the i-th diagonal automorphism, from the line sums.

    Untwisted lines carry eigenvalue (-1)^(c_i) for odd k and +1 for even
    k; twisted lines carry +-i (odd k, sign by the i-th bit of the dual
    word) or -1 (even k).  For odd k the imaginary twisted contributions
    must cancel exactly: the bit-i balance of C2-dual is checked
    combinatorially and the series is pinned to zero.
    """
    k = table.k
    order = table.order
    n0 = table.code.length
    zeros = sum(1 for w in table.c2_dual_words if not (w >> i) & 1)
    ones = len(table.c2_dual_words) - zeros

    if k % 2 == 0:
        untwisted = table.untwisted_character()
        twisted = -table.twisted_character()
        return SigmaTrace(i, untwisted, twisted, untwisted + twisted,
                          (zeros, ones))

    # odd k: signed sums over the line groups.  C2 lines are grouped by
    # weight (their composition class) with a bit-i parity split; C2
    # entries are 0 or k with k odd, so the eigenvalue is (-1)^bit.
    weight_split = {}
    for w in table.c2_words:
        wt = bin(w).count("1")
        e, o = weight_split.get(wt, (0, 0))
        if (w >> i) & 1:
            weight_split[wt] = (e, o + 1)
        else:
            weight_split[wt] = (e + 1, o)
    untwisted = table.zero_line.character  # zero word: eigenvalue +1
    for g in table.c2_groups:
        wt = g.composition[k]
        e, o = weight_split.get(wt, (0, 0))
        if e + o != g.count:
            raise ConsistencyError("C2 weight split disagrees with the table")
        untwisted = untwisted + g.character * (e - o)
    planes = table.swe.odd_counts
    for g in table.pair_groups:
        cnt = g.count * 2
        odd = planes[g.composition][i]
        if (cnt - 2 * odd) % 2:
            raise ConsistencyError("pair parity split is odd")
        untwisted = untwisted + g.character * ((cnt - 2 * odd) // 2)

    if zeros != ones:
        raise ConsistencyError(
            f"C2-dual does not balance on coordinate {i}: {zeros} vs {ones}")
    twisted = QSeries.zero(trunc=order)
    total = untwisted + twisted
    return SigmaTrace(i, untwisted, twisted, total, (zeros, ones))


# -- McKay-Thompson 4A ---------------------------------------------------------------


@dataclass(frozen=True)
class MT4AReport:
    coordinate: int
    series: QSeries          # q^-1 * trace, the line-sum ground truth
    eta_side: QSeries        # eta(q^2)^48/(eta(q)^24 eta(q^4)^24) - 24
    matched_variant: str     # "half" | "printed" | "none"
    first_mismatch: tuple    # of the ground truth vs eta side, or None


def mckay_thompson_4A(table, i):
    """The order-4 trace series against the eta-quotient modular form.

    The line-sum ground truth equals q^-1 (sum_c (-1)^(tau_i(c)) ch M(c)
    / 2 + b^24/2).  The comparison reports which b^24 coefficient (1/2
    from the line sum, or 1 as printed in the source formula) makes the
    eta-quotient identity hold; nothing is hardcoded.
    """
    if table.k % 2 == 0:
        raise ValueError("the order-4 trace needs odd k")
    order = table.order
    tr = trace_sigma(table, i)
    if not tr.twisted.is_zero():
        raise ConsistencyError("twisted trace did not vanish for odd k")
    ground = tr.total.shift(-1)

    eta_side = eta_quotient({2: 48, 1: -24, 4: -24}, order) - 24
    b24 = series_b(order) ** 24
    printed = ground + (b24 / 2).shift(-1)

    bound = order - 2
    if ground.agree_through(eta_side, bound):
        matched = "half"
        mismatch = None
    elif printed.agree_through(eta_side, bound):
        matched = "printed"
        mismatch = None
    else:
        matched = "none"
        mismatch = ground.first_difference(eta_side, bound)
    return MT4AReport(i, ground, eta_side, matched, mismatch)


# -- exports --------------------------------------------------------------------------


def table_to_json(table, order=None):
    """JSON-ready dict; multiplicities and coefficients as decimal strings."""
    order = table.order - 1 if order is None else order
    k = table.k

    def ser(series):
        return [{"num": e.numerator, "den": e.denominator, "coeff": str(c)}
                for e, c in series.coefficients_through(order)]

    def group(g):
        out = {
            "kind": g.kind,
            "lines": str(g.count),
            "multiplicity_each": str(g.multiplicity),
            "character": ser(g.character),
        }
        if g.composition is not None:
            out["composition"] = list(g.composition)
        return out

    return {
        "schema": 1,
        "k": k,
        "m": table.m,
        "counts": {
            "untwisted_c2_lines": str(1 << table.m),
            "untwisted_pair_lines": str(table.untwisted_line_count
                                        - (1 << table.m)),
            "untwisted_lines": str(table.untwisted_line_count),
            "twisted_lines": str(table.twisted_line_count),
            "twisted_multiplicity_each": str(table.twisted.multiplicity),
            "twisted_total_multiplicity": str(table.twisted.count
                                              * table.twisted.multiplicity),
        },
        "line_groups": [group(g) for g in table.line_groups()],
    }


def table_to_text(table):
    """Aligned human-readable group table."""
    rows = [("kind", "composition", "lines", "mult", "char head")]
    for g in table.line_groups():
        comp = "-" if g.composition is None else \
            "(" + ",".join(str(x) for x in g.composition) + ")"
        lead = g.character.leading()
        head = "0" if lead is None else f"{lead[1]} q^{lead[0]}"
        rows.append((g.kind, comp, str(g.count), str(g.multiplicity), head))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
             for r in rows]
    return "\n".join(lines) + "\n"
