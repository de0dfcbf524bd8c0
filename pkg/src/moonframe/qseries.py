"""Exact truncated Laurent series in q with fractional exponents.

A series holds exact rational coefficients on the exponent grid (1/D)*Z
together with a truncation bound: coefficients at exponents >= trunc/D are
unknown and asking for them is an error, never a silent zero.  Binary
operations rescale both operands to the lcm of their exponent denominators
and propagate the tightest truncation bound derivable from the operands.

The module also provides the special series used by the character pipeline:
the Euler product phi(q^s), the eta function, theta-coset characters a_i,
the difference character b, the twisted-sector pair (F, G), and the
normalized j-function as an independent oracle.  All public builders return
series whose coefficients are known strictly below q^order.
"""

import math
from fractions import Fraction
from functools import lru_cache

from .errors import ConsistencyError, TruncationError

_INF = math.inf


def _as_frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class QSeries:
    """Immutable truncated Laurent series with exponents in (1/denom)*Z."""

    __slots__ = ("denom", "min_exp", "coeffs", "trunc")

    def __init__(self, denom, min_exp, coeffs, trunc):
        if denom < 1:
            raise ValueError("denom must be a positive integer")
        if trunc is not None:
            coeffs = [c for i, c in enumerate(coeffs) if min_exp + i < trunc]
        coeffs = [_norm_coeff(c) for c in coeffs]
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        tail = len(coeffs)
        while tail > lead and coeffs[tail - 1] == 0:
            tail -= 1
        min_exp += lead
        coeffs = coeffs[lead:tail]
        if not coeffs:
            min_exp = 0
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "min_exp", min_exp)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *_):
        raise AttributeError("QSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, denom=1, trunc=None):
        return cls(denom, 0, [], trunc)

    @classmethod
    def one(cls, denom=1, trunc=None):
        return cls(denom, 0, [1], trunc)

    @classmethod
    def q_power(cls, exp, coeff=1, trunc=None):
        e = _as_frac(exp)
        d = e.denominator
        return cls(d, int(e * d), [coeff], trunc)

    @classmethod
    def from_terms(cls, terms, denom=1, trunc=None):
        """terms: iterable of (exponent, coeff) with exponents on the grid."""
        entries = []
        for exp, c in terms:
            e = _as_frac(exp) * denom
            if e.denominator != 1:
                raise ValueError(f"exponent {exp} not on grid 1/{denom}")
            entries.append((int(e), c))
        if not entries:
            return cls.zero(denom, trunc)
        lo = min(i for i, _ in entries)
        hi = max(i for i, _ in entries)
        coeffs = [0] * (hi - lo + 1)
        for i, c in entries:
            coeffs[i - lo] += c
        return cls(denom, lo, coeffs, trunc)

    # -- bookkeeping -------------------------------------------------------

    @property
    def _t(self):
        return _INF if self.trunc is None else self.trunc

    @property
    def _min_eff(self):
        """Lowest exponent index at which this series can be nonzero."""
        if self.coeffs:
            return self.min_exp
        return self._t

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        """(exponent, coefficient) of the lowest known nonzero term, or None."""
        if not self.coeffs:
            return None
        return Fraction(self.min_exp, self.denom), self.coeffs[0]

    def rescale(self, new_denom):
        """Exponent-exact move to a finer grid; new_denom must be a multiple."""
        f, r = divmod(new_denom, self.denom)
        if r or f < 1:
            raise ValueError("new denom must be a positive multiple")
        if f == 1:
            return self
        coeffs = [0] * (len(self.coeffs) * f - (f - 1) if self.coeffs else 0)
        for i, c in enumerate(self.coeffs):
            coeffs[i * f] = c
        t = None if self.trunc is None else self.trunc * f
        return QSeries(new_denom, self.min_exp * f, coeffs, t)

    def reduced(self):
        """Smallest exponent denominator representing the same series."""
        if self.denom == 1:
            return self
        g = 0
        for i, c in enumerate(self.coeffs):
            if c:
                g = math.gcd(g, self.min_exp + i)
                if g == 1:
                    return self
        g = math.gcd(g, self.denom)
        if g == 1:
            return self
        coeffs = [self.coeffs[i] for i in range(0, len(self.coeffs), g)]
        t = None if self.trunc is None else -((-self.trunc) // g)
        return QSeries(self.denom // g, self.min_exp // g, coeffs, t)

    def truncate(self, order):
        """Forget coefficients at exponents >= order (a Fraction or int)."""
        t = _as_frac(order) * self.denom
        if t.denominator != 1:
            raise ValueError("truncation bound not on the exponent grid")
        t = int(t)
        if self.trunc is not None and t > self.trunc:
            raise TruncationError("cannot extend a truncation bound")
        return QSeries(self.denom, self.min_exp, list(self.coeffs), t)

    def coeff(self, exp):
        """Exact coefficient at exponent exp; TruncationError beyond trunc."""
        e = _as_frac(exp)
        if e * self.denom >= self._t:
            raise TruncationError(f"coefficient at q^{e} is beyond the bound")
        u = e * self.denom
        if u.denominator != 1:
            return 0
        i = int(u) - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def coefficients_through(self, order):
        """[(exponent, coeff)] for all nonzero terms with exponent <= order."""
        bound = _as_frac(order)
        if bound * self.denom >= self._t:
            raise TruncationError("order beyond the truncation bound")
        out = []
        for i, c in enumerate(self.coeffs):
            e = Fraction(self.min_exp + i, self.denom)
            if e > bound:
                break
            if c:
                out.append((e, c))
        return out

    # -- ring operations ---------------------------------------------------

    def _common(self, other):
        d = math.lcm(self.denom, other.denom)
        return self.rescale(d), other.rescale(d)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries(self.denom, 0, [other], None)
        a, b = self._common(other)
        t = min(a._t, b._t)
        if not a.coeffs and not b.coeffs:
            return QSeries(a.denom, 0, [], None if t == _INF else int(t))
        los = [s.min_exp for s in (a, b) if s.coeffs]
        his = [s.min_exp + len(s.coeffs) for s in (a, b) if s.coeffs]
        lo, hi = min(los), max(his)
        if t != _INF:
            hi = min(hi, int(t))
        coeffs = [0] * max(hi - lo, 0)
        for s in (a, b):
            for i, c in enumerate(s.coeffs):
                j = s.min_exp + i - lo
                if 0 <= j < len(coeffs):
                    coeffs[j] += c
        return QSeries(a.denom, lo, coeffs, None if t == _INF else int(t))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.denom, self.min_exp, [-c for c in self.coeffs],
                       self.trunc)

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries(self.denom, 0, [other], None)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            if other == 0:
                return QSeries.zero(self.denom)
            return QSeries(self.denom, self.min_exp,
                           [c * other for c in self.coeffs], self.trunc)
        a, b = self._common(other)
        t = min(a._t + b._min_eff, b._t + a._min_eff)
        if not a.coeffs or not b.coeffs:
            return QSeries(a.denom, 0, [], None if t == _INF else int(t))
        lo = a.min_exp + b.min_exp
        full = len(a.coeffs) + len(b.coeffs) - 1
        n = full if t == _INF else min(full, int(t) - lo)
        if n <= 0:
            return QSeries(a.denom, 0, [], None if t == _INF else int(t))
        coeffs = [0] * n
        for i, ca in enumerate(a.coeffs):
            if ca == 0 or i >= n:
                continue
            top = min(len(b.coeffs), n - i)
            for j in range(top):
                cb = b.coeffs[j]
                if cb:
                    coeffs[i + j] += ca * cb
        return QSeries(a.denom, lo, coeffs, None if t == _INF else int(t))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        return self * (Fraction(1) / _as_frac(other))

    def invert(self, trunc=None):
        """Multiplicative inverse; the leading coefficient must be nonzero."""
        if not self.coeffs:
            raise ValueError("cannot invert: zero leading coefficient")
        m = self.min_exp
        if trunc is None:
            if self.trunc is None:
                raise ValueError("invert of an exact polynomial needs a bound")
            prec = self.trunc - m
        else:
            prec = int(trunc) + m
            if self.trunc is not None:
                prec = min(prec, self.trunc - m)
        if prec <= 0:
            raise ValueError("no known coefficients to invert")
        c0 = self.coeffs[0]
        inv0 = Fraction(1, 1) / c0
        out = [inv0] + [0] * (prec - 1)
        xs = self.coeffs
        for n in range(1, prec):
            s = 0
            top = min(n, len(xs) - 1)
            for j in range(1, top + 1):
                cj = xs[j]
                if cj:
                    s += cj * out[n - j]
            if s:
                out[n] = -inv0 * s
        return QSeries(self.denom, -m, out, prec - m)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("series powers must be integers")
        if n < 0:
            if not self.coeffs:
                raise ValueError("negative power of a non-unit")
            return self.invert() ** (-n)
        if n == 0:
            return QSeries.one(self.denom)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exp):
        """Multiply by q^exp."""
        e = _as_frac(exp)
        d = math.lcm(self.denom, e.denominator)
        s = self.rescale(d)
        u = int(e * d)
        t = None if s.trunc is None else s.trunc + u
        return QSeries(d, s.min_exp + u, list(s.coeffs), t)

    # -- comparison and rendering ------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._common(other)
        return (a.min_exp == b.min_exp and a.coeffs == b.coeffs
                and a.trunc == b.trunc)

    def agree_through(self, other, order):
        """Exact equality of all coefficients with exponent <= order."""
        a, b = self._common(other)
        bound = _as_frac(order) * a.denom
        if bound >= a._t or bound >= b._t:
            raise TruncationError("comparison order beyond a truncation bound")
        lo = min(a._min_eff, b._min_eff)
        if lo == _INF:
            return True
        i = int(lo)
        while i <= bound:
            ca = a.coeffs[i - a.min_exp] if 0 <= i - a.min_exp < len(a.coeffs) else 0
            cb = b.coeffs[i - b.min_exp] if 0 <= i - b.min_exp < len(b.coeffs) else 0
            if ca != cb:
                return False
            i += 1
        return True

    def first_difference(self, other, order):
        """First exponent <= order where the two series differ, or None."""
        a, b = self._common(other)
        bound = int(_as_frac(order) * a.denom)
        for i in range(min(a.min_exp, b.min_exp, 0), bound + 1):
            ca = a.coeffs[i - a.min_exp] if 0 <= i - a.min_exp < len(a.coeffs) else 0
            cb = b.coeffs[i - b.min_exp] if 0 <= i - b.min_exp < len(b.coeffs) else 0
            if ca != cb:
                return Fraction(i, a.denom), ca, cb
        return None

    def is_integral(self):
        """True when every known coefficient is an integer."""
        return all(not isinstance(c, Fraction) for c in self.coeffs)

    def has_integral_exponents(self):
        """True when every known nonzero term sits at an integer exponent."""
        return all((self.min_exp + i) % self.denom == 0
                   for i, c in enumerate(self.coeffs) if c)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = Fraction(self.min_exp + i, self.denom)
            parts.append(f"{c} q^({e.numerator}/{e.denominator})"
                         if e.denominator != 1 else f"{c} q^{e.numerator}")
        body = " + ".join(parts) if parts else "0"
        if self.trunc is not None:
            t = Fraction(self.trunc, self.denom)
            body += f" + O(q^({t.numerator}/{t.denominator}))" \
                if t.denominator != 1 else f" + O(q^{t.numerator})"
        return body

    def __repr__(self):
        return f"QSeries({self})"

    def to_json_terms(self):
        """JSON-ready list of {num, den, coeff} records, coeff as string."""
        out = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = Fraction(self.min_exp + i, self.denom)
            out.append({"num": e.numerator, "den": e.denominator,
                        "coeff": str(c)})
        return out


# -- special series ---------------------------------------------------------


@lru_cache(maxsize=None)
def phi(order, scale=Fraction(1)):
    """The Euler product phi(q^s) = prod_{n>=1} (1 - q^{s n}), below q^order.

    scale may be any positive rational; the pipeline uses 1/2, 1, 2, 4.
    """
    s = _as_frac(scale)
    if s <= 0:
        raise ValueError("scale must be positive")
    d = s.denominator
    T = order * d
    step0 = int(s * d)
    coeffs = [0] * T
    if T:
        coeffs[0] = 1
    m = step0
    n = 1
    while m < T:
        for i in range(T - 1, m - 1, -1):
            if coeffs[i - m]:
                coeffs[i] -= coeffs[i - m]
        n += 1
        m = n * step0
    return QSeries(d, 0, coeffs, T)


@lru_cache(maxsize=None)
def eta(order, scale=Fraction(1)):
    """Dedekind eta: eta(q^s) = q^{s/24} * phi(q^s)."""
    s = _as_frac(scale)
    return phi(order, s).shift(s / 24).truncate(order)


def eta_quotient(powers, order):
    """prod_s eta(q^s)^{e_s} for powers = {scale: exponent}.

    The result is a Laurent series when the leading eta exponents sum to a
    negative value; coefficients are known strictly below q^order.
    """
    offset = sum(_as_frac(s) * e for s, e in powers.items()) / 24
    margin = max(0, math.ceil(-offset)) + 1
    inner = order + margin
    num = QSeries.one()
    den = QSeries.one()
    for s, e in sorted(powers.items(), key=lambda kv: _as_frac(kv[0])):
        p = phi(inner, _as_frac(s))
        if e >= 0:
            num = num * p ** e
        else:
            den = den * p ** (-e)
    out = num * den.invert()
    return out.shift(offset).truncate(order)


@lru_cache(maxsize=None)
def theta_a(k, i, order):
    """Theta-coset character a_i = (1/phi(q)) * sum_j q^{(2kj+i)^2/(4k)}.

    i is reduced into [0, k] via the j -> -j-1 symmetry; the lowest exponent
    is i^2/(4k) and the exponent grid is (1/(4k))*Z.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    i %= 2 * k
    if i > k:
        i = 2 * k - i
    d = 4 * k
    T = order * d
    terms = {}
    j = 0
    while True:
        hit = False
        for v in ((2 * k * j + i), (-2 * k * j + i)) if j else ((i,)):
            e = v * v
            if e < T:
                terms[e] = terms.get(e, 0) + 1
                hit = True
        if not hit and j > 0:
            break
        j += 1
    lo = min(terms)
    coeffs = [0] * (max(terms) - lo + 1)
    for e, c in terms.items():
        coeffs[e - lo] = c
    theta = QSeries(d, lo, coeffs, T)
    return (theta * phi(order).invert()).truncate(order)


@lru_cache(maxsize=None)
def series_b(order):
    """b = (1/phi(q)) * sum_j (-1)^j q^{j^2}, cross-checked as phi(q)/phi(q^2).

    The two expansions are computed independently and must agree exactly;
    a mismatch means a series bug and raises ConsistencyError.
    """
    T = order
    terms = {0: 1}
    j = 1
    while j * j < T:
        terms[j * j] = 2 * (-1) ** j
        j += 1
    theta = QSeries.from_terms(list(terms.items()), denom=1, trunc=T)
    from_theta = (theta * phi(order).invert()).truncate(order)
    from_quotient = (phi(order) * phi(order, Fraction(2)).invert()).truncate(order)
    if from_theta != from_quotient:
        raise ConsistencyError("the two expansions of b disagree")
    return from_theta


def alternating_half_theta(k, order):
    """sum_j (-1)^j q^{k(j+1/2)^2}; identically zero by the j <-> -j-1 pairing."""
    d = 4 * k
    T = order * d
    acc = {}
    j = 0
    while k * (2 * j + 1) ** 2 < T:
        e = k * (2 * j + 1) ** 2  # in units of 1/(4k)
        acc[e] = acc.get(e, 0) + (-1) ** j + (-1) ** (-j - 1)
        j += 1
    return QSeries.from_terms(
        [(Fraction(e, d), c) for e, c in acc.items()], denom=d, trunc=T)


@lru_cache(maxsize=None)
def twisted_pair(order):
    """The rank-one twisted-sector pair (F, G) on the grid (1/16)*Z.

    F = q^{1/16} phi(q)/phi(q^{1/2}) and G = q^{1/16} phi(q^{1/2}) phi(q^2)
    / phi(q)^2, so that (F +- G)/2 are the two twisted characters and
    2^{11}(F^24 - G^24) is the twisted part of the full character.  That
    24th-power aggregate is checked here against the same expression
    assembled directly from phi powers; disagreement raises.
    """
    half = Fraction(1, 2)
    inner = order + 2
    p1 = phi(inner)
    ph = phi(inner, half)
    p2 = phi(inner, Fraction(2))
    F = (p1 * ph.invert()).shift(Fraction(1, 16)).truncate(order)
    G = (ph * p2 * (p1 * p1).invert()).shift(Fraction(1, 16)).truncate(order)
    agg = (F ** 24 - G ** 24) * (2 ** 11)
    direct = ((p1 ** 24) * (ph ** 24).invert()
              - (p2 ** 24) * (ph ** 24) * (p1 ** 48).invert())
    direct = (direct * (2 ** 11)).shift(Fraction(3, 2))
    a, dct = agg._common(direct)
    bound = Fraction(min(a._t, dct._t) - 1, a.denom)
    if not agg.agree_through(direct, bound):
        raise ConsistencyError("twisted aggregate check failed")
    return F, G


@lru_cache(maxsize=None)
def eisenstein_e4(order):
    """E4 = 1 + 240 sum sigma_3(n) q^n."""
    coeffs = [0] * order
    if order:
        coeffs[0] = 1
    for d in range(1, order):
        c = 240 * d ** 3
        for n in range(d, order, d):
            coeffs[n] += c
    return QSeries(1, 0, coeffs, order)


@lru_cache(maxsize=None)
def delta(order):
    """The discriminant cusp form: Delta = q * phi(q)^24."""
    return (phi(order, Fraction(1)) ** 24).shift(1).truncate(order)


@lru_cache(maxsize=None)
def j_minus_744(order):
    """J(q) - 744 = E4^3/Delta - 744, a Laurent series from q^{-1}.

    Integer coefficients 1, 0, 196884, ... ; independent oracle for the
    assembled moonshine character.
    """
    inner = order + 2
    e4 = eisenstein_e4(inner)
    out = e4 ** 3 * delta(inner).invert() - 744
    return out.truncate(order)


@lru_cache(maxsize=None)
def leech_theta(order):
    """Theta series of the Leech lattice: E4^3 - 720 Delta."""
    return (eisenstein_e4(order) ** 3 - 720 * delta(order)).truncate(order)
