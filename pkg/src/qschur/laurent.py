"""Exact arithmetic in Z[v, v^-1] / Q[v, v^-1], plus polynomials in v' with Laurent coefficients.

Coefficients are kept as python ints where possible and fall back to
fractions.Fraction; equality is structural on the canonical (zero-free) form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NoFit, NotDivisible, OddExponent

Coeff = int | Fraction


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class LaurentPoly:
    """Sparse Laurent polynomial in v: map exponent -> nonzero rational coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Coeff] | None = None):
        clean: dict[int, Coeff] = {}
        if terms:
            for e, c in terms.items():
                c = _norm_coeff(c)
                if c:
                    clean[int(e)] = c
        self._terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def const(cls, c: Coeff) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def v_power(cls, e: int, coeff: Coeff = 1) -> "LaurentPoly":
        return cls({e: coeff})

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> dict[int, Coeff]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self._terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm_coeff(s)
            else:
                out.pop(e, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res._terms = out
        return res

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) - c
            if s:
                out[e] = _norm_coeff(s)
            else:
                out.pop(e, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res._terms = out
        return res

    def __neg__(self) -> "LaurentPoly":
        res = LaurentPoly.__new__(LaurentPoly)
        res._terms = {e: -c for e, c in self._terms.items()}
        return res

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self._terms or not other._terms:
            return LaurentPoly()
        out: dict[int, Coeff] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res._terms = {e: _norm_coeff(c) for e, c in out.items() if c}
        return res

    def scale(self, c: Coeff) -> "LaurentPoly":
        c = _norm_coeff(c)
        if not c:
            return LaurentPoly()
        res = LaurentPoly.__new__(LaurentPoly)
        res._terms = {e: _norm_coeff(k * c) for e, k in self._terms.items()}
        return res

    def shift(self, e0: int) -> "LaurentPoly":
        """Multiply by the monomial v^e0."""
        res = LaurentPoly.__new__(LaurentPoly)
        res._terms = {e + e0: c for e, c in self._terms.items()}
        return res

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- equality -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            if e == 0:
                bits.append(f"{c}")
            elif e == 1:
                bits.append(f"{c}*v" if c != 1 else "v")
            else:
                bits.append(f"{c}*v^{e}" if c != 1 else f"v^{e}")
        return " + ".join(bits)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict[str, str]:
        return {str(e): str(self._terms[e]) for e in sorted(self._terms)}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): Fraction(str(c)) for e, c in obj.items()})


def quantum_bracket(m: int) -> LaurentPoly:
    """The quantum integer 1 + v^2 + ... + v^(2(m-1)) = (v^(2m) - 1)/(v^2 - 1)."""
    if m <= 0:
        raise ValueError(f"quantum_bracket requires m >= 1, got {m}")
    return LaurentPoly({2 * i: 1 for i in range(m)})


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient num / den; raises NotDivisible on a nonzero remainder."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return LaurentPoly()
    # Shift both to ordinary polynomials; divisibility is preserved because
    # lowest terms multiply without cancellation over a field.
    nval, dval = num.valuation(), den.valuation()
    r = {e - nval: c for e, c in num._terms.items()}
    d = {e - dval: c for e, c in den._terms.items()}
    ddeg = max(d)
    dlead = d[ddeg]
    q: dict[int, Coeff] = {}
    while r:
        rdeg = max(r)
        if rdeg < ddeg:
            raise NotDivisible(f"{num!r} is not divisible by {den!r}")
        lead = r[rdeg]
        if isinstance(lead, int) and isinstance(dlead, int) and lead % dlead == 0:
            c: Coeff = lead // dlead
        else:
            c = _norm_coeff(Fraction(lead) / Fraction(dlead))
        shift = rdeg - ddeg
        q[shift] = c
        for e, dc in d.items():
            ee = e + shift
            s = r.get(ee, 0) - c * dc
            if s:
                r[ee] = s
            else:
                r.pop(ee, None)
    return LaurentPoly({e + nval - dval: c for e, c in q.items()})


def eval_even(p: LaurentPoly, q: int) -> Fraction:
    """Substitute v^2 := q; every exponent of p must be even."""
    total = Fraction(0)
    for e, c in p._terms.items():
        if e % 2:
            raise OddExponent(f"exponent {e} is odd; cannot substitute v^2 = {q}")
        total += Fraction(c) * Fraction(q) ** (e // 2)
    return total


class BiPoly:
    """Polynomial in v' with LaurentPoly coefficients, dense by v'-degree."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[LaurentPoly] = ()):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self._coeffs = tuple(cs)

    @property
    def coeffs(self) -> tuple[LaurentPoly, ...]:
        return self._coeffs

    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def eval_shift(self, p: int) -> LaurentPoly:
        """Evaluate at v' = v^(-p)."""
        out = LaurentPoly()
        for k, c in enumerate(self._coeffs):
            out = out + c.shift(-p * k)
        return out

    def eval_one(self) -> LaurentPoly:
        """Evaluate at v' = 1."""
        out = LaurentPoly()
        for c in self._coeffs:
            out = out + c
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        return " + ".join(f"({c!r})*v'^{k}" if k else f"({c!r})" for k, c in enumerate(self._coeffs))

    def to_json(self) -> list[dict[str, str]]:
        return [c.to_json() for c in self._coeffs]

    @classmethod
    def from_json(cls, obj: list) -> "BiPoly":
        return cls(LaurentPoly.from_json(c) for c in obj)


# Rational functions in v represented as unreduced (num, den) pairs; only used
# internally by the fitting solver, where system sizes stay tiny.
_Frac = tuple[LaurentPoly, LaurentPoly]


def _f_mul(a: _Frac, b: _Frac) -> _Frac:
    return (a[0] * b[0], a[1] * b[1])


def _f_sub(a: _Frac, b: _Frac) -> _Frac:
    return (a[0] * b[1] - b[0] * a[1], a[1] * b[1])


def _f_div(a: _Frac, b: _Frac) -> _Frac:
    return (a[0] * b[1], a[1] * b[0])


def fit_bipoly(samples: list[tuple[int, LaurentPoly]], degree: int) -> BiPoly:
    """Fit G(v, v') of the given v'-degree with G(v, v^(-p)) = value on every sample.

    The first degree+1 samples pin the coefficients (the underlying system is a
    Vandermonde system in v' = v^(-p), solved exactly); any further samples are
    consistency checks.  Raises NoFit when the data does not match, ValueError
    when underdetermined or sample p values repeat.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    ps = [p for p, _ in samples]
    if len(set(ps)) != len(ps):
        raise ValueError("sample p values must be distinct")
    if len(samples) < degree + 1:
        raise ValueError(f"need at least {degree + 1} samples for degree {degree}")

    m = degree + 1
    one = LaurentPoly.one()
    rows: list[list[_Frac]] = []
    for p, value in samples[:m]:
        row = [(LaurentPoly.v_power(-p * k), one) for k in range(m)]
        row.append((value, one))
        rows.append(row)

    # Gaussian elimination over Q(v); the Vandermonde matrix is invertible
    # because the v^(-p) are distinct monomials.
    for col in range(m):
        piv = next(r for r in range(col, m) if not rows[r][col][0].is_zero())
        rows[col], rows[piv] = rows[piv], rows[col]
        pivot = rows[col][col]
        for r in range(m):
            if r == col:
                continue
            factor = _f_div(rows[r][col], pivot)
            if factor[0].is_zero():
                continue
            for c in range(col, m + 1):
                rows[r][c] = _f_sub(rows[r][c], _f_mul(factor, rows[col][c]))

    coeffs = []
    for k in range(m):
        num, den = _f_div(rows[k][m], rows[k][k])
        try:
            coeffs.append(exact_div(num, den))
        except NotDivisible as exc:
            raise NoFit(f"coefficient of v'^{k} is not a Laurent polynomial") from exc

    fit = BiPoly(coeffs)
    for p, value in samples:
        if fit.eval_shift(p) != value:
            raise NoFit(f"fitted polynomial of degree {degree} misses sample at p={p}")
    return fit
