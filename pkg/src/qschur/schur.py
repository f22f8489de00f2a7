"""The convolution algebra on orbit symbols: sparse elements, the elementary and
chain multiplication formulas, basis normalization, RTT generators, relation
sweeps, and the triangular decomposition.

Matrix indices are 0-based internally; the generator and relation APIs take the
usual 1-based indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ChainInfeasible, Incompatible, UnsupportedShape
from .laurent import LaurentPoly, exact_div, quantum_bracket
from .matrices import (
    Mat,
    Vec,
    co,
    compositions,
    diag_mat,
    e_mat,
    is_theta,
    mat_add,
    norm_exponent,
    preceq,
    ro,
)

E_BASIS = "e"
BRACKET_BASIS = "bracket"

_ONE = LaurentPoly.one()


class SchurElement:
    """A finite Laurent combination of orbit symbols, in the e or bracket basis."""

    __slots__ = ("n", "d", "basis", "terms")

    def __init__(self, n: int, d: int, basis: str, terms: dict[Mat, LaurentPoly] | None = None):
        if basis not in (E_BASIS, BRACKET_BASIS):
            raise ValueError(f"unknown basis {basis!r}")
        self.n = n
        self.d = d
        self.basis = basis
        clean: dict[Mat, LaurentPoly] = {}
        for m, c in (terms or {}).items():
            if not c.is_zero():
                if not is_theta(m, d) or len(m) != n:
                    raise ValueError(f"support matrix {m} is not in the index set for n={n}, d={d}")
                clean[m] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int, d: int, basis: str = E_BASIS) -> "SchurElement":
        return cls(n, d, basis)

    @classmethod
    def single(cls, m: Mat, d: int, basis: str = E_BASIS, coeff: LaurentPoly = _ONE) -> "SchurElement":
        return cls(len(m), d, basis, {m: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Mat) -> LaurentPoly:
        return self.terms.get(m, LaurentPoly.zero())

    def support(self) -> list[Mat]:
        return sorted(self.terms)

    # -- linear structure ---------------------------------------------

    def _check(self, other: "SchurElement") -> None:
        if (self.n, self.d, self.basis) != (other.n, other.d, other.basis):
            raise Incompatible("elements disagree on n, d, or basis")

    def __add__(self, other: "SchurElement") -> "SchurElement":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, LaurentPoly.zero()) + c
        return SchurElement(self.n, self.d, self.basis, out)

    def __sub__(self, other: "SchurElement") -> "SchurElement":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, LaurentPoly.zero()) - c
        return SchurElement(self.n, self.d, self.basis, out)

    def __neg__(self) -> "SchurElement":
        return SchurElement(self.n, self.d, self.basis, {m: -c for m, c in self.terms.items()})

    def scale(self, c: LaurentPoly) -> "SchurElement":
        return SchurElement(self.n, self.d, self.basis, {m: k * c for m, k in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SchurElement):
            return NotImplemented
        return (self.n, self.d, self.basis) == (other.n, other.d, other.basis) and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return f"SchurElement(n={self.n}, d={self.d}, 0)"
        bits = [f"({c!r})*{self.basis}{m}" for m, c in sorted(self.terms.items())]
        return " + ".join(bits)

    # -- basis conversion ---------------------------------------------

    def to_bracket(self) -> "SchurElement":
        if self.basis == BRACKET_BASIS:
            return self
        terms = {m: c.shift(norm_exponent(m)) for m, c in self.terms.items()}
        return SchurElement(self.n, self.d, BRACKET_BASIS, terms)

    def to_e(self) -> "SchurElement":
        if self.basis == E_BASIS:
            return self
        terms = {m: c.shift(-norm_exponent(m)) for m, c in self.terms.items()}
        return SchurElement(self.n, self.d, E_BASIS, terms)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "basis": self.basis,
            "terms": [
                {"matrix": {"n": self.n, "rows": [list(r) for r in m]}, "coeff": c.to_json()}
                for m, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SchurElement":
        terms = {
            tuple(tuple(r) for r in t["matrix"]["rows"]): LaurentPoly.from_json(t["coeff"])
            for t in obj["terms"]
        }
        return cls(obj["n"], obj["d"], obj["basis"], terms)


def identity_element(n: int, d: int, basis: str = E_BASIS) -> SchurElement:
    """Sum of the diagonal orbit symbols; the unit of the algebra."""
    terms = {diag_mat(lam): _ONE for lam in compositions(d, n)}
    return SchurElement(n, d, basis, terms)


# -- left-factor shape analysis ---------------------------------------


def classify_left(b: Mat):
    """Shape of a left factor: diagonal, single off-diagonal entry, or an
    increasing chain of unit entries.  Returns None for unsupported shapes."""
    n = len(b)
    off = [(i, j, b[i][j]) for i in range(n) for j in range(n) if i != j and b[i][j]]
    if not off:
        return ("diag",)
    if len(off) == 1:
        i, j, c = off[0]
        return ("single", i, j, c)
    if all(c == 1 for _, _, c in off):
        pos = sorted((i, j) for i, j, _ in off)
        seq = [pos[0][0]]
        for i, j in pos:
            if i != seq[-1] or j <= i:
                return None
            seq.append(j)
        return ("chain", tuple(seq))
    return None


def _segment_chains(a: Mat, i0: int, i1: int, upper: bool):
    """All (js, ps) for one superdiagonal (or subdiagonal) segment of the sum.

    Upper: i0 = j_0 < j_1 < ... < j_m = i1 with strictly decreasing column
    picks p_1 > ... > p_m; lower is the mirrored condition.  Every picked cell
    a[j_k][p_k] must be positive.
    """
    n = len(a)
    interior = range(i0 + 1, i1) if upper else range(i1 + 1, i0)
    results = []
    for r in range(len(interior) + 1):
        for mids in itertools.combinations(interior, r):
            js = (i0, *mids, i1) if upper else (i0, *sorted(mids, reverse=True), i1)
            m = len(js) - 1

            def extend(k: int, ps: tuple[int, ...]):
                if k > m:
                    results.append((js, ps))
                    return
                for p in range(n):
                    if a[js[k]][p] < 1:
                        continue
                    if ps:
                        if upper and p >= ps[-1]:
                            continue
                        if not upper and p <= ps[-1]:
                            continue
                    extend(k + 1, ps + (p,))

            extend(1, ())
    return results


def _upper_factor(a: Mat, js, ps, l: int, branch: str) -> LaurentPoly:
    """Coefficient factor for step l (1-based) of an upper segment.

    branch applies to l == 1 only: "lt" is the generic leading count, "gt" and
    "eq" are the variants used when the previous segment ended at a larger or
    equal column pick.
    """
    n = len(a)
    row = js[l - 1]
    p = ps[l - 1]
    s_ge = sum(a[row][j] for j in range(p, n))
    s_gt = sum(a[row][j] for j in range(p + 1, n))
    entry = a[row][p]
    if l == 1:
        if branch == "lt":
            head = quantum_bracket(entry + 1).shift(2 * s_gt)
        elif branch == "gt":
            head = quantum_bracket(entry + 1).shift(2 * (s_gt - 1))
        else:  # equal column picks
            if entry == 0:
                return LaurentPoly.zero()
            head = quantum_bracket(entry).shift(2 * s_gt)
    else:
        head = LaurentPoly({2 * s_ge: 1, 2 * (s_gt - 1): -1})
    tail = sum(sum(a[k][j] for j in range(p, n)) for k in range(js[l - 1] + 1, js[l]))
    return head.shift(2 * tail)


def _lower_factor(a: Mat, js, ps, l: int) -> LaurentPoly:
    row = js[l - 1]
    p = ps[l - 1]
    s_le = sum(a[row][j] for j in range(p + 1))
    s_lt = sum(a[row][j] for j in range(p))
    entry = a[row][p]
    if l == 1:
        head = quantum_bracket(entry + 1).shift(2 * s_lt)
    else:
        head = LaurentPoly({2 * s_le: 1, 2 * (s_lt - 1): -1})
    tail = sum(sum(a[k][j] for j in range(p + 1)) for k in range(js[l] + 1, js[l - 1]))
    return head.shift(2 * tail)


def _apply_moves(a: Mat, js, ps) -> Mat:
    out = [list(r) for r in a]
    for l in range(1, len(js)):
        p = ps[l - 1]
        out[js[l - 1]][p] += 1
        out[js[l]][p] -= 1
    return tuple(tuple(r) for r in out)


def mult_elementary_upper(b: Mat, a: Mat) -> SchurElement:
    """Product e_b * e_a for b with a single unit entry above the diagonal."""
    return _mult_unit(b, a, upper=True)


def mult_elementary_lower(b: Mat, a: Mat) -> SchurElement:
    """Product e_b * e_a for b with a single unit entry below the diagonal."""
    return _mult_unit(b, a, upper=False)


def _mult_unit(b: Mat, a: Mat, upper: bool) -> SchurElement:
    shape = classify_left(b)
    if shape is None or shape[0] != "single" or shape[3] != 1:
        raise UnsupportedShape(f"left factor {b} is not an elementary unit matrix")
    _, i0, i1, _ = shape
    if upper and not i0 < i1:
        raise UnsupportedShape(f"entry of {b} is below the diagonal")
    if not upper and not i0 > i1:
        raise UnsupportedShape(f"entry of {b} is above the diagonal")
    if co(b) != ro(a):
        raise Incompatible(f"co(b)={co(b)} does not match ro(a)={ro(a)}")
    d = sum(sum(r) for r in a)
    out: dict[Mat, LaurentPoly] = {}
    for js, ps in _segment_chains(a, i0, i1, upper):
        coeff = _ONE
        for l in range(1, len(js)):
            f = _upper_factor(a, js, ps, l, "lt") if upper else _lower_factor(a, js, ps, l)
            coeff = coeff * f
        if coeff.is_zero():
            continue
        k = _apply_moves(a, js, ps)
        out[k] = out.get(k, LaurentPoly.zero()) + coeff
    return SchurElement(len(a), d, E_BASIS, out)


def mult_chain(b: Mat, a: Mat) -> SchurElement:
    """Product e_b * e_a for b whose off-diagonal is a chain of unit entries
    at positions (i_0,i_1), (i_1,i_2), ..., i_0 < i_1 < ... < i_m."""
    shape = classify_left(b)
    if shape is None or shape[0] not in ("chain", "single"):
        raise UnsupportedShape(f"left factor {b} is not chain-shaped")
    if shape[0] == "single":
        if shape[3] != 1 or shape[1] >= shape[2]:
            raise UnsupportedShape(f"left factor {b} is not chain-shaped")
        anchors = (shape[1], shape[2])
    else:
        anchors = shape[1]
    if co(b) != ro(a):
        raise Incompatible(f"co(b)={co(b)} does not match ro(a)={ro(a)}")
    d = sum(sum(r) for r in a)
    seg_options = [
        _segment_chains(a, anchors[k], anchors[k + 1], upper=True)
        for k in range(len(anchors) - 1)
    ]
    out: dict[Mat, LaurentPoly] = {}
    for combo in itertools.product(*seg_options):
        coeff = _ONE
        prev_last_p = None
        for js, ps in combo:
            for l in range(1, len(js)):
                if l == 1 and prev_last_p is not None:
                    if prev_last_p < ps[0]:
                        branch = "lt"
                    elif prev_last_p > ps[0]:
                        branch = "gt"
                    else:
                        branch = "eq"
                else:
                    branch = "lt"
                coeff = coeff * _upper_factor(a, js, ps, l, branch)
            prev_last_p = ps[-1]
        if coeff.is_zero():
            continue
        k = a
        for js, ps in combo:
            k = _apply_moves(k, js, ps)
        out[k] = out.get(k, LaurentPoly.zero()) + coeff
    return SchurElement(len(a), d, E_BASIS, out)


_MULT_CACHE: dict[tuple[Mat, Mat], dict[Mat, LaurentPoly]] = {}


def _mult_class(b: Mat, a: Mat) -> dict[Mat, LaurentPoly]:
    """Structure constants of e_b * e_a for a supported left factor b."""
    key = (b, a)
    cached = _MULT_CACHE.get(key)
    if cached is not None:
        return cached
    shape = classify_left(b)
    if shape is None:
        raise UnsupportedShape(f"left factor {b} matches no multiplication formula")
    if shape[0] == "diag":
        # co(b) == ro(a) forces b == diag(ro(a)); the product is a projection.
        result = {a: _ONE}
    elif shape[0] == "chain":
        result = mult_chain(b, a).terms
    else:
        _, i0, i1, c = shape
        if c == 1:
            elem = mult_elementary_upper(b, a) if i0 < i1 else mult_elementary_lower(b, a)
            result = elem.terms
        else:
            # Split off one unit: e_b' * e_b'' = [c] e_b with b'' carrying c-1,
            # then divide the associative product by the quantum integer [c].
            b2 = [list(r) for r in b]
            b2[i0][i1] -= 1
            b2[i1][i1] += 1
            b2 = tuple(tuple(r) for r in b2)
            ro2 = ro(b2)
            bp = [
                [(ro2[k] - (1 if k == i1 else 0)) if k == s else 0 for s in range(len(b))]
                for k in range(len(b))
            ]
            bp[i0][i1] += 1
            bp = tuple(tuple(r) for r in bp)
            inner = _mult_class(b2, a)
            acc: dict[Mat, LaurentPoly] = {}
            for m, cf in inner.items():
                for m2, cf2 in _mult_class(bp, m).items():
                    acc[m2] = acc.get(m2, LaurentPoly.zero()) + cf * cf2
            bracket = quantum_bracket(c)
            result = {m: exact_div(cf, bracket) for m, cf in acc.items() if not cf.is_zero()}
    result = {m: cf for m, cf in result.items() if not cf.is_zero()}
    _MULT_CACHE[key] = result
    return result


def product(x: SchurElement, y: SchurElement) -> SchurElement:
    """Bilinear extension of the orbit-symbol product.

    Every support matrix of x must be diagonal, a single off-diagonal entry, or
    chain-shaped; pairs with mismatched column/row sums contribute zero.  The
    result is returned in the basis of x (bracket inputs are converted to the
    e-basis, multiplied, and converted back).
    """
    if (x.n, x.d) != (y.n, y.d):
        raise Incompatible("operands disagree on n or d")
    out_basis = x.basis
    xe, ye = x.to_e(), y.to_e()
    out: dict[Mat, LaurentPoly] = {}
    for b, cb in xe.terms.items():
        if classify_left(b) is None:
            raise UnsupportedShape(f"left support matrix {b} matches no multiplication formula")
        cob = co(b)
        for a, ca in ye.terms.items():
            if cob != ro(a):
                continue
            scale = cb * ca
            for m, cf in _mult_class(b, a).items():
                out[m] = out.get(m, LaurentPoly.zero()) + cf * scale
    res = SchurElement(x.n, x.d, E_BASIS, out)
    return res.to_bracket() if out_basis == BRACKET_BASIS else res


# -- generators and relations -----------------------------------------


def generator_tbar(i: int, j: int, n: int, d: int) -> SchurElement:
    """The RTT generator with 1-based indices; zero below the diagonal."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("indices out of range")
    if i > j:
        return SchurElement.zero(n, d, BRACKET_BASIS)
    if i == j:
        terms = {
            diag_mat(lam): LaurentPoly.v_power(lam[i - 1])
            for lam in compositions(d, n)
        }
        return SchurElement(n, d, BRACKET_BASIS, terms)
    if d == 0:
        return SchurElement.zero(n, d, BRACKET_BASIS)
    pref = -(LaurentPoly({-1: 1, 1: -1}))  # -(v^-1 - v) = v - v^-1
    terms = {}
    unit = e_mat(n, i - 1, j - 1)
    for lam in compositions(d - 1, n):
        terms[mat_add(diag_mat(lam), unit)] = pref * LaurentPoly.v_power(lam[i - 1])
    return SchurElement(n, d, BRACKET_BASIS, terms)


def verify_rtt_schur(n: int, d: int) -> dict:
    """Exact check of the exchange relation, the diagonal product, the diagonal
    minimal polynomial, and nilpotence of the off-diagonal generators."""
    gens = {
        (i, j): generator_tbar(i, j, n, d)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    }
    failures = []
    checked = 0
    vminus = LaurentPoly({-1: 1, 1: -1})  # v^-1 - v

    for i, a, j, b in itertools.product(range(1, n + 1), repeat=4):
        lhs = product(gens[(i, a)], gens[(j, b)]).scale(LaurentPoly.v_power(-(1 if i == j else 0)))
        lhs = lhs - product(gens[(j, b)], gens[(i, a)]).scale(LaurentPoly.v_power(-(1 if a == b else 0)))
        sign = (1 if b < a else 0) - (1 if i < j else 0)
        rhs = product(gens[(j, a)], gens[(i, b)]).scale(vminus.scale(sign))
        checked += 1
        if lhs != rhs:
            failures.append({"relation": "R1", "indices": [i, a, j, b]})

    ident = identity_element(n, d, BRACKET_BASIS)
    prod = ident
    for i in range(1, n + 1):
        prod = product(prod, gens[(i, i)])
    checked += 1
    if prod != ident.scale(LaurentPoly.v_power(d)):
        failures.append({"relation": "R2", "indices": []})

    for i in range(1, n + 1):
        acc = ident
        for l in range(d + 1):
            acc = product(acc, gens[(i, i)] - ident.scale(LaurentPoly.v_power(l)))
        checked += 1
        if not acc.is_zero():
            failures.append({"relation": "R3", "indices": [i]})

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            acc = gens[(i, j)]
            for _ in range(d):
                acc = product(gens[(i, j)], acc)
            checked += 1
            if not acc.is_zero():
                failures.append({"relation": "R4", "indices": [i, j]})

    return {"ok": not failures, "checked": checked, "failures": failures}


# -- triangular decomposition -----------------------------------------


@dataclass
class TriangularResult:
    matrix: Mat
    chi: LaurentPoly
    element: SchurElement
    leading_ok: bool
    factors: list[Mat] = field(default_factory=list)


def triangular_factors(a: Mat) -> list[Mat]:
    """The ordered factor matrices of the triangular decomposition.

    Lower-triangular positions come first, ordered by (column, row); then the
    upper-triangular positions ordered by (column, row) reversed.  Diagonals
    are determined by propagating column sums from the right.
    """
    n = len(a)
    lower = sorted(((i, j) for i in range(n) for j in range(n) if i > j), key=lambda t: (t[1], t[0]))
    upper = sorted(((i, j) for i in range(n) for j in range(n) if i < j), key=lambda t: (t[1], t[0]), reverse=True)
    pairs = lower + upper

    factors: list[Mat] = []
    target = list(co(a))
    for i, j in reversed(pairs):
        c = a[i][j]
        diag = list(target)
        diag[j] -= c
        if any(x < 0 for x in diag):
            raise ChainInfeasible(f"factor ({i},{j}) of {a} forces a negative diagonal")
        f = [[diag[r] if r == s else 0 for s in range(n)] for r in range(n)]
        f[i][j] += c
        factors.append(tuple(tuple(r) for r in f))
        target = diag
        target[i] += c
    if tuple(target) != ro(a):
        raise ChainInfeasible(f"factor chain for {a} does not close up on the row sums")
    factors.reverse()
    return factors


def triangular_product(a: Mat) -> TriangularResult:
    """Evaluate the triangular factor chain and split off the leading term."""
    d = sum(sum(r) for r in a)
    n = len(a)
    factors = triangular_factors(a)
    acc = SchurElement.single(factors[-1], d)
    for f in reversed(factors[:-1]):
        acc = product(SchurElement.single(f, d), acc)
    chi = acc.coeff(a)
    leading_ok = not chi.is_zero() and all(
        m == a or (preceq(m, a) and m != a) for m in acc.terms
    )
    return TriangularResult(matrix=a, chi=chi, element=acc, leading_ok=leading_ok, factors=factors)
