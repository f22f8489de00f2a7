"""The stabilized limit of the convolution algebra: sampled products of shifted
classes, exact fitting of the structure constants as polynomials in v' = v^-p,
specialization at v' = 1, formal weighted symbols, and the limit exchange
relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AnsatzFailure, Incompatible, NoFit, NoStabilization, UnsupportedShape
from .laurent import BiPoly, LaurentPoly, exact_div, fit_bipoly
from .matrices import (
    Mat,
    Vec,
    add_diag,
    co,
    diag_of,
    e_mat,
    hat,
    is_hat,
    is_tilde,
    mat_sum,
    ro,
    shift,
    zero_mat,
)
from .schur import BRACKET_BASIS, SchurElement, product

MAX_FIT_DEGREE = 8


def check_query(factors: list[Mat]) -> None:
    if len(factors) < 1:
        raise ValueError("need at least one factor")
    n = len(factors[0])
    for a in factors:
        if len(a) != n:
            raise Incompatible("factors disagree on n")
        if not is_tilde(a):
            raise ValueError(f"factor {a} has a negative off-diagonal entry")
    for a, b in zip(factors, factors[1:]):
        if co(a) != ro(b):
            raise Incompatible(f"co{co(a)} != ro{ro(b)} between consecutive factors")


def min_shift(factors: list[Mat]) -> int:
    """Smallest p making every shifted factor entrywise nonnegative."""
    lo = 0
    for a in factors:
        for i in range(len(a)):
            lo = max(lo, -a[i][i])
    return lo


def sample_product(factors: list[Mat], p: int) -> SchurElement:
    """The product of the shifted bracket classes [A_i + pI], computed exactly."""
    check_query(factors)
    shifted = [shift(a, p) for a in factors]
    for a in shifted:
        if any(x < 0 for r in a for x in r):
            raise ValueError(f"p={p} leaves a negative entry in {a}")
    d = mat_sum(shifted[0])
    acc = SchurElement.single(shifted[-1], d, BRACKET_BASIS)
    for a in reversed(shifted[:-1]):
        acc = product(SchurElement.single(a, d, BRACKET_BASIS), acc)
    return acc


@dataclass
class StableProduct:
    factors: list[Mat]
    p0: int
    terms: list[tuple[Mat, BiPoly]]

    def to_json(self) -> list[dict]:
        return [
            {"Z": {"n": len(z), "rows": [list(r) for r in z]}, "G": g.to_json()}
            for z, g in self.terms
        ]


def stabilize(factors: list[Mat], max_degree: int = MAX_FIT_DEGREE) -> StableProduct:
    """Fit the shifted products as polynomials in v' = v^-p.

    Samples p = p0, p0+1, ... ; un-shifts the supports; fits each coefficient
    with escalating degree until two held-out samples validate exactly.
    """
    check_query(factors)
    p0 = min_shift(factors) + 1
    samples: dict[int, dict[Mat, LaurentPoly]] = {}

    def sample(p: int) -> dict[Mat, LaurentPoly]:
        if p not in samples:
            prod = sample_product(factors, p)
            samples[p] = {shift(m, -p): c for m, c in prod.terms.items()}
        return samples[p]

    last_err = None
    for degree in range(max_degree + 1):
        ps = list(range(p0, p0 + degree + 3))  # degree+1 to fit, 2 held out
        data = [sample(p) for p in ps]
        support = sorted(set().union(*[set(s) for s in data]))
        if not support:
            return StableProduct(factors=factors, p0=p0, terms=[])
        try:
            terms = []
            for z in support:
                pts = [(p, s.get(z, LaurentPoly.zero())) for p, s in zip(ps, data)]
                g = fit_bipoly(pts, degree)
                terms.append((z, g))
            return StableProduct(factors=factors, p0=p0, terms=terms)
        except NoFit as exc:
            last_err = exc
    raise NoStabilization(
        f"no fit up to degree {max_degree} for factors {factors}: {last_err}"
    )


def specialize(sp: StableProduct) -> list[tuple[Mat, LaurentPoly]]:
    """Evaluate every fitted constant at v' = 1, dropping zero results."""
    out = []
    for z, g in sp.terms:
        c = g.eval_one()
        if not c.is_zero():
            out.append((z, c))
    return out


def specialization_integral(terms: list[tuple[Mat, LaurentPoly]]) -> bool:
    """Whether every specialized constant has integer coefficients."""
    return all(c.is_integral() for _, c in terms)


class UElement:
    """A finite combination of weighted formal symbols in the limit algebra."""

    __slots__ = ("n", "symbols")

    def __init__(self, n: int, symbols: dict[tuple[Mat, Vec], LaurentPoly] | None = None):
        self.n = n
        clean = {}
        for (h, w), s in (symbols or {}).items():
            if not s.is_zero():
                if not is_hat(h) or len(h) != n or len(w) != n:
                    raise ValueError(f"bad symbol ({h}, {w})")
                clean[(h, w)] = s
        self.symbols = clean

    @classmethod
    def zero(cls, n: int) -> "UElement":
        return cls(n)

    @classmethod
    def symbol(cls, h: Mat, w: Vec, scale: LaurentPoly = LaurentPoly.one()) -> "UElement":
        return cls(len(h), {(h, tuple(w)): scale})

    def is_zero(self) -> bool:
        return not self.symbols

    def __add__(self, other: "UElement") -> "UElement":
        if self.n != other.n:
            raise Incompatible("elements disagree on n")
        out = dict(self.symbols)
        for k, s in other.symbols.items():
            out[k] = out.get(k, LaurentPoly.zero()) + s
        return UElement(self.n, out)

    def __sub__(self, other: "UElement") -> "UElement":
        if self.n != other.n:
            raise Incompatible("elements disagree on n")
        out = dict(self.symbols)
        for k, s in other.symbols.items():
            out[k] = out.get(k, LaurentPoly.zero()) - s
        return UElement(self.n, out)

    def scale(self, c: LaurentPoly) -> "UElement":
        return UElement(self.n, {k: s * c for k, s in self.symbols.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UElement):
            return NotImplemented
        return self.n == other.n and self.symbols == other.symbols

    def __repr__(self) -> str:
        if not self.symbols:
            return "UElement(0)"
        bits = [f"({s!r})*{h}{w}" for (h, w), s in sorted(self.symbols.items())]
        return " + ".join(bits)

    def to_json(self) -> list[dict]:
        return [
            {
                "hat": {"n": self.n, "rows": [list(r) for r in h]},
                "weight": list(w),
                "scale": s.to_json(),
            }
            for (h, w), s in sorted(self.symbols.items())
        ]

    @classmethod
    def from_json(cls, obj: list) -> "UElement":
        syms = {}
        n = None
        for item in obj:
            h = tuple(tuple(r) for r in item["hat"]["rows"])
            n = len(h)
            syms[(h, tuple(item["weight"]))] = LaurentPoly.from_json(item["scale"])
        if n is None:
            raise ValueError("cannot infer n from an empty element; use UElement.zero")
        return cls(n, syms)


def limit_generator(i: int, j: int, n: int) -> UElement:
    """Limit RTT generator with 1-based indices; zero below the diagonal."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("indices out of range")
    unit = tuple(1 if k == i - 1 else 0 for k in range(n))
    if i > j:
        return UElement.zero(n)
    if i == j:
        return UElement.symbol(zero_mat(n), unit)
    pref = LaurentPoly({1: 1, -1: -1})  # -(v^-1 - v)
    return UElement.symbol(e_mat(n, i - 1, j - 1), unit, pref)


def _generator_type(h: Mat) -> bool:
    n = len(h)
    off = [(i, j) for i in range(n) for j in range(n) if i != j and h[i][j]]
    return len(off) <= 1


_PAIR_CACHE: dict[tuple[Mat, Vec, Mat, Vec], UElement] = {}


def _pair_product(hx: Mat, wx: Vec, hy: Mat, wy: Vec, base: int = 2) -> UElement:
    """Product of two weighted symbols, recognized from stabilized samples.

    Samples the diagonal weight of the right symbol on a base point plus unit
    perturbations, computes each representative product via stabilization and
    v' = 1 specialization, then solves for the weight vectors from coefficient
    ratios and validates on two held-out samples.
    """
    key = (hx, wx, hy, wy)
    if key in _PAIR_CACHE:
        return _PAIR_CACHE[key]
    if not (_generator_type(hx) and _generator_type(hy)):
        raise UnsupportedShape("limit products are supported for generator-type symbols only")
    n = len(hx)
    mu0 = tuple(base for _ in range(n))
    units = [tuple(1 if t == s else 0 for s in range(n)) for t in range(n)]
    held_out = [
        tuple(base + 1 for _ in range(n)),
        tuple(base + (2 if s == 0 else 0) for s in range(n)),
    ]

    def kproduct(mu: Vec) -> dict[Mat, LaurentPoly]:
        lam = tuple(ro(hy)[k] + mu[k] - co(hx)[k] for k in range(n))
        a = add_diag(hx, lam)
        b = add_diag(hy, mu)
        sp = stabilize([a, b])
        prefactor = LaurentPoly.v_power(
            sum(lam[k] * wx[k] for k in range(n)) + sum(mu[k] * wy[k] for k in range(n))
        )
        return {z: c * prefactor for z, c in specialize(sp)}

    base_terms = kproduct(mu0)
    perturbed = [kproduct(tuple(m + u for m, u in zip(mu0, unit))) for unit in units]

    def by_hat(terms: dict[Mat, LaurentPoly]) -> dict[Mat, tuple[Vec, LaurentPoly]]:
        out = {}
        for z, c in terms.items():
            h = hat(z)
            if h in out:
                raise AnsatzFailure(f"two terms share the hat {h} within one sample")
            out[h] = (diag_of(z), c)
        return out

    base_by_hat = by_hat(base_terms)
    pert_by_hat = [by_hat(t) for t in perturbed]
    for t in pert_by_hat:
        if set(t) != set(base_by_hat):
            raise AnsatzFailure("support hats differ between base and perturbed samples")

    symbols: dict[tuple[Mat, Vec], LaurentPoly] = {}
    for h, (nu0, c0) in base_by_hat.items():
        w = []
        for t in range(n):
            nu_t, c_t = pert_by_hat[t][h]
            if tuple(a - b for a, b in zip(nu_t, nu0)) != units[t]:
                raise AnsatzFailure(f"diagonal of hat {h} did not shift by a unit")
            ratio = exact_div(c_t, c0)
            rt = ratio.terms
            if len(rt) != 1 or list(rt.values()) != [1]:
                raise AnsatzFailure(f"coefficient ratio {ratio!r} for hat {h} is not a power of v")
            w.append(next(iter(rt)))
        w = tuple(w)
        scale = c0 * LaurentPoly.v_power(-sum(a * b for a, b in zip(nu0, w)))
        symbols[(h, w)] = scale

    # validate on held-out diagonal weights
    for mu in held_out:
        got = kproduct(mu)
        predicted: dict[Mat, LaurentPoly] = {}
        for (h, w), scale in symbols.items():
            nu0 = base_by_hat[h][0]
            nu = tuple(a + m - b for a, m, b in zip(nu0, mu, mu0))
            predicted[add_diag(h, nu)] = scale * LaurentPoly.v_power(
                sum(a * b for a, b in zip(nu, w))
            )
        if got != predicted:
            raise AnsatzFailure(
                f"held-out sample at {mu} disagrees with the recognized form"
            )

    result = UElement(n, symbols)
    _PAIR_CACHE[key] = result
    return result


def formal_product(x: UElement, y: UElement) -> UElement:
    """Product in the limit algebra, supported for generator-type symbols."""
    if x.n != y.n:
        raise Incompatible("elements disagree on n")
    out = UElement.zero(x.n)
    for (hx, wx), sx in x.symbols.items():
        for (hy, wy), sy in y.symbols.items():
            out = out + _pair_product(hx, wx, hy, wy).scale(sx * sy)
    return out


def verify_limit_rtt(n: int) -> dict:
    """Exact check of the limit exchange relation for all index quadruples."""
    gens = {
        (i, j): limit_generator(i, j, n)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    }
    vminus = LaurentPoly({-1: 1, 1: -1})  # v^-1 - v
    failures = []
    checked = 0
    for i, a, j, b in itertools.product(range(1, n + 1), repeat=4):
        lhs = formal_product(gens[(i, a)], gens[(j, b)]).scale(
            LaurentPoly.v_power(-(1 if i == j else 0))
        ) - formal_product(gens[(j, b)], gens[(i, a)]).scale(
            LaurentPoly.v_power(-(1 if a == b else 0))
        )
        sign = (1 if b < a else 0) - (1 if i < j else 0)
        rhs = formal_product(gens[(j, a)], gens[(i, b)]).scale(vminus.scale(sign))
        checked += 1
        if lhs != rhs:
            failures.append({"relation": "limit-R1", "indices": [i, a, j, b]})
    return {"ok": not failures, "checked": checked, "failures": failures}
