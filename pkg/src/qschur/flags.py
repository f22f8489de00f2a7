"""Brute-force ground truth: linear algebra over prime fields, enumeration of
n-step flags, orbit matrices for flag pairs, and convolution by direct counting.

Everything here is deliberately naive; it exists to cross-check the symbolic
multiplication formulas, not to be fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import Incompatible, TooLarge
from .matrices import Mat, Vec, co, mat, ro

DEFAULT_CAP = 200_000


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, int(q ** 0.5) + 1):
        if q % p == 0:
            return False
    return True


def check_prime(q: int) -> int:
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    return q


def rref(rows: Sequence[Sequence[int]], q: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over F_q; zero rows are dropped."""
    work = [list(x % q for x in r) for r in rows]
    if not work:
        return ()
    ncols = len(work[0])
    pivot_row = 0
    for col in range(ncols):
        piv = next((r for r in range(pivot_row, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[pivot_row], work[piv] = work[piv], work[pivot_row]
        inv = pow(work[pivot_row][col], q - 2, q)
        work[pivot_row] = [(x * inv) % q for x in work[pivot_row]]
        for r in range(len(work)):
            if r != pivot_row and work[r][col]:
                f = work[r][col]
                work[r] = [(x - f * y) % q for x, y in zip(work[r], work[pivot_row])]
        pivot_row += 1
        if pivot_row == len(work):
            break
    return tuple(tuple(r) for r in work[:pivot_row] if any(r))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^d, canonically represented by its RREF basis."""

    q: int
    ambient: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, q: int, ambient: int, vectors: Sequence[Sequence[int]]) -> "Subspace":
        return cls(q, ambient, rref(vectors, q))

    @classmethod
    def zero(cls, q: int, ambient: int) -> "Subspace":
        return cls(q, ambient, ())

    @classmethod
    def full(cls, q: int, ambient: int) -> "Subspace":
        ident = tuple(tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient))
        return cls(q, ambient, ident)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.q != other.q or self.ambient != other.ambient:
            raise Incompatible("subspaces live over different fields or ambient spaces")

    def contains_vector(self, vec: Sequence[int]) -> bool:
        v = [x % self.q for x in vec]
        for row in self.basis:
            piv = next(i for i, x in enumerate(row) if x)
            if v[piv]:
                f = v[piv]
                v = [(x - f * y) % self.q for x, y in zip(v, row)]
        return not any(v)

    def contains(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains_vector(row) for row in other.basis)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """Every vector of the subspace (q^dim of them)."""
        q, amb = self.q, self.ambient
        for coeffs in itertools.product(range(q), repeat=self.dim):
            v = [0] * amb
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [(x + c * y) % q for x, y in zip(v, row)]
            yield tuple(v)


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    u._check_compatible(w)
    return Subspace.from_vectors(u.q, u.ambient, u.basis + w.basis)


def subspace_intersect(u: Subspace, w: Subspace) -> Subspace:
    """Zassenhaus: RREF of [[U|U],[W|0]]; rows with zero left block span the intersection."""
    u._check_compatible(w)
    d = u.ambient
    stacked = [list(r) + list(r) for r in u.basis] + [list(r) + [0] * d for r in w.basis]
    reduced = rref(stacked, u.q)
    inter = [r[d:] for r in reduced if not any(r[:d])]
    return Subspace.from_vectors(u.q, d, inter)


@lru_cache(maxsize=None)
def _sum_cached(u: Subspace, w: Subspace) -> Subspace:
    return subspace_sum(u, w)


@lru_cache(maxsize=None)
def _intersect_cached(u: Subspace, w: Subspace) -> Subspace:
    return subspace_intersect(u, w)


@lru_cache(maxsize=None)
def enumerate_subspaces(q: int, d: int, k: int) -> tuple[Subspace, ...]:
    """All k-dimensional subspaces of F_q^d, via direct RREF enumeration."""
    check_prime(q)
    if not 0 <= k <= d:
        return ()
    out = []
    for pivots in itertools.combinations(range(d), k):
        free = [
            (r, c)
            for r in range(k)
            for c in range(pivots[r] + 1, d)
            if c not in pivots
        ]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * d for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), val in zip(free, values):
                rows[r][c] = val
            out.append(Subspace(q, d, tuple(tuple(r) for r in rows)))
    return tuple(out)


@dataclass(frozen=True)
class Flag:
    """An n-step flag 0 = V_0 <= V_1 <= ... <= V_n = F_q^d."""

    chain: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.chain:
            raise ValueError("flag needs at least one step")
        last = self.chain[-1]
        if last.dim != last.ambient:
            raise ValueError("last step must be the full space")
        for a, b in zip(self.chain, self.chain[1:]):
            if not b.contains(a):
                raise ValueError("flag steps must be nested")

    @property
    def n(self) -> int:
        return len(self.chain)

    @property
    def q(self) -> int:
        return self.chain[-1].q

    @property
    def d(self) -> int:
        return self.chain[-1].ambient

    def step(self, i: int) -> Subspace:
        """V_i with the convention V_0 = 0; i ranges over 0..n."""
        if i == 0:
            return Subspace.zero(self.q, self.d)
        return self.chain[i - 1]


def enumerate_flags(
    n: int,
    d: int,
    q: int,
    cap: int = DEFAULT_CAP,
    step_dims: Vec | None = None,
) -> Iterator[Flag]:
    """Every n-step flag exactly once, deterministic order.

    step_dims optionally restricts to flags with the given dimensions of
    V_1..V_n (the last entry must be d).  Raises TooLarge past the cap.
    """
    check_prime(q)
    if step_dims is not None:
        if len(step_dims) != n or step_dims[-1] != d:
            raise ValueError("step_dims must have length n and end at d")
        dim_chains = [step_dims] if all(a <= b for a, b in zip(step_dims, step_dims[1:])) else []
    else:
        dim_chains = [
            dims + (d,)
            for dims in itertools.combinations_with_replacement(range(d + 1), n - 1)
        ]

    count = 0
    full = Subspace.full(q, d)
    for dims in dim_chains:
        partials: list[list[Subspace]] = [[]]
        for level, k in enumerate(dims):
            nxt = []
            for chain in partials:
                prev = chain[-1] if chain else Subspace.zero(q, d)
                if k < prev.dim:
                    continue
                if k == d:
                    if full.contains(prev):
                        nxt.append(chain + [full])
                    continue
                for sub in enumerate_subspaces(q, d, k):
                    if sub.contains(prev):
                        nxt.append(chain + [sub])
            partials = nxt
        for chain in partials:
            count += 1
            if count > cap:
                raise TooLarge(f"flag enumeration exceeded cap {cap}")
            yield Flag(tuple(chain))


def count_flags(n: int, d: int, q: int, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for _ in enumerate_flags(n, d, q, cap))


@lru_cache(maxsize=None)
def orbit_matrix(f: Flag, fp: Flag) -> Mat:
    """The relative-position matrix of a flag pair.

    Entry (i, j) is dim (V_{i-1} + V_i cap V'_j) / (V_{i-1} + V_i cap V'_{j-1}).
    """
    if f.q != fp.q or f.d != fp.d or f.n != fp.n:
        raise Incompatible("flags must share field, dimension, and step count")
    n = f.n
    rows = []
    for i in range(1, n + 1):
        vi_prev, vi = f.step(i - 1), f.step(i)
        row = []
        prev_dim = None
        for j in range(0, n + 1):
            cur = _sum_cached(vi_prev, _intersect_cached(vi, fp.step(j))).dim
            if j > 0:
                row.append(cur - prev_dim)
            prev_dim = cur
        rows.append(tuple(row))
    return tuple(rows)


def canonical_pair(a: Mat, q: int) -> tuple[Flag, Flag]:
    """A standard coordinate flag pair whose orbit matrix is a."""
    check_prime(q)
    n = len(a)
    triples = [
        (i, j)
        for i in range(n)
        for j in range(n)
        for _ in range(a[i][j])
    ]
    d = len(triples)

    def coord_flag(key) -> Flag:
        chain = []
        for lvl in range(1, n + 1):
            rows = [
                tuple(1 if t == s else 0 for s in range(d))
                for t, ij in enumerate(triples)
                if key(ij) <= lvl
            ]
            chain.append(Subspace.from_vectors(q, d, rows))
        return Flag(tuple(chain))

    f = coord_flag(lambda ij: ij[0] + 1)
    fp = coord_flag(lambda ij: ij[1] + 1)
    return f, fp


def convolve_oracle(a: Mat, b: Mat, c: Mat, q: int, cap: int = DEFAULT_CAP) -> int:
    """Structure constant of e_a * e_b at e_c by direct counting.

    With (V, V') a representative of the orbit of c, counts flags V'' such that
    (V, V'') sits in the orbit of a and (V'', V') in the orbit of b.
    """
    n = len(a)
    if len(b) != n or len(c) != n:
        raise Incompatible("matrices must share n")
    if co(a) != ro(b) or ro(a) != ro(c) or co(b) != co(c):
        return 0
    f, fp = canonical_pair(c, q)
    dims = tuple(itertools.accumulate(co(a)))
    count = 0
    for mid in enumerate_flags(n, f.d, q, cap, step_dims=dims):
        if orbit_matrix(f, mid) == a and orbit_matrix(mid, fp) == b:
            count += 1
    return count


def convolution_table(c: Mat, q: int, cap: int = DEFAULT_CAP) -> dict[tuple[Mat, Mat], int]:
    """All structure constants with target c at once: counts keyed by (a, b)."""
    f, fp = canonical_pair(c, q)
    n = len(c)
    counts: dict[tuple[Mat, Mat], int] = {}
    for mid in enumerate_flags(n, f.d, q, cap):
        key = (orbit_matrix(f, mid), orbit_matrix(mid, fp))
        counts[key] = counts.get(key, 0) + 1
    return counts


def verify_counting_lemmas(q: int, m_max: int = 5) -> dict:
    """Brute-force checks of the two hyperplane-counting identities.

    First identity: with V1 <1 V2 <= V3 of dimensions n-1, n, m, the number of
    hyperplanes of V3 containing V1 but not V2 is q^(m-n).  Second identity:
    with V1 a line and V2 an n-dimensional complement piece inside V3, the
    number of hyperplanes meeting V1 trivially and V2 in dimension n-1 is
    q^(m-1) - q^(m-n-1).
    """
    check_prime(q)
    cases = []

    def basis_span(m, idxs):
        return Subspace.from_vectors(
            q, m, [tuple(1 if s == t else 0 for s in range(m)) for t in idxs]
        )

    for m in range(1, m_max + 1):
        hyperplanes = enumerate_subspaces(q, m, m - 1)
        for n in range(1, m + 1):
            v1 = basis_span(m, range(n - 1))
            v2 = basis_span(m, range(n))
            got = sum(
                1 for h in hyperplanes if h.contains(v1) and not h.contains(v2)
            )
            expected = q ** (m - n)
            cases.append(
                {"lemma": 1, "q": q, "m": m, "n": n, "count": got,
                 "expected": expected, "ok": got == expected}
            )
        for n in range(1, m):
            v1 = basis_span(m, [n])
            v2 = basis_span(m, range(n))
            got = sum(
                1
                for h in hyperplanes
                if subspace_intersect(v1, h).dim == 0
                and subspace_intersect(v2, h).dim == n - 1
            )
            expected = q ** (m - 1) - q ** (m - n - 1)
            cases.append(
                {"lemma": 2, "q": q, "m": m, "n": n, "count": got,
                 "expected": expected, "ok": got == expected}
            )
    return {"ok": all(c["ok"] for c in cases), "cases": cases}
