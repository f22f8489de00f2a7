"""Index combinatorics for orbit matrices: row/column sums, dimension statistics,
partial orders, hats and diagonal shifts, and enumeration of the index sets.

Matrices are immutable tuples of integer row tuples, indexed from 0.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Mat = tuple[tuple[int, ...], ...]
Vec = tuple[int, ...]


def mat(rows: Iterable[Sequence[int]]) -> Mat:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    return m


def zero_mat(n: int) -> Mat:
    return tuple((0,) * n for _ in range(n))


def diag_mat(lam: Sequence[int]) -> Mat:
    n = len(lam)
    return tuple(tuple(lam[i] if i == j else 0 for j in range(n)) for i in range(n))


def e_mat(n: int, i: int, j: int, c: int = 1) -> Mat:
    """c times the matrix unit at position (i, j), 0-based."""
    return tuple(tuple(c if (r, s) == (i, j) else 0 for s in range(n)) for r in range(n))


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a))


def mat_sum(a: Mat) -> int:
    return sum(sum(r) for r in a)


def ro(m: Mat) -> Vec:
    """Row sums."""
    return tuple(sum(r) for r in m)


def co(m: Mat) -> Vec:
    """Column sums."""
    return tuple(sum(col) for col in zip(*m))


def is_theta(a: Mat, d: int | None = None) -> bool:
    """Nonnegative entries; total equal to d when given."""
    if any(x < 0 for r in a for x in r):
        return False
    return d is None or mat_sum(a) == d


def is_tilde(a: Mat) -> bool:
    """Off-diagonal entries nonnegative, diagonal unrestricted."""
    n = len(a)
    return all(a[i][j] >= 0 for i in range(n) for j in range(n) if i != j)


def is_hat(a: Mat) -> bool:
    return is_tilde(a) and all(a[i][i] == 0 for i in range(len(a)))


def dim_stab(a: Mat) -> int:
    """Sum of a_ij * a_kl over pairs with i >= k and j >= l."""
    cells = [(i, j, x) for i, r in enumerate(a) for j, x in enumerate(r) if x]
    return sum(x * y for i, j, x in cells for k, l, y in cells if i >= k and j >= l)


def dim_orbit(a: Mat) -> int:
    """Sum of a_ij * a_kl over pairs with i < k or j < l."""
    cells = [(i, j, x) for i, r in enumerate(a) for j, x in enumerate(r) if x]
    return sum(x * y for i, j, x in cells for k, l, y in cells if i < k or j < l)


def norm_exponent(a: Mat) -> int:
    """Sum of a_ij * a_kl over pairs with i >= k and j < l (the bracket-basis exponent)."""
    cells = [(i, j, x) for i, r in enumerate(a) for j, x in enumerate(r) if x]
    return sum(x * y for i, j, x in cells for k, l, y in cells if i >= k and j < l)


def preceq(a: Mat, b: Mat) -> bool:
    """Combinatorial partial order: corner sums of a bounded by those of b."""
    n = len(a)
    if len(b) != n:
        raise ValueError("matrices must have the same size")
    for i in range(n):
        for j in range(n):
            if i < j:
                sa = sum(a[r][s] for r in range(i + 1) for s in range(j, n))
                sb = sum(b[r][s] for r in range(i + 1) for s in range(j, n))
                if sa > sb:
                    return False
            elif i > j:
                sa = sum(a[r][s] for r in range(i, n) for s in range(j + 1))
                sb = sum(b[r][s] for r in range(i, n) for s in range(j + 1))
                if sa > sb:
                    return False
    return True


def hat(a: Mat) -> Mat:
    """Zero out the diagonal."""
    n = len(a)
    return tuple(tuple(0 if i == j else a[i][j] for j in range(n)) for i in range(n))


def add_diag(h: Mat, lam: Sequence[int]) -> Mat:
    """Add the diagonal matrix of lam."""
    n = len(h)
    if len(lam) != n:
        raise ValueError("weight vector length must match matrix size")
    return tuple(tuple(h[i][j] + (lam[i] if i == j else 0) for j in range(n)) for i in range(n))


def shift(a: Mat, p: int) -> Mat:
    """A + p*I."""
    n = len(a)
    return tuple(tuple(a[i][j] + (p if i == j else 0) for j in range(n)) for i in range(n))


def diag_of(a: Mat) -> Vec:
    return tuple(a[i][i] for i in range(len(a)))


def compositions(total: int, parts: int) -> Iterator[Vec]:
    """All nonnegative integer vectors of the given length summing to total, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_theta(n: int, d: int) -> tuple[Mat, ...]:
    """All n x n matrices with nonnegative entries summing to d, lex order on flattened rows."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        raise ValueError("d must be >= 0")
    out = []
    for flat in compositions(d, n * n):
        out.append(tuple(flat[i * n:(i + 1) * n] for i in range(n)))
    return tuple(out)


def mat_to_json(a: Mat) -> dict:
    return {"n": len(a), "rows": [list(r) for r in a]}


def mat_from_json(obj: dict) -> Mat:
    m = mat(obj["rows"])
    if len(m) != obj.get("n", len(m)):
        raise ValueError("matrix size disagrees with declared n")
    return m
