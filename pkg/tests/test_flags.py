import itertools

import pytest

from qschur.errors import TooLarge
from qschur.flags import (
    Flag,
    Subspace,
    canonical_pair,
    convolve_oracle,
    count_flags,
    enumerate_flags,
    enumerate_subspaces,
    orbit_matrix,
    rref,
    subspace_intersect,
    subspace_sum,
    verify_counting_lemmas,
)
from qschur.matrices import co, enumerate_theta, mat_sum, ro, transpose


def gauss_binom(d, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def test_rref_canonical():
    assert rref([[2, 4], [1, 2]], 5) == ((1, 2),)
    assert rref([[0, 0]], 2) == ()
    assert rref([[1, 1], [0, 1]], 2) == ((1, 0), (0, 1))


@pytest.mark.parametrize("q,d,k", [(2, 3, 1), (2, 4, 2), (3, 3, 2)])
def test_enumerate_subspaces_count(q, d, k):
    subs = enumerate_subspaces(q, d, k)
    assert len(subs) == gauss_binom(d, k, q)
    assert len(set(subs)) == len(subs)
    assert all(s.dim == k for s in subs)


def test_subspace_operations():
    u = Subspace.from_vectors(2, 3, [(1, 0, 0), (0, 1, 0)])
    w = Subspace.from_vectors(2, 3, [(0, 1, 0), (0, 0, 1)])
    assert subspace_sum(u, w).dim == 3
    inter = subspace_intersect(u, w)
    assert inter.dim == 1
    assert inter.contains_vector((0, 1, 0))


@pytest.mark.parametrize("q", [2, 3])
def test_modular_law(q):
    # dim(U + W) + dim(U cap W) = dim U + dim W, on all pairs in F_q^3
    subs = [s for k in range(4) for s in enumerate_subspaces(q, 3, k)]
    for u, w in itertools.product(subs[:20], subs[:20]):
        assert subspace_sum(u, w).dim + subspace_intersect(u, w).dim == u.dim + w.dim


@pytest.mark.parametrize("n,d,q", [(2, 2, 2), (2, 3, 2), (3, 2, 3)])
def test_flag_count_gaussian(n, d, q):
    # number of flags with step dims k_1 <= ... <= k_n is a product of
    # Gaussian binomials; sum over all dim chains gives the total
    total = 0
    for dims in itertools.combinations_with_replacement(range(d + 1), n - 1):
        chain = dims + (d,)
        prod = 1
        prev = 0
        for k in chain:
            prod *= gauss_binom(d - prev, k - prev, q)
            prev = k
        total += prod
    assert count_flags(n, d, q) == total


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        list(enumerate_flags(2, 3, 3, cap=5))


@pytest.mark.parametrize("n,d,q", [(2, 2, 2), (3, 2, 2)])
def test_orbit_matrix_properties(n, d, q):
    flags = list(enumerate_flags(n, d, q))
    for f, fp in itertools.product(flags[:12], flags[:12]):
        a = orbit_matrix(f, fp)
        assert mat_sum(a) == d
        assert ro(a) == tuple(f.step(i).dim - f.step(i - 1).dim for i in range(1, n + 1))
        assert co(a) == tuple(fp.step(i).dim - fp.step(i - 1).dim for i in range(1, n + 1))
        assert orbit_matrix(fp, f) == transpose(a)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (3, 3), (3, 4)])
def test_canonical_pair_round_trip(n, d, q):
    for a in enumerate_theta(n, d):
        f, fp = canonical_pair(a, q)
        assert orbit_matrix(f, fp) == a


def test_convolve_oracle_identity():
    # convolving with the diagonal orbit acts as identity on the count
    a = ((1, 0), (0, 1))
    c = ((0, 1), (1, 0))
    diag_c = tuple(
        tuple(sum(c[i]) if i == j else 0 for j in range(2)) for i in range(2)
    )
    for q in (2, 3):
        assert convolve_oracle(diag_c, c, c, q) == 1
        assert convolve_oracle(a, a, a, q) == 1


def test_convolve_oracle_incompatible_is_zero():
    a = ((2, 0), (0, 0))
    b = ((0, 0), (0, 2))
    assert convolve_oracle(a, b, a, 2) == 0


def test_representative_independence():
    # the structure constant must not depend on the chosen flag pair in the orbit
    q, n, d = 2, 2, 2
    a = ((0, 1), (1, 0))
    flags = list(enumerate_flags(n, d, q))
    counts = set()
    for f, fp in itertools.product(flags, flags):
        if orbit_matrix(f, fp) != a:
            continue
        cnt = sum(
            1
            for mid in enumerate_flags(n, d, q)
            if orbit_matrix(f, mid) == a and orbit_matrix(mid, fp) == ((1, 0), (0, 1))
        )
        counts.add(cnt)
    assert len(counts) == 1


@pytest.mark.parametrize("q", [2, 3])
def test_counting_lemmas(q):
    report = verify_counting_lemmas(q, m_max=4)
    assert report["ok"]
    # spot values: m=3, n=1 -> q^2 hyperplanes through 0 not containing a line
    case = next(
        c for c in report["cases"]
        if c["lemma"] == 1 and c["m"] == 3 and c["n"] == 1
    )
    assert case["count"] == q ** 2


def test_flag_validation():
    full = Subspace.full(2, 2)
    line = Subspace.from_vectors(2, 2, [(1, 0)])
    Flag((line, full))
    with pytest.raises(ValueError):
        Flag((full, line))  # not nested
    with pytest.raises(ValueError):
        Flag((line,))  # last step not full
