"""Cross-validation of the symbolic multiplication formulas against the
brute-force flag-counting oracle."""

from __future__ import annotations

from .flags import DEFAULT_CAP, check_prime, convolution_table
from .laurent import LaurentPoly, eval_even
from .matrices import co, enumerate_theta, ro
from .schur import _mult_class, classify_left


def verify_formula_vs_oracle(
    n: int,
    d: int,
    q_list: tuple[int, ...] = (2, 3),
    cap: int = DEFAULT_CAP,
    max_mismatches: int = 20,
) -> dict:
    """Compare every formula-supported product against direct flag counting.

    For each formula-supported left factor B and each compatible A, the
    structure constants of e_B * e_A specialized at v^2 = q must equal the
    number of intermediate flags counted by the oracle, for every target C and
    every prime q in q_list.
    """
    for q in q_list:
        check_prime(q)
    theta = enumerate_theta(n, d)
    supported = [b for b in theta if classify_left(b) is not None]
    # one pass of flag enumeration per (C, q); keys are (left, right) orbit pairs
    tables = {q: {c: convolution_table(c, q, cap) for c in theta} for q in q_list}

    checked = 0
    mismatches = []
    for b in supported:
        cob, rob = co(b), ro(b)
        for a in theta:
            if ro(a) != cob:
                continue
            terms = _mult_class(b, a)
            targets = [c for c in theta if ro(c) == rob and co(c) == co(a)]
            for c in targets:
                coeff = terms.get(c, LaurentPoly.zero())
                for q in q_list:
                    expected = tables[q][c].get((b, a), 0)
                    got = eval_even(coeff, q)
                    checked += 1
                    if got != expected:
                        mismatches.append(
                            {"B": b, "A": a, "C": c, "q": q,
                             "formula": str(got), "oracle": expected}
                        )
                        if len(mismatches) >= max_mismatches:
                            return {"ok": False, "checked": checked, "mismatches": mismatches}
    return {"ok": not mismatches, "checked": checked, "mismatches": mismatches}
