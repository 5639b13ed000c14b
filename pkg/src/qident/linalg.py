"""Sparse exact rank computation over Q, with a modular fast path.

Rows are dicts column->coefficient.  The exact path is the reference
arithmetic; the modular path (single word-sized prime) can only under-count a
rank, and is accepted by callers only after agreeing with the exact path on
low weights.
"""

from __future__ import annotations

from fractions import Fraction

MODULUS = 2**31 - 1  # Mersenne prime


def rank_of_rows(rows, modulus=None):
    """Rank of the span of the given sparse rows.

    Pivot columns are chosen by (column support size, column index), support
    counted once up front; rows are consumed shortest-first.  Deterministic.
    """
    if modulus is None:
        work = [{c: Fraction(v) for c, v in row.items() if v} for row in rows]
    else:
        work = []
        for row in rows:
            r = {}
            for c, v in row.items():
                if isinstance(v, Fraction):
                    num = v.numerator % modulus
                    den = v.denominator % modulus
                    if den == 0:
                        raise ZeroDivisionError("denominator divisible by modulus")
                    x = num * pow(den, modulus - 2, modulus) % modulus
                else:
                    x = v % modulus
                if x:
                    r[c] = x
            work.append(r)
    support = {}
    for row in work:
        for c in row:
            support[c] = support.get(c, 0) + 1
    work = [r for r in work if r]
    work.sort(key=lambda r: (len(r), sorted(r)))
    pivots = {}
    rank = 0
    for row in work:
        # reduce against existing pivots until stable
        while True:
            hit = None
            for c in row:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                break
            factor = row[hit]
            prow = pivots[hit]
            for c, v in prow.items():
                if modulus is None:
                    nv = row.get(c, Fraction(0)) - factor * v
                else:
                    nv = (row.get(c, 0) - factor * v) % modulus
                if nv:
                    row[c] = nv
                elif c in row:
                    del row[c]
        if not row:
            continue
        pc = min(row, key=lambda c: (support.get(c, 0), c))
        inv = (1 / row[pc]) if modulus is None else pow(row[pc], modulus - 2, modulus)
        if modulus is None:
            pivots[pc] = {c: v * inv for c, v in row.items()}
        else:
            pivots[pc] = {c: v * inv % modulus for c, v in row.items()}
        rank += 1
    return rank
