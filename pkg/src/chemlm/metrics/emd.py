"""1-Wasserstein distance between empirical 1D distributions."""

from __future__ import annotations

from fractions import Fraction


def emd_1d(a, b) -> float:
    """Earth mover's distance between two samples of real values.

    Equal-size samples reduce to the mean absolute difference of the
    sorted values. Unequal sizes integrate |Q_a(u) - Q_b(u)| du over the
    piecewise-constant quantile functions, with exact rational
    breakpoints so no interval is lost to floating-point ties.
    """
    a = sorted(float(v) for v in a)
    b = sorted(float(v) for v in b)
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    if len(a) == len(b):
        return sum(abs(x - y) for x, y in zip(a, b)) / len(a)

    na, nb = len(a), len(b)
    cuts = sorted({Fraction(i, na) for i in range(na + 1)} | {Fraction(j, nb) for j in range(nb + 1)})
    total = Fraction(0)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        ia = int(lo * na)  # index of the quantile segment containing (lo, hi)
        ib = int(lo * nb)
        total += (hi - lo) * Fraction(abs(a[ia] - b[ib]))
    return float(total)
