"""Independent reference implementations used only to check the package.

Everything here deliberately takes a *different* computational route from
the code under test: exact rational arithmetic (floats are dyadic
rationals, so Fraction conversion is lossless) instead of floating point,
normal equations instead of orthogonal decompositions, and per-keyword
set scans instead of a single counting pass.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from sentdep.ingest import tokenize


def pearson_exact(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson r with exact rational sums; one float rounding at the sqrt."""
    n = len(xs)
    fx = [Fraction(float(v)) for v in xs]
    fy = [Fraction(float(v)) for v in ys]
    mx = sum(fx) / n
    my = sum(fy) / n
    dx = [a - mx for a in fx]
    dy = [b - my for b in fy]
    sxy = sum(a * b for a, b in zip(dx, dy))
    sxx = sum(a * a for a in dx)
    syy = sum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        raise ZeroDivisionError("constant series")
    magnitude = math.sqrt(float((sxy * sxy) / (sxx * syy)))
    if sxy == 0:
        return 0.0
    return math.copysign(magnitude, float(sxy))


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss–Jordan elimination over Fractions with partial pivoting."""
    n = len(matrix)
    aug = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot_row][col] == 0:
            raise ZeroDivisionError("singular system")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        for row in range(n):
            if row != col and aug[row][col] != 0:
                factor = aug[row][col] / pivot
                aug[row] = [a - factor * b for a, b in zip(aug[row], aug[col])]
    return [aug[i][-1] / aug[i][i] for i in range(n)]


def ols_exact(
    regressor_rows: Sequence[Sequence[float]], response: Sequence[float]
) -> tuple[list[Fraction], Fraction]:
    """Intercept-first least squares via exact normal equations.

    Returns (coefficients, rss), both as Fractions (rss is exact for the
    float-rounded coefficients' true minimizer, since the normal equations
    are solved exactly).
    """
    n = len(response)
    design = [[Fraction(1)] + [Fraction(float(v)) for v in row] for row in regressor_rows]
    y = [Fraction(float(v)) for v in response]
    p = len(design[0])
    xtx = [[sum(design[i][a] * design[i][b] for i in range(n)) for b in range(p)]
           for a in range(p)]
    xty = [sum(design[i][a] * y[i] for i in range(n)) for a in range(p)]
    beta = _solve_exact(xtx, xty)
    rss = sum(
        (y[i] - sum(design[i][a] * beta[a] for a in range(p))) ** 2 for i in range(n)
    )
    return beta, rss


def granger_f_exact(x: Sequence[float], y: Sequence[float], lag: int = 1) -> float:
    """F statistic of the lag-exclusion test, via exact normal equations."""
    n = len(y)
    response = list(y[lag:])
    own = [[y[t - i] for i in range(1, lag + 1)] for t in range(lag, n)]
    full = [
        [y[t - i] for i in range(1, lag + 1)] + [x[t - i] for i in range(1, lag + 1)]
        for t in range(lag, n)
    ]
    _, rss_r = ols_exact(own, response)
    _, rss_u = ols_exact(full, response)
    q = lag
    df_den = (n - lag) - 2 * q - 1
    return float(((rss_r - rss_u) / q) / (rss_u / df_den))


def keyword_counts_bruteforce(texts: Sequence[str]) -> dict[str, int]:
    """Tweets-per-token by scanning all texts once per candidate keyword."""
    token_sets = [set(tokenize(t)) for t in texts]
    vocabulary = set().union(*token_sets) if token_sets else set()
    return {
        word: sum(1 for toks in token_sets if word in toks)
        for word in vocabulary
    }
