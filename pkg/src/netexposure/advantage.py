"""Does central clearing of one derivative class reduce expected exposure?

Clearing class k through a CCP replaces the bilateral pair portfolios by
per-participant pooled positions in that class. It helps if and only if
the pooled total plus the bilateral rest is strictly below the all-
bilateral total. For arbitrary networks both sides are full sums over the
exposure engine; complete graphs admit a representative-participant
comparison

    E_{N-1}  <  (N-1) * (E_K - E_{K-1})

where E_M is the expected exposure of a balanced M-link pool. For the
Laplace law E_M is exactly rational, (M / 4^M) * C(2M, M), which makes the
minimal-participants table bit-reproducible; the normal law reduces to the
integer test 4K(N-1) < N^2.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .charfn import Distribution, LaplaceSym, NormalSym, charfn_of, cf_product
from .exposure import (
    expected_bilateral_market,
    expected_multilateral_market,
)
from .transforms import hilbert_deriv_at_zero
from .market import Market

__all__ = [
    "laplace_expected",
    "normal_complete_threshold",
    "complete_graph_advantage",
    "min_participants_table",
    "ccp_advantage",
    "AdvantageReport",
]

_TIE_REL_TOL = 1e-11
_TABLE_N_CAP = 100_000
_TABLE_K_CAP = 30


def laplace_expected(m: int) -> Fraction:
    """Exact expected exposure of a balanced pool of m unit-Laplace
    positions: (m / 4^m) * C(2m, m).

    Equals Gamma(1/2 + m) / (sqrt(pi) * Gamma(m)); both forms are asserted
    to agree. m = 0 is the empty pool with exposure 0.
    """
    if m < 0:
        raise ValueError("pool size must be nonnegative")
    if m == 0:
        return Fraction(0)
    value = Fraction(m, 4**m) * math.comb(2 * m, m)
    gamma_form = math.exp(math.lgamma(0.5 + m) - math.lgamma(m)) \
        / math.sqrt(math.pi)
    assert abs(gamma_form - float(value)) <= 1e-12 * float(value)
    return value


def normal_complete_threshold(n: int, k: int) -> bool:
    """Exact integer form of the complete-graph criterion for normal
    positions: advantageous iff K < N^2 / (4(N-1))."""
    if n < 3:
        raise ValueError("the closed-form threshold needs at least "
                         "3 participants")
    if k < 1:
        raise ValueError("need at least one derivative class")
    return 4 * k * (n - 1) < n * n


def _pool_expected(dist: Distribution, m: int, tol: float) -> float:
    """Expected exposure of a balanced pool of m positions (numeric route
    for laws without a special form)."""
    if m == 0:
        return 0.0
    f = cf_product([charfn_of(dist)] * m)
    return 0.5 * hilbert_deriv_at_zero(f, tol)


def _margins(n: int, k: int, dist: Distribution, tol: float):
    """(pooled side, bilateral-gain side) of the representative comparison;
    exact Fractions for Laplace, floats otherwise."""
    if isinstance(dist, LaplaceSym):
        lhs = laplace_expected(n - 1)
        rhs = (n - 1) * (laplace_expected(k) - laplace_expected(k - 1))
        return lhs, rhs
    lhs = _pool_expected(dist, n - 1, tol)
    rhs = (n - 1) * (_pool_expected(dist, k, tol)
                     - _pool_expected(dist, k - 1, tol))
    return lhs, rhs


def complete_graph_advantage(n: int, k: int, dist: Distribution,
                             tol: float = 1e-9) -> bool:
    """Strict advantageousness of clearing one of k classes on the
    complete graph with n participants."""
    if n < 3:
        raise ValueError("need at least 3 participants")
    if k < 1:
        raise ValueError("need at least one derivative class")
    if isinstance(dist, NormalSym):
        return normal_complete_threshold(n, k)
    lhs, rhs = _margins(n, k, dist, tol)
    return lhs < rhs


def _at_least_as_good(n: int, k: int, dist: Distribution, tol: float) -> bool:
    if isinstance(dist, NormalSym):
        return 4 * k * (n - 1) <= n * n
    lhs, rhs = _margins(n, k, dist, tol)
    if isinstance(lhs, Fraction):
        return lhs <= rhs
    return lhs <= rhs + _TIE_REL_TOL * max(1.0, abs(rhs))


def min_participants_table(dist: Distribution, k_max: int,
                           tol: float = 1e-9) -> list[int]:
    """Smallest market size making central clearing worthwhile, per class
    count 1..k_max.

    Ties count as worthwhile: with a single class the two-participant
    market clears equally well either way, and the table reports that
    boundary as 2. Entries are monotone nondecreasing in the class count.
    """
    if not 1 <= k_max <= _TABLE_K_CAP:
        raise ValueError(f"k_max must be in 1..{_TABLE_K_CAP}")
    table = []
    n = 2
    for k in range(1, k_max + 1):
        # monotone in k, so resume the scan where the last class stopped
        while not _at_least_as_good(n, k, dist, tol):
            n += 1
            if n > _TABLE_N_CAP:
                raise RuntimeError("no advantageous market size found "
                                   f"below {_TABLE_N_CAP} for k={k}")
        table.append(n)
    return table


@dataclass(frozen=True)
class AdvantageReport:
    cls: int
    with_ccp: float
    without_ccp: float
    advantageous: bool
    tie: bool


def ccp_advantage(m: Market, dist: Distribution, cls: int,
                  tol: float = 1e-7) -> AdvantageReport:
    """Compare expected market exposure with and without a CCP in one
    class; strict inequality decides, and ties are flagged rather than
    counted as an advantage."""
    with_report = expected_multilateral_market(m, dist, cls, tol)
    without_report = expected_bilateral_market(m, dist, tol)
    with_ccp = with_report.market_total
    without = without_report.market_total
    if (with_report.market_total_exact is not None
            and without_report.market_total_exact is not None):
        tie = with_report.market_total_exact == without_report.market_total_exact
        advantageous = with_report.market_total_exact < without_report.market_total_exact
    else:
        scale = max(1.0, abs(with_ccp), abs(without))
        tie = abs(with_ccp - without) <= _TIE_REL_TOL * scale
        advantageous = (not tie) and with_ccp < without
    return AdvantageReport(cls=cls, with_ccp=with_ccp, without_ccp=without,
                           advantageous=advantageous, tie=tie)
