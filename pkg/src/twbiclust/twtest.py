"""Tracy-Widom goodness-of-fit test and sequential selection of K.

Under a correct K0-group assignment, the largest eigenvalue of the
standardized residual Gram matrix, centered by a_tw = (sqrt(n) + sqrt(p))^2
and scaled by b_tw = (sqrt(n) + sqrt(p)) (1/sqrt(n) + 1/sqrt(p))^(1/3),
converges in law to the Tracy-Widom distribution with index 1.  The test
rejects the hypothesis K = K0 when T = (lambda1 - a_tw) / b_tw reaches the
upper alpha quantile of that distribution; sequential testing of
K0 = 0, 1, 2, ... returns the first accepted hypothesis.

Quantiles at alpha = 0.01 / 0.05 / 0.1 use the standard tabulated values
2.02345 / 0.97931 / 0.45014 exactly; everything else is monotone cubic
interpolation on a precomputed CDF grid shipped with the package (see
``tools/make_tw1_table.py`` for its provenance).  The environment variable
``BICLUST_TW_TABLE`` overrides the table location.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import AlphaOutOfRangeError, NotAcceptedError
from .localize import LocalizerConfig, best_localization, entropy_fn, profile_likelihood
from .model import BiclusterAssignment, ObservedMatrix, all_background, standardize
from .spectral import max_eigenvalue

#: tabulated upper-tail quantiles (alpha, t(alpha)), returned exactly
PAPER_QUANTILES = ((0.01, 2.02345), (0.05, 0.97931), (0.1, 0.45014))

#: alpha range served by tw1_quantile
ALPHA_MIN, ALPHA_MAX = 0.001, 0.5

_DATA_ENV = "BICLUST_TW_TABLE"
_DATA_DEFAULT = Path(__file__).parent / "data" / "tw1_cdf.csv"


@dataclass(frozen=True)
class TWScaling:
    """Centering and scaling constants of the largest-eigenvalue statistic."""

    a_tw: float
    b_tw: float


def tw_scaling(n: int, p: int) -> TWScaling:
    if n < 1 or p < 1:
        raise ValueError("n and p must be >= 1")
    rn, rp = math.sqrt(n), math.sqrt(p)
    return TWScaling(
        a_tw=(rn + rp) ** 2,
        b_tw=(rn + rp) * (1.0 / rn + 1.0 / rp) ** (1.0 / 3.0),
    )


def test_statistic(lambda1: float, scaling: TWScaling) -> float:
    if not scaling.b_tw > 0:
        raise ValueError("b_tw must be positive")
    return (lambda1 - scaling.a_tw) / scaling.b_tw


class TWTable:
    """Quantile pairs plus a monotone CDF grid for the TW1 distribution."""

    def __init__(self, x_grid: np.ndarray, cdf_grid: np.ndarray, quantile_pairs=PAPER_QUANTILES):
        x = np.asarray(x_grid, dtype=np.float64)
        f = np.asarray(cdf_grid, dtype=np.float64)
        if x.ndim != 1 or x.shape != f.shape or x.size < 2:
            raise ValueError("CDF grid must be two matching 1-d arrays")
        if not (np.diff(x) > 0).all() or not (np.diff(f) > 0).all():
            raise ValueError("CDF grid must be strictly increasing in both coordinates")
        if x[0] > -5.0 or x[-1] < 4.0 or np.diff(x).max() > 0.05 + 1e-12:
            raise ValueError("CDF grid must cover [-5, 4] at step <= 0.05")
        self.x_grid = x
        self.cdf_grid = f
        self.quantile_pairs = tuple(quantile_pairs)
        self._cdf = PchipInterpolator(x, f, extrapolate=False)
        self._quant = PchipInterpolator(f, x, extrapolate=False)

    def cdf(self, x):
        """CDF values, clamped (with a warning) outside the grid."""
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.x_grid[0], self.x_grid[-1]
        clipped = np.clip(x, lo, hi)
        n_out = int((x < lo).sum() + (x > hi).sum())
        if n_out:
            warnings.warn(
                f"{n_out} value(s) outside the tabulated TW1 range "
                f"[{lo}, {hi}] were clamped to the grid edge",
                stacklevel=2,
            )
        out = self._cdf(clipped)
        return float(out) if out.ndim == 0 else out

    def upper_quantile(self, alpha: float) -> float:
        """t(alpha) with P(TW1 >= t) = alpha; exact at the tabulated alphas."""
        if not ALPHA_MIN <= alpha <= ALPHA_MAX:
            raise AlphaOutOfRangeError(alpha, ALPHA_MIN, ALPHA_MAX)
        for a_tab, t_tab in self.quantile_pairs:
            if abs(alpha - a_tab) <= 1e-12:
                return t_tab
        return float(self._quant(1.0 - alpha))


_cached_table: Optional[TWTable] = None
_cached_path: Optional[str] = None


def load_tw_table(path=None) -> TWTable:
    """Load a TW1 CDF table from a two-column CSV ('#' comments allowed)."""
    src = Path(path) if path is not None else Path(os.environ.get(_DATA_ENV, _DATA_DEFAULT))
    xs: List[float] = []
    fs: List[float] = []
    with open(src, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b = line.split(",")
            if a == "x":  # header row
                continue
            xs.append(float(a))
            fs.append(float(b))
    return TWTable(np.array(xs), np.array(fs))


def default_table() -> TWTable:
    """The packaged table, honoring the BICLUST_TW_TABLE override; cached."""
    global _cached_table, _cached_path
    current = os.environ.get(_DATA_ENV, str(_DATA_DEFAULT))
    if _cached_table is None or _cached_path != current:
        _cached_table = load_tw_table(current)
        _cached_path = current
    return _cached_table


def tw1_quantile(alpha: float, table: Optional[TWTable] = None) -> float:
    return (table or default_table()).upper_quantile(alpha)


def tw1_cdf(x, table: Optional[TWTable] = None):
    return (table or default_table()).cdf(x)


@dataclass(frozen=True)
class TestOutcome:
    """One test of the hypothesis K = K0 against K > K0."""

    k0: int
    t: float
    lambda1: float
    alpha: float
    threshold: float
    reject: bool
    assignment: BiclusterAssignment

    def to_dict(self) -> dict:
        return {
            "k0": self.k0,
            "T": self.t,
            "lambda1": self.lambda1,
            "alpha": self.alpha,
            "threshold": self.threshold,
            "reject": self.reject,
        }


def run_test(
    a: ObservedMatrix,
    g_hat: BiclusterAssignment,
    alpha: float,
    std_floor: Optional[float] = None,
    eig_tol: float = 1e-10,
    eig_max_iter: Optional[int] = None,
) -> TestOutcome:
    """Standardize by ``g_hat``, compute T, and compare with t(alpha).

    Rejects (returns ``reject=True``) when T >= t(alpha), i.e. when the
    residual spectrum is incompatible with a correct K0-group fit.
    """
    threshold = tw1_quantile(alpha)
    z = standardize(a, g_hat, std_floor=std_floor)
    eig = max_eigenvalue(z, tol=eig_tol, max_iter=eig_max_iter)
    t = test_statistic(eig.lambda1, tw_scaling(a.n, a.p))
    return TestOutcome(
        k0=g_hat.k,
        t=t,
        lambda1=eig.lambda1,
        alpha=alpha,
        threshold=threshold,
        reject=t >= threshold,
        assignment=g_hat,
    )


@dataclass(frozen=True)
class SelectStep:
    """One hypothesis in the sequential scan, with localizer context."""

    outcome: TestOutcome
    profile_likelihood: float
    seed: int

    def to_dict(self) -> dict:
        d = self.outcome.to_dict()
        d["profile_likelihood"] = self.profile_likelihood
        d["seed"] = self.seed
        return d


@dataclass(frozen=True)
class SelectKResult:
    k_hat: int
    trace: tuple

    def to_dict(self) -> dict:
        return {
            "k_hat": self.k_hat,
            "accepted": True,
            "trace": [s.to_dict() for s in self.trace],
        }


def select_k(
    a: ObservedMatrix,
    alpha: float,
    k_max: int,
    localizer: Optional[LocalizerConfig] = None,
    std_floor: Optional[float] = None,
) -> SelectKResult:
    """Sequentially test K0 = 0, 1, ... and return the first accepted K0.

    K0 = 0 is the all-background model and needs no localization; each
    K0 >= 1 is localized by best-of-restarts annealing before testing.
    Raises :class:`NotAcceptedError` (carrying the full trace) when every
    K0 <= k_max is rejected.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if localizer is None:
        localizer = LocalizerConfig()
    f = entropy_fn(localizer.entropy)
    trace: List[SelectStep] = []
    for k0 in range(k_max + 1):
        if k0 == 0:
            g_hat = all_background(a.n, a.p)
            pl = profile_likelihood(a, g_hat, f)
        else:
            best = best_localization(a, k0, localizer)
            g_hat = best.assignment
            pl = best.objective
        outcome = run_test(a, g_hat, alpha, std_floor=std_floor)
        trace.append(SelectStep(outcome=outcome, profile_likelihood=pl, seed=localizer.seed))
        if not outcome.reject:
            return SelectKResult(k_hat=k0, trace=tuple(trace))
    raise NotAcceptedError(tuple(trace))
