"""Synthetic observed matrices with overlapping (non-bi-disjoint) biclusters.

The layout places K biclusters on a fixed band pattern: with
K1 = (3K + 4 + K mod 2) / 2 row bands of height n1 = floor(n / K1) and
K2 = (3K + 4 - K mod 2) / 2 column bands of width p1 = floor(p / K2),
bicluster k spans two consecutive row bands and two consecutive column bands,
offset so that neighboring biclusters share rows (or columns) but never share
entries.  Leftover rows and columns stay in the background.

Entries are drawn i.i.d. per group from a Gaussian, Bernoulli, or Poisson
distribution with group parameter vectors indexed 0 (background) .. K.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import LayoutInfeasibleError
from .model import BiclusterAssignment, ObservedMatrix, assignment_from_rectangles

#: group parameter vectors used throughout the experiments, background first
DEFAULT_B = {
    "gaussian": (0.2, 0.5, 0.6, 0.7),
    "bernoulli": (0.2, 0.5, 0.6, 0.7),
    "poisson": (2.0, 5.0, 6.0, 7.0),
}
DEFAULT_S = (0.03, 0.04, 0.06, 0.07)

#: shrink center for interpolated mean vectors
DEFAULT_CENTER = {"gaussian": 0.5, "bernoulli": 0.5, "poisson": 5.0}

DISTRIBUTIONS = ("gaussian", "bernoulli", "poisson")


@dataclass(frozen=True)
class LayoutSpec:
    """Band layout of K overlapping biclusters inside an n x p matrix."""

    k: int
    n: int
    p: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("layout needs k >= 1")
        if self.n1 < 1 or self.p1 < 1:
            raise LayoutInfeasibleError(self.k, self.n, self.p)

    @property
    def k1(self) -> int:
        return (3 * self.k + 4 + self.k % 2) // 2

    @property
    def k2(self) -> int:
        return (3 * self.k + 4 - self.k % 2) // 2

    @property
    def n1(self) -> int:
        return self.n // self.k1

    @property
    def p1(self) -> int:
        return self.p // self.k2

    def rectangle(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """0-based row/column index arrays of bicluster k (1-based k)."""
        if not 1 <= k <= self.k:
            raise ValueError(f"bicluster index must lie in 1..{self.k}")
        off_r = (3 * k - 2 - k % 2) // 2
        off_c = (3 * k - 4 + k % 2) // 2
        rows = np.arange(off_r * self.n1, (off_r + 2) * self.n1)
        cols = np.arange(off_c * self.p1, (off_c + 2) * self.p1)
        return rows, cols

    def rectangles(self):
        return [self.rectangle(k) for k in range(1, self.k + 1)]


def null_layout(k: int, n: int, p: int) -> BiclusterAssignment:
    """The generating assignment for the synthetic layout."""
    spec = LayoutSpec(k, n, p)
    return assignment_from_rectangles(n, p, spec.rectangles())


@dataclass(frozen=True)
class GeneratorSpec:
    """Distribution, group parameters, layout, and seed for one matrix draw."""

    kind: str
    b: Tuple[float, ...]
    layout: LayoutSpec
    s: Optional[Tuple[float, ...]] = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.kind!r}")
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        if len(self.b) != self.layout.k + 1:
            raise ValueError(f"b must have length K+1 = {self.layout.k + 1}")
        if self.kind == "gaussian":
            if self.s is None:
                raise ValueError("gaussian generation needs std parameters s")
            object.__setattr__(self, "s", tuple(float(x) for x in self.s))
            if len(self.s) != self.layout.k + 1:
                raise ValueError(f"s must have length K+1 = {self.layout.k + 1}")
            if any(x <= 0 for x in self.s):
                raise ValueError("gaussian stds must be positive")
        else:
            if self.s is not None:
                raise ValueError(f"{self.kind} generation takes no std parameters")
            if self.kind == "bernoulli" and any(not 0 <= x <= 1 for x in self.b):
                raise ValueError("bernoulli means must lie in [0, 1]")
            if self.kind == "poisson" and any(x <= 0 for x in self.b):
                raise ValueError("poisson means must be positive")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "b": list(self.b),
            "s": list(self.s) if self.s is not None else None,
            "k": self.layout.k,
            "n": self.layout.n,
            "p": self.layout.p,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(
            kind=d["kind"],
            b=tuple(d["b"]),
            layout=LayoutSpec(int(d["k"]), int(d["n"]), int(d["p"])),
            s=tuple(d["s"]) if d.get("s") is not None else None,
            seed=int(d.get("seed", 0)),
        )


def generate(spec: GeneratorSpec, seed=None) -> Tuple[ObservedMatrix, BiclusterAssignment]:
    """Draw a matrix from ``spec``; every entry i.i.d. within its group.

    Deterministic given the seed (``spec.seed`` unless overridden).  Streams
    come from a PCG64 generator; trials parallelize by passing disjoint seeds.
    """
    layout = spec.layout
    g = null_layout(layout.k, layout.n, layout.p)
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    b = np.asarray(spec.b)
    means = b[g.group_of]
    if spec.kind == "gaussian":
        s = np.asarray(spec.s)
        values = means + s[g.group_of] * rng.standard_normal(g.shape)
    elif spec.kind == "bernoulli":
        values = (rng.random(g.shape) < means).astype(np.float64)
    else:
        values = rng.poisson(means).astype(np.float64)
    return ObservedMatrix(values), g


def interpolated_means(b: Sequence[float], t: int, center: float) -> Tuple[float, ...]:
    """Shrink the group means toward ``center`` by the factor (1 - t/10)."""
    shrink = 1.0 - t / 10.0
    return tuple(shrink * (x - center) + center for x in b)
