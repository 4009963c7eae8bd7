"""Submatrix localization by simulated annealing over the profile likelihood.

The objective is the generalized profile likelihood

    F(g) = sum_k p_k * f(mean of A over group k),

where p_k is the fraction of entries in group k and f is the relative-entropy
function of the assumed exponential family (quadratic for Gaussian data,
binary or Poisson entropy otherwise).

Two localizers are provided.  The naive one anneals directly over entry-level
assignments: a move adds or removes one whole row (or column) of one
bicluster's rectangle, subject to guards that keep every bicluster at least
1x1 and the background non-empty.  The compressed one first reduces the
matrix to cell means and counts over Ward row/column clusters, anneals in
cell space with an exactly equivalent objective, and expands the result back
to entry level.  Both share one annealing engine: the naive case is the
compressed case under the identity clustering.

A move proposal costs O(L1 * L2) in cell space (cell grids are tiny: the
recommended cluster counts are min(2^K0, n) by min(2^K0, p)), and the
accepted-move bookkeeping is incremental, so full anneals run in milliseconds
per thousand steps.
"""

from __future__ import annotations

import math
from bisect import insort
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .errors import EmptyGroupError, InfeasibleInitError, LTooLargeError
from .model import BiclusterAssignment, ObservedMatrix

#: clamp inside the log of the Bernoulli / Poisson entropy functions
_LOG_CLAMP = 1e-5

#: cap for cooling schedules whose threshold is effectively unreachable
DEFAULT_MAX_STEPS = 200_000


# ---------------------------------------------------------------------------
# entropy functions


@dataclass(frozen=True)
class EntropyFn:
    """Relative-entropy function f applied to group means in the objective."""

    kind: str
    eval: Callable[[float], float]


def _f_gaussian(x: float) -> float:
    return 0.5 * x * x


def _f_bernoulli(x: float) -> float:
    return x * math.log(max(x, _LOG_CLAMP)) + (1.0 - x) * math.log(max(1.0 - x, _LOG_CLAMP))


def _f_poisson(x: float) -> float:
    return x * math.log(max(x, _LOG_CLAMP)) - x


_ENTROPIES = {
    "gaussian": _f_gaussian,
    "bernoulli": _f_bernoulli,
    "poisson": _f_poisson,
}


def entropy_fn(kind: str) -> EntropyFn:
    """Named entropy function: ``gaussian``, ``bernoulli``, or ``poisson``."""
    try:
        return EntropyFn(kind, _ENTROPIES[kind])
    except KeyError:
        raise ValueError(
            f"unknown entropy {kind!r}; expected one of {sorted(_ENTROPIES)}"
        ) from None


def custom_entropy(fn: Callable[[float], float]) -> EntropyFn:
    return EntropyFn("custom", fn)


# ---------------------------------------------------------------------------
# cooling schedules


@dataclass(frozen=True)
class CoolingSchedule:
    """Temperature sequence for the anneal.

    ``geometric``    T_t = rate**t, stops when T_t < threshold.
    ``logarithmic``  T_t = scale / log(t + 2); its stopping time is usually
                     astronomical, so ``max_steps`` caps the run.
    ``greedy``       T_t = 0 for a fixed number of steps (uphill-only moves).
    """

    kind: str
    rate: Optional[float] = None
    scale: Optional[float] = None
    threshold: float = 1e-5
    steps: Optional[int] = None
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.kind == "geometric":
            if self.rate is None or not 0.0 < self.rate < 1.0:
                raise ValueError("geometric schedule needs rate in (0, 1)")
            if self.threshold <= 0.0:
                raise ValueError("threshold must be positive")
        elif self.kind == "logarithmic":
            if self.scale is None or self.scale <= 0.0:
                raise ValueError("logarithmic schedule needs a positive scale")
            if self.threshold <= 0.0:
                raise ValueError("threshold must be positive")
        elif self.kind == "greedy":
            if self.steps is None or self.steps < 0:
                raise ValueError("greedy schedule needs steps >= 0")
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    def n_steps(self) -> int:
        if self.kind == "geometric":
            if self.threshold > 1.0:
                return 0
            n = int(math.floor(math.log(self.threshold) / math.log(self.rate))) + 1
            return min(max(n, 0), self.max_steps)
        if self.kind == "logarithmic":
            arg = self.scale / self.threshold
            if arg > 700.0:  # exp would overflow; threshold unreachable
                return self.max_steps
            n = int(math.ceil(math.exp(arg))) - 2
            return min(max(n, 0), self.max_steps)
        return min(self.steps, self.max_steps)

    def temperatures(self) -> np.ndarray:
        n = self.n_steps()
        if self.kind == "geometric":
            return self.rate ** np.arange(n, dtype=np.float64)
        if self.kind == "logarithmic":
            return self.scale / np.log(np.arange(n, dtype=np.float64) + 2.0)
        return np.zeros(n, dtype=np.float64)


def geometric(rate: float = 0.999, threshold: float = 1e-5) -> CoolingSchedule:
    return CoolingSchedule(kind="geometric", rate=rate, threshold=threshold)


def logarithmic(scale: float, threshold: float = 1e-5) -> CoolingSchedule:
    return CoolingSchedule(kind="logarithmic", scale=scale, threshold=threshold)


def greedy(steps: int) -> CoolingSchedule:
    return CoolingSchedule(kind="greedy", steps=steps)


def practical_schedule(k0: int) -> CoolingSchedule:
    """Slow-cooling preset for real data: rate 0.9999, threshold 10^(-K0/2.5 - 2)."""
    return CoolingSchedule(kind="geometric", rate=0.9999, threshold=10.0 ** (-k0 / 2.5 - 2.0))


# ---------------------------------------------------------------------------
# profile likelihood


def profile_likelihood(a: ObservedMatrix, g: BiclusterAssignment, f: EntropyFn) -> float:
    """Generalized profile likelihood of an entry-level assignment."""
    if a.values.shape != g.group_of.shape:
        raise ValueError("matrix and assignment shapes differ")
    k1 = g.k + 1
    gf = g.group_of.ravel()
    counts = np.bincount(gf, minlength=k1)
    for grp in range(k1):
        if counts[grp] == 0:
            raise EmptyGroupError(grp)
    sums = np.bincount(gf, weights=a.values.ravel(), minlength=k1)
    total = a.values.size
    return float(sum((counts[k] / total) * f.eval(sums[k] / counts[k]) for k in range(k1)))


# ---------------------------------------------------------------------------
# compression


def ward_cluster(vectors: Sequence, n_clusters: int) -> np.ndarray:
    """Ward agglomerative clustering cut at ``n_clusters`` groups.

    Returns integer labels relabeled by first occurrence, so cluster 0 always
    contains the first vector.  ``n_clusters == len(vectors)`` short-circuits
    to singleton (identity) labels.
    """
    x = np.asarray(vectors, dtype=np.float64)
    n = x.shape[0]
    if n_clusters > n:
        raise LTooLargeError(n_clusters, n)
    if n_clusters < 1:
        raise ValueError("n_clusters must be >= 1")
    if n_clusters == n:
        return np.arange(n, dtype=np.int64)
    if n_clusters == 1:
        return np.zeros(n, dtype=np.int64)
    link = linkage(x, method="ward")
    raw = fcluster(link, t=n_clusters, criterion="maxclust")
    remap: dict = {}
    labels = np.empty(n, dtype=np.int64)
    for i, lab in enumerate(raw):
        labels[i] = remap.setdefault(int(lab), len(remap))
    return labels


@dataclass(frozen=True)
class CompressedMatrix:
    """Cell means and entry counts over a row/column clustering of A."""

    a_comp: np.ndarray
    m_counts: np.ndarray
    row_cluster_of: np.ndarray
    col_cluster_of: np.ndarray

    def __post_init__(self):
        if self.a_comp.shape != self.m_counts.shape:
            raise ValueError("a_comp and m_counts shapes differ")
        if (self.m_counts < 1).any():
            raise ValueError("every compression cell must be non-empty")
        expect = self.row_cluster_of.size * self.col_cluster_of.size
        if int(self.m_counts.sum()) != expect:
            raise ValueError("cell counts must sum to n * p")

    @property
    def shape(self) -> tuple:
        return self.a_comp.shape


def compress_labels(
    a: ObservedMatrix, row_labels: np.ndarray, col_labels: np.ndarray
) -> CompressedMatrix:
    """Cell means and counts for explicit row/column cluster labels."""
    row_lab = np.asarray(row_labels, dtype=np.int64)
    col_lab = np.asarray(col_labels, dtype=np.int64)
    l1e = int(row_lab.max()) + 1
    l2e = int(col_lab.max()) + 1
    idx = (row_lab[:, None] * l2e + col_lab[None, :]).ravel()
    counts = np.bincount(idx, minlength=l1e * l2e).reshape(l1e, l2e)
    sums = np.bincount(idx, weights=a.values.ravel(), minlength=l1e * l2e).reshape(l1e, l2e)
    if (counts == 0).any():
        raise ValueError("cluster labels must be contiguous 0..L-1 with no gaps")
    return CompressedMatrix(
        a_comp=sums / counts,
        m_counts=counts.astype(np.int64),
        row_cluster_of=row_lab,
        col_cluster_of=col_lab,
    )


def compress(a: ObservedMatrix, l1: int, l2: int) -> CompressedMatrix:
    """Ward-cluster rows and columns of A and compute cell means and counts.

    ``fcluster`` can occasionally return fewer clusters than requested on
    degenerate (e.g. constant) inputs; the actual cell grid then shrinks
    accordingly.  Cells are non-empty by construction.
    """
    return compress_labels(a, ward_cluster(a.values, l1), ward_cluster(a.values.T, l2))


@dataclass(frozen=True)
class CompressedAssignment:
    """Group indices over compression cells; same invariants as entry level."""

    group_of_cell: np.ndarray
    k: int

    def __post_init__(self):
        # identical disjointness/rectangle/background rules, in cell space
        checked = BiclusterAssignment(self.group_of_cell, self.k)
        object.__setattr__(self, "group_of_cell", checked.group_of)


def profile_likelihood_compressed(
    cm: CompressedMatrix, gc: CompressedAssignment, f: EntropyFn
) -> float:
    """Profile likelihood evaluated exactly from cell means and counts."""
    k1 = gc.k + 1
    gf = gc.group_of_cell.ravel()
    w = np.bincount(gf, weights=cm.m_counts.ravel().astype(np.float64), minlength=k1)
    for grp in range(k1):
        if w[grp] == 0:
            raise EmptyGroupError(grp)
    wa = np.bincount(gf, weights=(cm.m_counts * cm.a_comp).ravel(), minlength=k1)
    total = float(cm.m_counts.sum())
    return float(sum((w[k] / total) * f.eval(wa[k] / w[k]) for k in range(k1)))


def expand_assignment(cm: CompressedMatrix, gc: CompressedAssignment) -> BiclusterAssignment:
    """Map a cell-level assignment back to entry level through the cluster maps."""
    grid = gc.group_of_cell[np.ix_(cm.row_cluster_of, cm.col_cluster_of)]
    return BiclusterAssignment(grid, gc.k)


# ---------------------------------------------------------------------------
# annealing engine


@dataclass
class SAResult:
    """Outcome of one anneal (or the best of several restarts)."""

    assignment: BiclusterAssignment
    cell_assignment: CompressedAssignment
    objective: float
    accepted_moves: int
    steps: int
    noops: int
    restart_index: int = 0
    objective_trace: Optional[List[float]] = None


def _line_add_candidates(grid: list, oth: list, nax: int) -> list:
    """Indices of lines whose cells over ``oth`` are all background.

    ``grid`` is the cell-group table as nested lists oriented so that
    ``grid[h][j]`` addresses line h at cross-index j; a line already in the
    bicluster fails the scan because its own cells carry the group index.
    """
    cand = []
    for h in range(nax):
        line = grid[h]
        for j in oth:
            if line[j]:
                break
        else:
            cand.append(h)
    return cand


def _anneal_cells(
    weights: np.ndarray,
    wsums: np.ndarray,
    k0: int,
    f: EntropyFn,
    temps: np.ndarray,
    rng: np.random.Generator,
    validate_every: int = 0,
    record_objective: bool = False,
    move_log: Optional[list] = None,
):
    """Anneal a cell-level assignment; returns (grid, F, accepted, steps, noops, trace).

    ``weights`` holds per-cell entry counts and ``wsums`` per-cell value sums,
    so the objective equals the entry-level profile likelihood exactly.  Every
    step consumes exactly three pregenerated uniform draws (move family, move
    index, acceptance), which makes runs bit-reproducible from the seed
    regardless of which branches fire.
    """
    l1, l2 = weights.shape
    ncells = l1 * l2
    if k0 < 1:
        raise ValueError("annealing needs k0 >= 1")
    if k0 >= ncells:
        raise InfeasibleInitError(k0, ncells)
    feval = f.eval
    total_w = float(weights.sum())

    # nested lists: fastest scalar access in the hot loop
    w_r = weights.astype(np.float64).tolist()
    w_c = weights.T.astype(np.float64).tolist()
    wa_r = wsums.astype(np.float64).tolist()
    wa_c = wsums.T.astype(np.float64).tolist()
    grp_r = [[0] * l2 for _ in range(l1)]
    grp_c = [[0] * l1 for _ in range(l2)]

    rows: list = [None] + [[] for _ in range(k0)]
    cols: list = [None] + [[] for _ in range(k0)]
    gw = [0.0] * (k0 + 1)
    gwa = [0.0] * (k0 + 1)
    gw[0] = total_w
    gwa[0] = float(wsums.sum())

    # initial state: K0 distinct uniformly random single cells
    for k, cell in enumerate(rng.choice(ncells, size=k0, replace=False), start=1):
        h, j = divmod(int(cell), l2)
        grp_r[h][j] = k
        grp_c[j][h] = k
        rows[k] = [h]
        cols[k] = [j]
        w = w_r[h][j]
        s = wa_r[h][j]
        gw[k] = w
        gwa[k] = s
        gw[0] -= w
        gwa[0] -= s

    terms = [gw[k] * feval(gwa[k] / gw[k]) for k in range(k0 + 1)]
    fval = sum(terms) / total_w

    def recompute():
        tw = [0.0] * (k0 + 1)
        ts = [0.0] * (k0 + 1)
        for h in range(l1):
            gr, wr, sr = grp_r[h], w_r[h], wa_r[h]
            for j in range(l2):
                tw[gr[j]] += wr[j]
                ts[gr[j]] += sr[j]
        return tw, ts

    def check_state(where: str):
        tw, ts = recompute()
        for k in range(k0 + 1):
            if abs(tw[k] - gw[k]) > 1e-6 or abs(ts[k] - gwa[k]) > 1e-6 * max(1.0, abs(ts[k])):
                raise RuntimeError(f"incremental state drifted at {where} (group {k})")
        for k in range(1, k0 + 1):
            for h in rows[k]:
                for j in cols[k]:
                    if grp_r[h][j] != k:
                        raise RuntimeError(f"group {k} is not a rectangle at {where}")

    nsteps = temps.shape[0]
    temps_l = temps.tolist()
    accepted = 0
    noops = 0
    trace: Optional[List[float]] = [] if record_objective else None
    exp_ = math.exp
    log_moves = move_log is not None

    chunk = 1 << 14
    t = 0
    while t < nsteps:
        m = min(chunk, nsteps - t)
        kk_arr = rng.integers(0, 2 * k0, size=m).tolist()
        mu_arr = rng.random(m).tolist()
        au_arr = rng.random(m).tolist()
        for off in range(m):
            temp = temps_l[t + off]
            kk = kk_arr[off]
            if kk < k0:  # row mode on bicluster kk+1
                k = kk + 1
                grid, grid_t = grp_r, grp_c
                wm, wam = w_r, wa_r
                own, oth = rows[k], cols[k]
                nax = l1
            else:  # column mode: same operations with axes swapped
                k = kk - k0 + 1
                grid, grid_t = grp_c, grp_r
                wm, wam = w_c, wa_c
                own, oth = cols[k], rows[k]
                nax = l2

            # add list: lines entirely background across all biclusters over oth
            cand = _line_add_candidates(grid, oth, nax)
            na = len(cand)
            can_rem = len(own) >= 2
            if na >= 2:
                can_add = True
            elif na == 1:
                wline = wm[cand[0]]
                aw = 0.0
                for j in oth:
                    aw += wline[j]
                # adding must not empty the background (strict set inequality)
                can_add = gw[0] >= aw + 0.5
            else:
                can_add = False

            if can_rem and can_add:
                i = int(mu_arr[off] * (len(own) + na))
                if i < len(own):
                    h, adding = own[i], False
                else:
                    h, adding = cand[i - len(own)], True
            elif can_rem:
                h, adding = own[int(mu_arr[off] * len(own))], False
            elif can_add:
                h, adding = cand[int(mu_arr[off] * na)], True
            else:
                noops += 1
                if trace is not None:
                    trace.append(fval)
                continue

            wline = wm[h]
            sline = wam[h]
            rw = 0.0
            rwa = 0.0
            for j in oth:
                rw += wline[j]
                rwa += sline[j]
            if adding:
                nkw, nkwa = gw[k] + rw, gwa[k] + rwa
                nbw, nbwa = gw[0] - rw, gwa[0] - rwa
            else:
                nkw, nkwa = gw[k] - rw, gwa[k] - rwa
                nbw, nbwa = gw[0] + rw, gwa[0] + rwa
            new_k = nkw * feval(nkwa / nkw)
            new_b = nbw * feval(nbwa / nbw)
            df = (new_k + new_b - terms[k] - terms[0]) / total_w

            if df > 0.0:
                ok = True
            elif temp > 0.0:
                ok = au_arr[off] < exp_(df / temp)
            else:
                ok = df == 0.0
            if log_moves:
                move_log.append((df, temp, ok))

            if ok:
                val = k if adding else 0
                for j in oth:
                    grid[h][j] = val
                    grid_t[j][h] = val
                if adding:
                    insort(own, h)
                else:
                    own.remove(h)
                gw[k], gwa[k] = nkw, nkwa
                gw[0], gwa[0] = nbw, nbwa
                terms[k] = new_k
                terms[0] = new_b
                fval += df
                accepted += 1
            if trace is not None:
                trace.append(fval)
            if validate_every and (t + off + 1) % validate_every == 0:
                check_state(f"step {t + off}")
        t += m

    check_state("termination")
    exact = sum(gw[k] * feval(gwa[k] / gw[k]) for k in range(k0 + 1)) / total_w
    if abs(exact - fval) > 1e-8 * max(1.0, abs(exact)):
        raise RuntimeError("incremental objective drifted beyond tolerance")
    grid = np.array(grp_r, dtype=np.int32)
    return grid, exact, accepted, nsteps, noops, trace


def _run_one(
    cm: CompressedMatrix,
    k0: int,
    f: EntropyFn,
    schedule: CoolingSchedule,
    seed_seq,
    validate_every: int = 0,
    record_objective: bool = False,
    move_log: Optional[list] = None,
) -> SAResult:
    rng = np.random.default_rng(seed_seq)
    grid, fval, accepted, steps, noops, trace = _anneal_cells(
        cm.m_counts,
        cm.m_counts * cm.a_comp,
        k0,
        f,
        schedule.temperatures(),
        rng,
        validate_every=validate_every,
        record_objective=record_objective,
        move_log=move_log,
    )
    cell_assignment = CompressedAssignment(grid, k0)
    return SAResult(
        assignment=expand_assignment(cm, cell_assignment),
        cell_assignment=cell_assignment,
        objective=fval,
        accepted_moves=accepted,
        steps=steps,
        noops=noops,
        objective_trace=trace,
    )


def _identity_compression(a: ObservedMatrix) -> CompressedMatrix:
    return CompressedMatrix(
        a_comp=a.values.copy(),
        m_counts=np.ones(a.values.shape, dtype=np.int64),
        row_cluster_of=np.arange(a.n, dtype=np.int64),
        col_cluster_of=np.arange(a.p, dtype=np.int64),
    )


def sa_localize(
    a: ObservedMatrix,
    k0: int,
    f: EntropyFn,
    schedule: CoolingSchedule,
    seed=0,
    validate_every: int = 0,
) -> BiclusterAssignment:
    """Naive entry-level anneal; returns the final assignment."""
    return sa_localize_result(a, k0, f, schedule, seed, validate_every).assignment


def sa_localize_result(
    a: ObservedMatrix,
    k0: int,
    f: EntropyFn,
    schedule: CoolingSchedule,
    seed=0,
    validate_every: int = 0,
    record_objective: bool = False,
    move_log: Optional[list] = None,
) -> SAResult:
    """Naive anneal with full diagnostics (objective, move counts, trace)."""
    return _run_one(
        _identity_compression(a),
        k0,
        f,
        schedule,
        _as_seedseq(seed),
        validate_every=validate_every,
        record_objective=record_objective,
        move_log=move_log,
    )


def sa_localize_compressed(
    a: ObservedMatrix,
    k0: int,
    f: EntropyFn,
    l1: Optional[int] = None,
    l2: Optional[int] = None,
    schedule: Optional[CoolingSchedule] = None,
    seed=0,
    validate_every: int = 0,
) -> BiclusterAssignment:
    """Compress, anneal in cell space, and expand back to entry level.

    ``l1`` and ``l2`` default to min(2**k0, n) and min(2**k0, p).
    """
    return sa_localize_compressed_result(
        a, k0, f, l1=l1, l2=l2, schedule=schedule, seed=seed, validate_every=validate_every
    ).assignment


def sa_localize_compressed_result(
    a: ObservedMatrix,
    k0: int,
    f: EntropyFn,
    l1: Optional[int] = None,
    l2: Optional[int] = None,
    schedule: Optional[CoolingSchedule] = None,
    seed=0,
    validate_every: int = 0,
    record_objective: bool = False,
) -> SAResult:
    if schedule is None:
        schedule = geometric()
    l1 = min(2**k0, a.n) if l1 is None else min(l1, a.n)
    l2 = min(2**k0, a.p) if l2 is None else min(l2, a.p)
    cm = compress(a, l1, l2)
    return _run_one(
        cm,
        k0,
        f,
        schedule,
        _as_seedseq(seed),
        validate_every=validate_every,
        record_objective=record_objective,
    )


def _as_seedseq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


# ---------------------------------------------------------------------------
# best-of-restarts driver


@dataclass(frozen=True)
class LocalizerConfig:
    """Settings for best-of-restarts localization.

    Restart r of hypothesis K0 draws its random stream from
    ``SeedSequence([seed, K0, r])``, so best-of-N results are reproducible
    and independent of scheduling.
    """

    entropy: str = "gaussian"
    cooling: CoolingSchedule = field(default_factory=geometric)
    restarts: int = 5
    l1: Optional[int] = None
    l2: Optional[int] = None
    seed: int = 0
    jobs: int = 1

    def to_dict(self) -> dict:
        c = self.cooling
        return {
            "entropy": self.entropy,
            "cooling": {
                "kind": c.kind,
                "rate": c.rate,
                "scale": c.scale,
                "threshold": c.threshold,
                "steps": c.steps,
                "max_steps": c.max_steps,
            },
            "restarts": self.restarts,
            "l1": self.l1,
            "l2": self.l2,
            "seed": self.seed,
            "jobs": self.jobs,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LocalizerConfig":
        cool = d.get("cooling")
        if isinstance(cool, dict):
            cool = CoolingSchedule(
                kind=cool.get("kind", "geometric"),
                rate=cool.get("rate"),
                scale=cool.get("scale"),
                threshold=cool.get("threshold", 1e-5),
                steps=cool.get("steps"),
                max_steps=cool.get("max_steps", DEFAULT_MAX_STEPS),
            )
        elif cool is None:
            cool = geometric()
        return cls(
            entropy=d.get("entropy", "gaussian"),
            cooling=cool,
            restarts=int(d.get("restarts", 5)),
            l1=d.get("l1"),
            l2=d.get("l2"),
            seed=int(d.get("seed", 0)),
            jobs=int(d.get("jobs", 1)),
        )


def _restart_worker(args) -> Tuple[int, SAResult]:
    cm, k0, entropy_kind, schedule, seed, r = args
    res = _run_one(cm, k0, entropy_fn(entropy_kind), schedule, np.random.SeedSequence([seed, k0, r]))
    return r, res


def best_localization(a: ObservedMatrix, k0: int, config: LocalizerConfig) -> SAResult:
    """Run ``config.restarts`` anneals and keep the best profile likelihood.

    Ties break toward the lowest restart index.  The Ward compression is
    computed once and shared across restarts.
    """
    if k0 < 1:
        raise ValueError("best_localization needs k0 >= 1")
    l1 = min(2**k0, a.n) if config.l1 is None else min(config.l1, a.n)
    l2 = min(2**k0, a.p) if config.l2 is None else min(config.l2, a.p)
    cm = compress(a, l1, l2)
    tasks = [(cm, k0, config.entropy, config.cooling, config.seed, r) for r in range(config.restarts)]
    results: dict = {}
    if config.jobs > 1 and config.restarts > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for r, res in pool.map(_restart_worker, tasks):
                results[r] = res
    else:
        for task in tasks:
            r, res = _restart_worker(task)
            results[r] = res
    best = None
    for r in range(config.restarts):
        res = results[r]
        if best is None or res.objective > best.objective:
            best = replace(res, restart_index=r)
    return best
