"""Exception hierarchy used across the package.

Every error carries enough structured state (group index, offending entry,
diagnostics) for the CLI to emit a machine-readable error record.
"""

from __future__ import annotations


class BiclustError(Exception):
    """Base class for all library errors."""

    def payload(self) -> dict:
        """Structured representation for error JSON output."""
        return {"type": type(self).__name__, "message": str(self)}


class EmptyGroupError(BiclustError):
    """A group referenced by an assignment contains no entries."""

    def __init__(self, group: int):
        super().__init__(f"group {group} has no entries")
        self.group = group


class DegenerateGroupError(BiclustError):
    """A group is (numerically) constant, so it cannot be standardized.

    Callers must merge the group, reject the fit, or pass an explicit
    standard-deviation floor.
    """

    def __init__(self, group: int, std: float):
        super().__init__(
            f"group {group} has std {std:.3e} < 1e-12; cannot standardize a "
            "constant group (use a std floor to override)"
        )
        self.group = group
        self.std = std


class NonPositiveStdError(BiclustError):
    def __init__(self, group: int, std: float):
        super().__init__(f"population std for group {group} must be > 0, got {std!r}")
        self.group = group
        self.std = std


class OverlapError(BiclustError):
    """Two rectangles claim the same matrix entry."""

    def __init__(self, entry: tuple, group_a: int, group_b: int):
        super().__init__(
            f"entry {entry} assigned to both group {group_a} and group {group_b}"
        )
        self.entry = entry
        self.group_a = group_a
        self.group_b = group_b


class EmptyBackgroundError(BiclustError):
    def __init__(self):
        super().__init__("rectangles cover the whole matrix; background must be non-empty")


class EmptyRectangleError(BiclustError):
    def __init__(self, group: int):
        super().__init__(f"rectangle for group {group} is empty")
        self.group = group


class NoConvergenceError(BiclustError):
    """Eigenvalue iteration hit its iteration cap before reaching tolerance."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"eigenvalue iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e}); retry with a different start seed or a "
            "larger max_iter"
        )
        self.iterations = iterations
        self.residual = residual


class AlphaOutOfRangeError(BiclustError):
    def __init__(self, alpha: float, lo: float, hi: float):
        super().__init__(f"alpha {alpha!r} outside tabulated range [{lo}, {hi}]")
        self.alpha = alpha


class NotAcceptedError(BiclustError):
    """Sequential selection exhausted k_max without accepting any hypothesis."""

    def __init__(self, trace):
        super().__init__(
            f"no hypothesis accepted for K0 = 0..{len(trace) - 1}; "
            "increase k_max or alpha"
        )
        self.trace = trace


class LayoutInfeasibleError(BiclustError):
    def __init__(self, k: int, n: int, p: int):
        super().__init__(
            f"synthetic layout with K={k} does not fit a {n}x{p} matrix"
        )
        self.k = k
        self.n = n
        self.p = p


class LTooLargeError(BiclustError):
    def __init__(self, requested: int, available: int):
        super().__init__(
            f"requested {requested} clusters but only {available} vectors"
        )
        self.requested = requested
        self.available = available


class InfeasibleInitError(BiclustError):
    def __init__(self, k0: int, cells: int):
        super().__init__(
            f"cannot place {k0} disjoint seed entries plus background in "
            f"{cells} cells"
        )
        self.k0 = k0
        self.cells = cells


class EmptyEnsembleError(BiclustError):
    def __init__(self):
        super().__init__("ensemble contains no successful trials")
