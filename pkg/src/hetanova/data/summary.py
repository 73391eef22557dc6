"""
Two-way layouts, raw observations and per-cell summaries
"""

import hashlib
import logging
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from hetanova.utils.errors import (
    CellCountMismatch,
    DegenerateCell,
    DegenerateCellWarning,
    DimensionMismatch,
    EmptyCell,
    InputError,
    InvalidLayout,
)

# Configure logging
logger = logging.getLogger("hetanova")


def _frozen(array, dtype=float) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _shape(array) -> str:
    return "x".join(str(d) for d in np.shape(array))


@dataclass(frozen=True, eq=False)
class Layout:
    """Factor dimensions and the a x b grid of cell sizes."""

    a: int
    b: int
    n: np.ndarray

    def __post_init__(self):
        if self.a < 2 or self.b < 2:
            raise InvalidLayout(f"need a >= 2 and b >= 2, got a={self.a}, b={self.b}")
        n = np.asarray(self.n)
        if n.shape != (self.a, self.b):
            raise DimensionMismatch(
                f"dimension mismatch: layout is {self.a}x{self.b}, n is {_shape(n)}"
            )
        if not np.all(np.isfinite(n)) or np.any(n != np.round(n)):
            raise InvalidLayout("cell sizes must be integers")
        small = np.argwhere(n < 2)
        if small.size:
            i, j = small[0]
            raise EmptyCell(
                f"cell ({i + 1}, {j + 1}) has {int(n[i, j])} observations, need at least 2"
            )
        object.__setattr__(self, "n", _frozen(n, dtype=np.int64))

    @classmethod
    def from_counts(cls, n) -> "Layout":
        n = np.asarray(n)
        if n.ndim != 2:
            raise DimensionMismatch(f"cell sizes must be a matrix, got shape {_shape(n)}")
        return cls(a=n.shape[0], b=n.shape[1], n=n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def N(self) -> int:
        return int(self.n.sum())

    def transpose(self) -> "Layout":
        return Layout(a=self.b, b=self.a, n=self.n.T)

    def __eq__(self, other):
        if not isinstance(other, Layout):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.n, other.n)


@dataclass(frozen=True, eq=False)
class RawDataset:
    """Long-format observations: 1-based factor levels and responses."""

    level_a: np.ndarray
    level_b: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        level_a = np.asarray(self.level_a)
        level_b = np.asarray(self.level_b)
        y = np.asarray(self.y, dtype=float)
        if not (level_a.shape == level_b.shape == y.shape) or y.ndim != 1:
            raise DimensionMismatch("level_a, level_b and y must be vectors of equal length")
        if not np.all(np.isfinite(y)):
            raise InputError("responses must be finite numbers")
        object.__setattr__(self, "level_a", _frozen(level_a, dtype=np.int64))
        object.__setattr__(self, "level_b", _frozen(level_b, dtype=np.int64))
        object.__setattr__(self, "y", _frozen(y))

    @classmethod
    def from_records(cls, records) -> "RawDataset":
        """Build from an iterable of (level_a, level_b, y) triples."""
        records = list(records)
        if not records:
            return cls(np.zeros(0, int), np.zeros(0, int), np.zeros(0))
        level_a, level_b, y = zip(*records)
        return cls(np.array(level_a), np.array(level_b), np.array(y, dtype=float))

    def __len__(self):
        return int(self.y.size)

    @property
    def records(self) -> list[tuple[int, int, float]]:
        return list(zip(self.level_a.tolist(), self.level_b.tolist(), self.y.tolist()))


@dataclass(frozen=True, eq=False)
class CellSummaryTable:
    """
    Per-cell sample means and unbiased variances over an a x b grid.

    This is the sufficient input for every test in the package.
    """

    layout: Layout
    mean: np.ndarray
    var: np.ndarray

    def __post_init__(self):
        for name in ("mean", "var"):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != self.layout.shape:
                raise DimensionMismatch(
                    f"dimension mismatch: {name} is {_shape(value)}, "
                    f"n is {self.layout.a}x{self.layout.b}"
                )
            if not np.all(np.isfinite(value)):
                raise InputError(f"{name} contains non-finite values")
            object.__setattr__(self, name, _frozen(value))
        negative = np.argwhere(self.var < 0)
        if negative.size:
            i, j = negative[0]
            raise InputError(f"cell ({i + 1}, {j + 1}) has a negative variance")

    @classmethod
    def from_arrays(cls, mean, n, var) -> "CellSummaryTable":
        """Validated constructor from three a x b matrices."""
        mean, n, var = np.asarray(mean, float), np.asarray(n), np.asarray(var, float)
        if n.ndim != 2:
            raise DimensionMismatch(f"n must be a matrix, got shape {_shape(n)}")
        for name, value in (("mean", mean), ("var", var)):
            if value.shape != n.shape:
                raise DimensionMismatch(
                    f"dimension mismatch: {name} is {_shape(value)}, n is {_shape(n)}"
                )
        return cls(layout=Layout.from_counts(n), mean=mean, var=var)

    @property
    def a(self) -> int:
        return self.layout.a

    @property
    def b(self) -> int:
        return self.layout.b

    @property
    def n(self) -> np.ndarray:
        return self.layout.n

    @property
    def degenerate_cells(self) -> list[tuple[int, int]]:
        """1-based (i, j) of cells whose sample variance is zero."""
        return [(int(i) + 1, int(j) + 1) for i, j in np.argwhere(self.var <= 0)]

    def require_nondegenerate(self) -> None:
        cells = self.degenerate_cells
        if cells:
            listed = ", ".join(f"({i}, {j})" for i, j in cells)
            raise DegenerateCell(f"zero sample variance in cell(s) {listed}")

    def transpose(self) -> "CellSummaryTable":
        """Swap the roles of factors A and B."""
        return CellSummaryTable(
            layout=self.layout.transpose(), mean=self.mean.T, var=self.var.T
        )

    def marginals(self) -> tuple[np.ndarray, np.ndarray, float]:
        return marginals(self)

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        for array in (self.n, self.mean, self.var):
            digest.update(np.ascontiguousarray(array).tobytes())
            digest.update(str(array.shape).encode())
        return digest.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, CellSummaryTable):
            return NotImplemented
        return (
            self.layout == other.layout
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.var, other.var)
        )


def cell_moments(y: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Two-pass cell means and unbiased variances.

    Args:
        y: observations sorted by cell along the last axis; leading axes are
            independent batches (e.g. bootstrap replicates)
        counts: flat per-cell sizes in the same cell order

    Returns:
        tuple of (means, variances), each of shape y.shape[:-1] + (cells,)
    """
    counts = np.asarray(counts, dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    means = np.add.reduceat(y, offsets, axis=-1) / counts
    deviations = y - np.repeat(means, counts, axis=-1)
    variances = np.add.reduceat(deviations**2, offsets, axis=-1) / (counts - 1)
    return means, variances


def summarize(raw: RawDataset, layout: Layout | None = None) -> CellSummaryTable:
    """
    Reduce raw observations to per-cell means and unbiased variances.

    Args:
        raw: long-format observations with 1-based levels
        layout: expected layout; inferred from the largest levels when omitted

    Returns:
        CellSummaryTable: the sufficient summaries
    """
    if layout is None:
        if len(raw) == 0:
            raise EmptyCell("no observations")
        a, b = int(raw.level_a.max()), int(raw.level_b.max())
    else:
        a, b = layout.shape

    bad = (raw.level_a < 1) | (raw.level_a > a) | (raw.level_b < 1) | (raw.level_b > b)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise DimensionMismatch(
            f"record {k + 1} has levels ({raw.level_a[k]}, {raw.level_b[k]}) "
            f"outside the {a}x{b} layout"
        )

    cell = (raw.level_a - 1) * b + (raw.level_b - 1)
    counts = np.bincount(cell, minlength=a * b)
    sparse = np.flatnonzero(counts < 2)
    if sparse.size:
        i, j = divmod(int(sparse[0]), b)
        raise EmptyCell(
            f"cell ({i + 1}, {j + 1}) has {counts[sparse[0]]} observations, need at least 2"
        )
    if layout is not None and not np.array_equal(counts.reshape(a, b), layout.n):
        k = int(np.flatnonzero(counts != layout.n.ravel())[0])
        i, j = divmod(k, b)
        raise CellCountMismatch(
            f"cell ({i + 1}, {j + 1}) has {counts[k]} records, layout expects {layout.n[i, j]}"
        )

    order = np.argsort(cell, kind="stable")
    means, variances = cell_moments(raw.y[order], counts)
    summary = CellSummaryTable(
        layout=layout or Layout(a=a, b=b, n=counts.reshape(a, b)),
        mean=means.reshape(a, b),
        var=variances.reshape(a, b),
    )

    degenerate = summary.degenerate_cells
    if degenerate:
        listed = ", ".join(f"({i}, {j})" for i, j in degenerate)
        logger.warning(f"Zero sample variance in cell(s) {listed}")
        warnings.warn(
            f"zero sample variance in cell(s) {listed}", DegenerateCellWarning, stacklevel=2
        )
    return summary


def marginals(summary: CellSummaryTable) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Unweighted marginal means of the cell means.

    Returns:
        tuple: (row means Y_i., column means Y_.j, grand mean Y)
    """
    mean = summary.mean
    return mean.mean(axis=1), mean.mean(axis=0), float(mean.mean())
