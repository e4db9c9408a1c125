"""Instances, Manhattan distance, sorted columns and interval systems.

Rows, columns and ranks are 0-based throughout.  A basic interval over the
sorted values of a column is written ``[r, r+1]`` (proper) or ``[r, r]``
(degenerate), where ``r`` is a 0-based rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# k * ell * M must stay below this so every distance sum fits an int64.
MAGNITUDE_LIMIT = 1 << 62


class UsageError(ValueError):
    """Bad arguments handed to a library function."""


class ContractError(UsageError):
    """Instance violates the k * ell * M < 2**62 magnitude contract."""


class InternalError(RuntimeError):
    """A self-check failed; this always points at a bug."""


def _frozen(arr):
    arr = np.array(arr, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class InstanceMatrix:
    """k integer sequences of length ell, stored as a read-only k x ell int64 array."""

    values: np.ndarray
    bound: int = field(default=0)

    def __init__(self, rows, bound=None):
        if isinstance(rows, InstanceMatrix):
            rows = rows.values
        if isinstance(rows, np.ndarray):
            if rows.ndim != 2:
                raise UsageError("instance must be a 2-d array")
            py_rows = None
        else:
            py_rows = [list(r) for r in rows]
            if not py_rows:
                raise UsageError("instance needs at least one sequence")
            ell = len(py_rows[0])
            if any(len(r) != ell for r in py_rows):
                raise UsageError("all sequences must have the same length")
            # checked before the int64 conversion so huge ints report as contract errors
            for r in py_rows:
                for v in r:
                    if int(v) != v:
                        raise UsageError(f"non-integer entry {v!r}")
                    if abs(int(v)) >= MAGNITUDE_LIMIT:
                        raise ContractError(f"entry {v} exceeds the magnitude contract")
        arr = rows if py_rows is None else np.array(py_rows, dtype=np.int64)
        k, ell = arr.shape
        if k < 1:
            raise UsageError("instance needs at least one sequence")
        actual = int(np.abs(arr).max()) if arr.size else 0
        if bound is None:
            bound = actual
        elif actual > bound:
            raise ContractError(f"entry magnitude {actual} exceeds declared bound {bound}")
        if k * ell * bound >= MAGNITUDE_LIMIT:
            raise ContractError(f"k*ell*M = {k}*{ell}*{bound} violates the 2**62 contract")
        object.__setattr__(self, "values", _frozen(arr))
        object.__setattr__(self, "bound", int(bound))

    @classmethod
    def derived(cls, arr):
        """Wrap an array computed from an already-validated instance (kernels, padding).

        Skips the magnitude contract: the parent contract already bounds every
        distance sum the derived instance can produce.
        """
        obj = object.__new__(cls)
        arr = _frozen(arr)
        object.__setattr__(obj, "values", arr)
        object.__setattr__(obj, "bound", int(np.abs(arr).max()) if arr.size else 0)
        return obj

    @property
    def k(self):
        return self.values.shape[0]

    @property
    def ell(self):
        return self.values.shape[1]

    def rows(self):
        return [list(map(int, r)) for r in self.values]

    def __eq__(self, other):
        if not isinstance(other, InstanceMatrix):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"InstanceMatrix(k={self.k}, ell={self.ell})"


@dataclass(frozen=True, eq=False)
class SortedColumns:
    """Per-column ordering permutations.

    ``pi[r, j]`` is the row holding rank ``r`` in column ``j``, ``s[r, j]``
    its value and ``rank[m, j]`` the inverse permutation.
    """

    pi: np.ndarray
    s: np.ndarray
    rank: np.ndarray

    @property
    def k(self):
        return self.s.shape[0]

    @property
    def ell(self):
        return self.s.shape[1]

    def value(self, row, col):
        return int(self.s[self.rank[row, col], col])


@dataclass(frozen=True)
class BasicInterval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi not in (self.lo, self.lo + 1):
            raise UsageError(f"[{self.lo}, {self.hi}] is not a basic interval")

    @property
    def proper(self):
        return self.hi == self.lo + 1

    @classmethod
    def proper_at(cls, r):
        return cls(r, r + 1)

    @classmethod
    def degenerate_at(cls, r):
        return cls(r, r)


@dataclass(frozen=True, eq=False)
class IntervalSystem:
    """One basic interval per column, as parallel arrays of start rank and properness."""

    start: np.ndarray
    proper: np.ndarray

    def __init__(self, start, proper):
        start = np.asarray(start, dtype=np.int64).copy()
        proper = np.asarray(proper, dtype=bool).copy()
        if start.shape != proper.shape or start.ndim != 1:
            raise UsageError("start and proper must be 1-d arrays of equal length")
        start.setflags(write=False)
        proper.setflags(write=False)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "proper", proper)

    @classmethod
    def from_intervals(cls, intervals):
        intervals = list(intervals)
        return cls([iv.lo for iv in intervals], [iv.proper for iv in intervals])

    def __len__(self):
        return len(self.start)

    def __getitem__(self, j):
        r = int(self.start[j])
        return BasicInterval(r, r + 1 if self.proper[j] else r)

    def __iter__(self):
        return (self[j] for j in range(len(self)))

    def __eq__(self, other):
        if not isinstance(other, IntervalSystem):
            return NotImplemented
        return np.array_equal(self.start, other.start) and np.array_equal(self.proper, other.proper)

    def validate(self, k):
        if np.any(self.start < 0) or np.any(self.start + self.proper > k - 1):
            raise UsageError(f"interval system does not fit k={k}")


@dataclass(frozen=True)
class ConsensusSolution:
    opt: int
    x: tuple
    kernel_length: int | None = None
    winning_system: str | None = None


def _as_seq(x):
    return np.asarray(x, dtype=np.int64).reshape(-1)


def manhattan_dist(x, y):
    x, y = _as_seq(x), _as_seq(y)
    if x.shape != y.shape:
        raise UsageError(f"length mismatch: {len(x)} vs {len(y)}")
    return int(np.abs(x - y).sum())


def distance_vector(x, A):
    """Distances from x to every sequence of A."""
    x = _as_seq(x)
    if len(x) != A.ell:
        raise UsageError(f"sequence has length {len(x)}, instance has ell={A.ell}")
    return np.abs(A.values - x).sum(axis=1)


def dist_to_collection(x, A):
    return int(distance_vector(x, A).max())


def sort_columns(A):
    """Stable column sort: ties keep the original row order."""
    vals = A.values
    pi = np.argsort(vals, axis=0, kind="stable")
    s = np.take_along_axis(vals, pi, axis=0)
    rank = np.empty_like(pi)
    np.put_along_axis(rank, pi, np.broadcast_to(np.arange(A.k)[:, None], pi.shape), axis=0)
    for arr in (pi, s, rank):
        arr.setflags(write=False)
    return SortedColumns(pi=pi, s=s, rank=rank)


def column_values(sc, system):
    """Lower and upper sorted values admitted by each interval of the system."""
    cols = np.arange(len(system))
    lo = sc.s[system.start, cols]
    hi = sc.s[system.start + system.proper, cols]
    return lo, hi


def is_consistent(x, system, sc):
    x = _as_seq(x)
    if len(x) != len(system) or len(system) != sc.ell:
        raise UsageError("sequence, interval system and instance lengths differ")
    system.validate(sc.k)
    lo, hi = column_values(sc, system)
    return bool(np.all((lo <= x) & (x <= hi)))


def in_box(x, sc):
    """Componentwise s[0, j] <= x_j <= s[k-1, j]."""
    x = _as_seq(x)
    return bool(np.all((sc.s[0] <= x) & (x <= sc.s[-1])))


def lower_bound(A):
    """ceil(max pairwise distance / 2), a lower bound on the optimum."""
    v = A.values
    best = 0
    for i in range(A.k):
        best = max(best, int(np.abs(v - v[i]).sum(axis=1).max()))
    return (best + 1) // 2


def upper_bound(A):
    return dist_to_collection(A.values[0], A)
