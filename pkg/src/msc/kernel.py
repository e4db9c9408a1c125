"""Column-merge kernel: columns sharing an ordering permutation collapse into one."""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .model import InstanceMatrix, InternalError, UsageError, sort_columns


@dataclass(frozen=True, eq=False)
class ColumnMergeMap:
    """``groups[g]`` lists the original columns summed into kernel column ``g``.

    ``column_group[j]`` is the kernel column of original column ``j``; groups are
    numbered by first occurrence and list their columns in ascending order.
    """

    groups: tuple
    shared_pi: tuple
    column_group: np.ndarray

    def __len__(self):
        return len(self.groups)

    def sizes(self):
        return [len(g) for g in self.groups]


def _permutation_keys(pi):
    k, ell = pi.shape
    if k ** k < 2 ** 62:
        weights = k ** np.arange(k, dtype=np.int64)
        return weights @ pi
    # large k: fall back to row-wise uniqueness on the transposed permutations
    _, inv = np.unique(np.ascontiguousarray(pi.T), axis=0, return_inverse=True)
    return inv.reshape(-1)


def kernelize(A, sc=None):
    """Merge columns with equal ordering permutations.

    Returns the kernel instance (at most min(ell, k!) columns) and the merge map.
    """
    if sc is None:
        sc = sort_columns(A)
    k, ell = A.k, A.ell
    if ell == 0:
        empty = np.zeros(0, dtype=np.int64)
        return A, ColumnMergeMap((), (), empty)
    keys = _permutation_keys(sc.pi)
    _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    by_first = np.argsort(first, kind="stable")
    relabel = np.empty_like(by_first)
    relabel[by_first] = np.arange(len(by_first))
    column_group = relabel[inv.reshape(-1)]

    order = np.argsort(column_group, kind="stable")
    bounds = np.flatnonzero(np.diff(column_group[order])) + 1
    starts = np.concatenate(([0], bounds))
    kernel_vals = np.add.reduceat(A.values[:, order], starts, axis=1)

    groups = tuple(tuple(int(c) for c in g) for g in np.split(order, bounds))
    shared_pi = tuple(tuple(int(r) for r in sc.pi[:, g[0]]) for g in groups)
    column_group.setflags(write=False)
    kernel = InstanceMatrix.derived(kernel_vals)
    if len(groups) > min(ell, math.factorial(k)):
        raise InternalError("kernel larger than k!")
    return kernel, ColumnMergeMap(groups, shared_pi, column_group)


def lift_kernel_solution(x_kernel, cmap, sc):
    """Expand a kernel witness to the full instance, preserving every row distance.

    Each kernel value is placed in the lowest proper interval ``[r, r+1]`` of its
    kernel column that contains it; the surplus over the interval's lower end is
    handed out greedily left to right across the merged columns.
    """
    x_kernel = np.asarray(x_kernel, dtype=np.int64).reshape(-1)
    if len(x_kernel) != len(cmap):
        raise UsageError(f"kernel witness has length {len(x_kernel)}, map has {len(cmap)} groups")
    k, ell = sc.k, sc.ell
    if ell == 0:
        return np.zeros(0, dtype=np.int64)
    if len(cmap) == ell:
        # nothing was merged: kernel column g is original column groups[g][0]
        x = x_kernel[cmap.column_group]
        if np.any(x < sc.s[0]) or np.any(x > sc.s[-1]):
            raise InternalError("kernel witness lies outside the sorted-value box")
        return x
    order = np.argsort(cmap.column_group, kind="stable")
    gid = cmap.column_group[order]
    starts = np.flatnonzero(np.r_[True, np.diff(gid) != 0])
    s_kernel = np.add.reduceat(sc.s[:, order], starts, axis=1)

    if np.any(x_kernel < s_kernel[0]) or np.any(x_kernel > s_kernel[-1]):
        raise InternalError("kernel witness lies outside the sorted-value box")
    if k == 1:
        return sc.s[0].copy()

    # smallest r with x <= s'[r+1]
    r_kernel = np.argmax(x_kernel[None, :] <= s_kernel[1:], axis=0)
    surplus = x_kernel - s_kernel[r_kernel, np.arange(len(x_kernel))]

    r = r_kernel[gid]
    base = sc.s[r, order]
    cap = sc.s[r + 1, order] - base
    before = np.cumsum(cap) - cap
    before -= before[starts][gid]
    assigned = np.clip(surplus[gid] - before, 0, cap)

    x = np.empty(ell, dtype=np.int64)
    x[order] = base + assigned
    total = np.add.reduceat(x[order], starts)
    if not np.array_equal(total, x_kernel):
        raise InternalError("lifted columns do not sum to the kernel witness")
    return x
