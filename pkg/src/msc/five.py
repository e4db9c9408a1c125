"""Exact consensus for k <= 5 through twenty interval systems.

Every optimal consensus that also minimises the sum of distances is consistent
with one of: a border system B_i, a middle system M_i (i = 0..4) or a
triangle system T_D (D a 3-subset of rows).  Each system's program reduces to
an easy (±)ILP with at most four variables, solved exactly by ``solve_easy``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .easy import easy_value, solve_easy
from .ilp import build_ilp, lift_ilp_solution, negate_variables, normalize
from .kernel import kernelize, lift_kernel_solution
from .model import (
    ConsensusSolution,
    InstanceMatrix,
    InternalError,
    IntervalSystem,
    UsageError,
    dist_to_collection,
    in_box,
    sort_columns,
)

K = 5
TRIANGLES = tuple(combinations(range(K), 3))


@dataclass(frozen=True, eq=False)
class SystemDescriptor:
    kind: str  # "border", "middle" or "triangle"
    key: object  # row index, or a 3-tuple of rows for triangles
    system: IntervalSystem

    @property
    def label(self):
        if self.kind == "triangle":
            return "T{" + ",".join(str(r + 1) for r in self.key) + "}"
        return ("B" if self.kind == "border" else "M") + str(self.key + 1)


def governing_set(interval, pi_j):
    """Rows governing a value strictly inside a proper interval of a 5-row column."""
    if len(pi_j) != K:
        raise UsageError("governing sets are defined for k = 5")
    if not interval.proper:
        raise UsageError("degenerate intervals have no governing set")
    r = interval.lo
    if r == 0:
        return frozenset({int(pi_j[0])})
    if r == 1:
        return frozenset({int(pi_j[0]), int(pi_j[1])})
    if r == 2:
        return frozenset({int(pi_j[3]), int(pi_j[4])})
    return frozenset({int(pi_j[4])})


def _require_five(sc):
    if sc.k != K:
        raise UsageError(f"interval systems need k = 5, got {sc.k}")


# Each family helper returns (start, proper) arrays with one row per requested key.


def _border_arrays(sc, rows):
    rank = sc.rank[np.asarray(rows)]
    values = sc.s[rank, np.arange(sc.ell)]
    # smallest rank carrying the row's value
    start = np.argmax(sc.s[None, :, :] == values[:, None, :], axis=1)
    top, bottom = rank == 0, rank == K - 1
    start = np.where(top, 0, np.where(bottom, K - 2, start))
    return start, top | bottom


def _middle_arrays(sc, rows):
    rank = sc.rank[np.asarray(rows)]
    return _middle(rank <= 1, rank >= K - 2)


def _triangle_arrays(sc, deltas):
    bits = np.array([sum(1 << d for d in delta) for delta in deltas], dtype=np.int64)[:, None]
    inside = [(bits >> sc.pi[r][None, :]) & 1 == 1 for r in range(K)]
    return _middle(inside[0] & inside[1], inside[3] & inside[4])


def _middle(low, high):
    # [1,2] where low holds, [2,3] where high holds, else the median [2,2]
    return np.where(low, 1, 2), low | high


def build_border_system(i, sc):
    _require_five(sc)
    start, proper = _border_arrays(sc, [i])
    return SystemDescriptor("border", i, IntervalSystem(start[0], proper[0]))


def build_middle_system(i, sc):
    _require_five(sc)
    start, proper = _middle_arrays(sc, [i])
    return SystemDescriptor("middle", i, IntervalSystem(start[0], proper[0]))


def build_triangle_system(delta, sc):
    _require_five(sc)
    delta = tuple(sorted(int(d) for d in delta))
    if len(set(delta)) != 3:
        raise UsageError("a triangle needs three distinct rows")
    start, proper = _triangle_arrays(sc, [delta])
    return SystemDescriptor("triangle", delta, IntervalSystem(start[0], proper[0]))


SYSTEM_KEYS = (
    [("border", i) for i in range(K)] + [("middle", i) for i in range(K)] + [("triangle", d) for d in TRIANGLES]
)


def _stacked_systems(sc):
    """Start ranks and properness of all twenty systems, one row each, in SYSTEM_KEYS order."""
    _require_five(sc)
    parts = [_border_arrays(sc, range(K)), _middle_arrays(sc, range(K)), _triangle_arrays(sc, TRIANGLES)]
    return np.vstack([p[0] for p in parts]), np.vstack([p[1] for p in parts])


def all_systems(sc):
    starts, proper = _stacked_systems(sc)
    return [
        SystemDescriptor(kind, key, IntervalSystem(starts[n], proper[n]))
        for n, (kind, key) in enumerate(SYSTEM_KEYS)
    ]


def check_descriptor(desc, sc):
    """True when every proper interval's governing set has the shape its kind requires."""
    for j, iv in enumerate(desc.system):
        if not iv.proper:
            continue
        g = governing_set(iv, sc.pi[:, j])
        if desc.kind == "border" and g != {desc.key}:
            return False
        if desc.kind == "middle" and (len(g) != 2 or desc.key not in g):
            return False
        if desc.kind == "triangle" and (len(g) != 2 or not g <= set(desc.key)):
            return False
    return True


def orient_easy(P, desc):
    """Negate variables of a merged program built from ``desc`` until it is easy.

    First every variable is oriented so its +1 rows are exactly its governing
    set (at most two rows).  A triangle program with three variables is then
    negated as a whole, leaving one +1 in each triangle row and all +1 in the
    other two rows.
    """
    if P.k != K:
        raise UsageError("orientation expects a 5-row program")
    plus = (P.coef == 1).sum(axis=0)
    P = negate_variables(P, P.ids[plus > 2])
    if desc.kind == "border" and P.n > 1:
        raise InternalError(f"border system {desc.label} produced {P.n} variables")
    if desc.kind == "triangle" and P.n == 3:
        P = negate_variables(P, P.ids)
    if P.n > 4 or not P.is_easy():
        raise InternalError(f"system {desc.label} did not yield an easy program")
    return P


def pad_to_five(A):
    if A.k > K:
        raise UsageError(f"this solver handles k <= 5, got k = {A.k}")
    if A.k == K:
        return A
    extra = np.repeat(A.values[-1:], K - A.k, axis=0)
    return InstanceMatrix.derived(np.vstack([A.values, extra]))


def solve_system(A, sc, desc):
    """Optimum of ILP(I) for one system, with the oriented program and its assignment."""
    P = build_ilp(A, sc, desc.system)
    P, _ = normalize(P)
    P = orient_easy(P, desc)
    value, x = solve_easy(P)
    return value, P, x


_POPCOUNT = np.array([bin(m).count("1") for m in range(1 << K)])
_FULL = (1 << K) - 1


def _system_optima(A, sc, starts, proper, chunk=1 << 15):
    """Optimum of every system's program, computed for all systems together.

    Follows build_ilp, normalize and orient_easy: a proper column's variable is
    described by the mask of rows where it has coefficient +1.  The orientation
    with at most two such rows is kept (negating the range otherwise), and
    columns sharing an oriented mask add up their ranges.  Columns are processed
    in chunks so memory stays bounded on long instances.
    """
    m, ell = starts.shape
    consts = np.zeros((m, K), dtype=np.int64)
    lo_sum = np.zeros(m << K, dtype=np.int64)
    hi_sum = np.zeros(m << K, dtype=np.int64)
    used = np.zeros(m << K, dtype=bool)
    row_bits = (np.int64(1) << np.arange(K, dtype=np.int64))[None, :, None]
    for c0 in range(0, ell, chunk):
        cols = np.arange(c0, min(ell, c0 + chunk))
        st, pr = starts[:, cols], proper[:, cols]
        low = sc.s[st, cols]
        high = sc.s[np.minimum(st + 1, K - 1), cols]
        a = A.values[:, cols][None]
        plus = sc.rank[None, :, cols] <= st[:, None, :]
        terms = np.where(pr[:, None, :], np.where(plus, -a, a), np.abs(low[:, None, :] - a))
        consts += terms.sum(axis=2)

        mask = (plus * row_bits).sum(axis=1)
        flip = _POPCOUNT[mask] > 2
        mask = np.where(flip, _FULL ^ mask, mask)
        key = ((np.arange(m)[:, None] << K) + mask)[pr]
        np.add.at(lo_sum, key, np.where(flip, -high, low)[pr])
        np.add.at(hi_sum, key, np.where(flip, -low, high)[pr])
        used[key] = True

    groups = [[] for _ in range(m)]
    sys_idx, masks = np.nonzero(used.reshape(m, 1 << K))
    flat = (sys_idx << K) + masks
    for n, mk, lo, hi in zip(sys_idx.tolist(), masks.tolist(), lo_sum[flat].tolist(), hi_sum[flat].tolist()):
        groups[n].append((mk, lo, hi))

    optima, seen = [], {}
    for n, (kind, key) in enumerate(SYSTEM_KEYS):
        group = groups[n]
        if kind == "triangle" and len(group) == 3:
            group = [(_FULL ^ mk, -hi, -lo) for mk, lo, hi in group]
        if len(group) > 4 or (kind == "border" and len(group) > 1):
            raise InternalError(f"system {n} produced {len(group)} variables")
        program = (tuple(group), tuple(consts[n].tolist()))
        if program not in seen:
            coef_rows = [[1 if mk >> i & 1 else -1 for mk, _, _ in group] for i in range(K)]
            lo = [g[1] for g in group]
            hi = [g[2] for g in group]
            seen[program] = easy_value(coef_rows, list(program[1]), lo, hi)
        optima.append(seen[program])
    return optima


def solve_k5(A, kernel=True):
    """Optimal consensus for an instance with at most five sequences.

    All twenty system optima are computed in one pass; only the winner (first
    in system order among the minima) is rebuilt as an explicit program to
    recover the consensus sequence.
    """
    if A.k > K:
        raise UsageError(f"this solver handles k <= 5, got k = {A.k}")
    if A.ell == 0:
        return ConsensusSolution(0, (), 0, None)
    full = pad_to_five(A)
    full_sc = sort_columns(full)
    work, work_sc, cmap = full, full_sc, None
    if kernel:
        work, cmap = kernelize(full, full_sc)
        work_sc = sort_columns(work)

    starts, proper = _stacked_systems(work_sc)
    optima = _system_optima(work, work_sc, starts, proper)
    win = int(np.argmin(optima))
    kind, key = SYSTEM_KEYS[win]
    desc = SystemDescriptor(kind, key, IntervalSystem(starts[win], proper[win]))
    value, P, x = solve_system(work, work_sc, desc)
    if value != optima[win]:
        raise InternalError(f"{desc.label}: explicit program gives {value}, batched pass {optima[win]}")

    x_work = lift_ilp_solution(dict(zip(P.ids.tolist(), x)), P.log)
    x_full = lift_kernel_solution(x_work, cmap, full_sc) if kernel else x_work
    if dist_to_collection(x_full, A) != value or not in_box(x_full, full_sc):
        raise InternalError(f"witness from {desc.label} does not attain {value}")
    return ConsensusSolution(int(value), tuple(x_full.tolist()), work.ell, desc.label)
