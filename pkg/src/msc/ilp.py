"""(±)ILPs built from interval systems, their simplification, and witness recovery.

A program is ``min z`` subject to ``d_i + sum_j e_ij x_j <= z`` for each row
``i`` with ``e_ij`` in {+1, -1} and integer ranges ``lo_j <= x_j <= hi_j``.
Variables carry stable integer ids; for a freshly built program the id of a
variable is the column it came from.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import InternalError, UsageError


@dataclass(frozen=True, eq=False)
class Shift:
    """new variable = old variable + delta."""

    var: int
    delta: int


@dataclass(frozen=True, eq=False)
class Negate:
    vars: np.ndarray


@dataclass(frozen=True, eq=False)
class Merge:
    """``members[0]`` absorbed ``members[1:]``; their pre-merge ranges are kept for the split."""

    members: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    @property
    def target(self):
        return int(self.members[0])


@dataclass(frozen=True, eq=False)
class DegenerateFix:
    columns: np.ndarray
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class TransformLog:
    ell: int
    steps: tuple = ()

    def then(self, step):
        return TransformLog(self.ell, self.steps + (step,))


def _ro(arr, dtype=np.int64):
    arr = np.array(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PmIlp:
    coef: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    consts: np.ndarray
    ids: np.ndarray
    log: TransformLog

    def __post_init__(self):
        coef = _ro(self.coef, np.int8)
        if coef.size != len(self.consts) * len(self.ids):
            raise UsageError("coefficient matrix does not match constraints x variables")
        object.__setattr__(self, "coef", coef.reshape(len(self.consts), len(self.ids)))
        for name in ("lo", "hi", "consts", "ids"):
            object.__setattr__(self, name, _ro(getattr(self, name)))
        n = len(self.ids)
        if len(self.lo) != n or len(self.hi) != n:
            raise UsageError("coefficient matrix, ranges and ids disagree on the variable count")
        if np.any(self.lo > self.hi):
            raise UsageError("empty variable range")
        if self.coef.size and not np.all(np.abs(self.coef) == 1):
            raise UsageError("coefficients must be +1 or -1")

    @classmethod
    def from_rows(cls, coef, consts, ranges, ids=None, ell=None):
        """Small hand-written programs: coef[i][j], consts[i], ranges[j] = (lo, hi)."""
        consts = list(consts)
        ranges = list(ranges)
        n = len(ranges)
        if ids is None:
            ids = list(range(n))
        coef = np.array(coef, dtype=np.int8).reshape(len(consts), n)
        lo = [r[0] for r in ranges]
        hi = [r[1] for r in ranges]
        if ell is None:
            ell = max(ids) + 1 if n else 0
        return cls(coef, lo, hi, consts, ids, TransformLog(ell))

    @property
    def k(self):
        return len(self.consts)

    @property
    def n(self):
        return len(self.ids)

    def positions(self, vars):
        vars = np.asarray(vars, dtype=np.int64).reshape(-1)
        order = np.argsort(self.ids, kind="stable")
        idx = np.searchsorted(self.ids[order], vars).clip(0, max(self.n - 1, 0))
        if self.n == 0 or not np.array_equal(self.ids[order][idx], vars):
            raise UsageError(f"unknown variable ids in {vars.tolist()}")
        return order[idx]

    def position(self, var):
        return int(self.positions([var])[0])

    def ranges(self):
        return list(zip(map(int, self.lo), map(int, self.hi)))

    def objective(self, x):
        """max_i (d_i + sum_j e_ij x_j) for an assignment in variable order."""
        x = np.asarray(x, dtype=np.int64).reshape(-1)
        if len(x) != self.n:
            raise UsageError("assignment length differs from the variable count")
        if self.k == 0:
            raise UsageError("program has no constraints")
        return int((self.consts + self.coef.astype(np.int64) @ x).max())

    def in_range(self, x):
        x = np.asarray(x, dtype=np.int64).reshape(-1)
        return bool(np.all((self.lo <= x) & (x <= self.hi)))

    def plus_counts(self):
        return (self.coef == 1).sum(axis=1)

    def is_easy(self):
        counts = self.plus_counts()
        return bool(np.all((counts == 0) | (counts == 1) | (counts == self.n)))


def build_ilp(A, sc, system):
    """ILP(I): one variable per proper interval, degenerate columns folded into constants.

    A row whose rank is at most the interval's lower rank sits below the
    variable (term ``x_j - a``, coefficient +1); every other row sits above
    it (``a - x_j``, coefficient -1).
    """
    if len(system) != A.ell:
        raise UsageError(f"interval system has {len(system)} columns, instance has {A.ell}")
    system.validate(A.k)
    a = A.values
    pc = np.flatnonzero(system.proper)
    dc = np.flatnonzero(~system.proper)
    r = system.start[pc]
    lo = sc.s[r, pc]
    hi = sc.s[r + 1, pc]
    coef = np.where(sc.rank[:, pc] <= r, 1, -1).astype(np.int8)

    fixed = sc.s[system.start[dc], dc]
    consts = -(coef * a[:, pc]).sum(axis=1) + np.abs(fixed - a[:, dc]).sum(axis=1)
    log = TransformLog(A.ell, (DegenerateFix(_ro(dc), _ro(fixed)),))
    return PmIlp(coef, lo, hi, consts, pc, log)


def negate_variables(P, vars):
    vars = np.asarray(vars, dtype=np.int64).reshape(-1)
    if len(vars) == 0:
        return P
    pos = P.positions(vars)
    coef = P.coef.copy()
    coef[:, pos] *= -1
    lo, hi = P.lo.copy(), P.hi.copy()
    lo[pos], hi[pos] = -P.hi[pos], -P.lo[pos]
    return replace(P, coef=coef, lo=lo, hi=hi, log=P.log.then(Negate(_ro(vars))))


def negate_variable(P, var):
    return negate_variables(P, [var])


def merge_variables(P, target, source):
    """Fold ``source`` into ``target``; both must have the same coefficient vector."""
    t, s = P.position(target), P.position(source)
    if t == s:
        raise UsageError("cannot merge a variable with itself")
    if not np.array_equal(P.coef[:, t], P.coef[:, s]):
        raise UsageError(f"variables {target} and {source} have different coefficient vectors")
    step = Merge(_ro([target, source]), _ro(P.lo[[t, s]]), _ro(P.hi[[t, s]]))
    lo, hi = P.lo.copy(), P.hi.copy()
    lo[t] += P.lo[s]
    hi[t] += P.hi[s]
    keep = np.arange(P.n) != s
    return replace(
        P, coef=P.coef[:, keep], lo=lo[keep], hi=hi[keep], ids=P.ids[keep], log=P.log.then(step)
    )


def shift_variable(P, var, delta):
    """Substitute ``x = x' - delta``: the range moves by ``delta``, constants absorb the rest."""
    j = P.position(var)
    lo, hi = P.lo.copy(), P.hi.copy()
    lo[j] += delta
    hi[j] += delta
    consts = P.consts - P.coef[:, j].astype(np.int64) * delta
    return replace(P, lo=lo, hi=hi, consts=consts, log=P.log.then(Shift(int(var), int(delta))))


def normalize(P):
    """Negate until row 0 is all +1, then merge equal coefficient vectors.

    At most 2**(k-1) variables remain.  Groups are ordered by first occurrence
    and each keeps the id of its first member.
    """
    P = negate_variables(P, P.ids[P.coef[0] == -1]) if P.k else P
    if P.n == 0:
        return P, P.log
    bits = (P.coef[1:] == 1).astype(np.int64)
    keys = (bits << np.arange(P.k - 1, dtype=np.int64)[:, None]).sum(axis=0)
    _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    inv = inv.reshape(-1)
    log = P.log
    keep = np.sort(first)
    lo, hi = P.lo.copy(), P.hi.copy()
    for g in np.argsort(first, kind="stable"):
        pos = np.flatnonzero(inv == g)
        if len(pos) > 1:
            log = log.then(Merge(_ro(P.ids[pos]), _ro(P.lo[pos]), _ro(P.hi[pos])))
            lo[pos[0]] = P.lo[pos].sum()
            hi[pos[0]] = P.hi[pos].sum()
    P = replace(P, coef=P.coef[:, keep], lo=lo[keep], hi=hi[keep], ids=P.ids[keep], log=log)
    return P, log


def lift_ilp_solution(assign, log):
    """Replay ``log`` backwards, turning a simplified-program assignment into column values.

    ``assign`` maps variable id to value.  A merged value is split greedily in
    member order: each member takes as much of the remaining surplus over the
    members' lower ends as its range allows.  For a two-member merge this is
    ``v1 = clamp(v - lo2, lo1, hi1)``, ``v2 = v - v1``.
    """
    vals = np.zeros(log.ell, dtype=np.int64)
    known = np.zeros(log.ell, dtype=bool)
    for var, v in dict(assign).items():
        vals[var] = v
        known[var] = True
    for step in reversed(log.steps):
        if isinstance(step, Negate):
            vals[step.vars] = -vals[step.vars]
        elif isinstance(step, Shift):
            vals[step.var] -= step.delta
        elif isinstance(step, Merge):
            total = vals[step.target]
            cap = step.hi - step.lo
            surplus = total - step.lo.sum()
            if surplus < 0 or surplus > cap.sum():
                raise InternalError(f"merged value {total} outside its range")
            before = np.cumsum(cap) - cap
            vals[step.members] = step.lo + np.clip(surplus - before, 0, cap)
            known[step.members] = True
        elif isinstance(step, DegenerateFix):
            vals[step.columns] = step.values
            known[step.columns] = True
    if not known.all():
        raise InternalError("assignment does not cover every column")
    return vals
