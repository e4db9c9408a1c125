"""Exact solver for easy (±)ILPs.

An easy program has, in every constraint, either 0, 1 or all coefficients
equal to +1.  It is brought to canonical form::

    y_1 + ... + y_n + K'            <= z
    y_i - sum_{j != i} y_j + K_i    <= z      (i = 1..n)
    0 <= y_i <= D_i

with K', K_1..K_n of one parity and K_1 <= ... <= K_n, and then solved by
``solve_fast`` in O(n^2) time.  ``solve_reference`` is the pseudo-polynomial
one-increment-at-a-time version, kept as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ilp import PmIlp, TransformLog
from .model import InternalError, UsageError


@dataclass(frozen=True)
class CanonicalProgram:
    kp: int
    ks: tuple
    ds: tuple

    def __post_init__(self):
        object.__setattr__(self, "kp", int(self.kp))
        object.__setattr__(self, "ks", tuple(int(v) for v in self.ks))
        object.__setattr__(self, "ds", tuple(int(v) for v in self.ds))

    @property
    def n(self):
        return len(self.ks)

    def validate(self):
        if self.n == 0 or len(self.ds) != self.n:
            raise UsageError("canonical program needs n >= 1 and one bound per variable")
        if any(d < 0 for d in self.ds):
            raise UsageError("variable bounds must be nonnegative")
        if any((k - self.kp) % 2 for k in self.ks):
            raise UsageError("constants must share one parity")
        if any(a > b for a, b in zip(self.ks, self.ks[1:])):
            raise UsageError("K_1..K_n must be sorted ascending")

    def evaluate(self, y):
        total = sum(y)
        return max([self.kp + total] + [k + 2 * yi - total for k, yi in zip(self.ks, y)])

    def feasible(self, y):
        return len(y) == self.n and all(0 <= yi <= d for yi, d in zip(y, self.ds))

    def to_pmilp(self):
        n = self.n
        coef = -np.ones((n + 1, n), dtype=np.int8)
        coef[0] = 1
        coef[1 + np.arange(n), np.arange(n)] = 1
        return PmIlp(coef, [0] * n, list(self.ds), [self.kp, *self.ks], list(range(n)), TransformLog(n))


# ---------------------------------------------------------------- reduction


@dataclass(frozen=True)
class Canonicalization:
    """Two parity copies of a canonicalized program plus what is needed to undo it.

    ``perms[c][p]`` is the variable (position in the source program, or ``n`` for
    the dummy) sitting at sorted position ``p`` of copy ``c``.
    """

    programs: tuple
    perms: tuple
    lows: tuple

    def restore(self, copy, y):
        n = len(self.lows)
        x = [0] * n
        for p, var in enumerate(self.perms[copy]):
            if var < n:
                x[var] = y[p] + self.lows[var]
        return x


def _reduced_constants(coef_rows, consts, lo, hi):
    """Constants of C_+, C_1..C_n, C_- after shifting lower bounds to 0, plus the bounds D.

    Duplicate shapes keep the larger constant; a missing shape gets a constant
    small enough never to bind.
    """
    n = len(lo)
    cp = cm = None
    cj = [None] * n
    for row, c in zip(coef_rows, consts):
        count, j = 0, -1
        for v, e in enumerate(row):
            c += e * lo[v]
            if e == 1:
                count += 1
                j = v
        if count == n:
            cp = c if cp is None else max(cp, c)
        if count == 0:
            cm = c if cm is None else max(cm, c)
        if count == 1:
            cj[j] = c if cj[j] is None else max(cj[j], c)
        if 1 < count < n:
            raise UsageError("program is not easy")
    ds = [h - l for l, h in zip(lo, hi)]
    existing = [c for c in [cp, cm, *cj] if c is not None]
    filler = max(existing) - 2 * sum(ds)
    # dummy variable n (bound 0) turns C_- into its own single-plus constraint
    out = [filler if c is None else c for c in [cp, *cj, cm]]
    return out, ds + [0]


def _parity_copies(consts, ds):
    """Two canonical programs: odd constants bumped in the first, even ones in the second."""
    programs, perms = [], []
    for parity in (1, 0):
        kp, *ks = [c + 1 if c % 2 == parity else c for c in consts]
        order = sorted(range(len(ks)), key=ks.__getitem__)
        programs.append((kp, [ks[i] for i in order], [ds[i] for i in order]))
        perms.append(tuple(order))
    return programs, perms


def canonicalize(P):
    if P.k == 0:
        raise UsageError("program has no constraints")
    if P.n == 0:
        raise UsageError("program has no variables; its optimum is max of the constants")
    lo = P.lo.tolist()
    consts, ds = _reduced_constants(P.coef.tolist(), P.consts.tolist(), lo, P.hi.tolist())
    programs, perms = _parity_copies(consts, ds)
    return Canonicalization(tuple(CanonicalProgram(*p) for p in programs), tuple(perms), tuple(lo))


def easy_value(coef_rows, consts, lo, hi):
    """Optimum of an easy program given as plain lists; no witness is kept."""
    if not lo:
        return max(consts)
    reduced, ds = _reduced_constants(coef_rows, consts, lo, hi)
    best = None
    for kp, ks, dd in _parity_copies(reduced, ds)[0]:
        value = _bulk_steps(kp, ks, dd, list(range(len(ks))), [0] * len(ks), None)
        best = value if best is None else min(best, value)
    return best


# ---------------------------------------------------------------- solvers


def _block_end(ks):
    l = 0
    while l + 1 < len(ks) and ks[l + 1] == ks[0]:
        l += 1
    return l


def _dropped(seq, i):
    return seq[:i] + seq[i + 1:]


def _check_witness(c, value, y):
    if not c.feasible(y) or c.evaluate(y) != value:
        raise InternalError(f"witness {y} does not attain {value} on {c}")


def solve_reference(c):
    """Pseudo-polynomial: one unit increment per loop pass.  Test use only."""
    c.validate()
    y = [0] * c.n
    value = _unit_steps(c.kp, list(c.ks), list(c.ds), list(range(c.n)), y)
    _check_witness(c, value, y)
    return value, tuple(y)


def _unit_steps(kp, ks, ds, idx, y):
    n = len(ks)
    if n == 1:
        return max(kp, ks[0])
    while kp < ks[-1]:
        l = _block_end(ks)
        for i in range(l + 1):
            if ds[i] == 0:
                return _unit_steps(kp, _dropped(ks, i), _dropped(ds, i), _dropped(idx, i), y)
        kp += 1
        for i in range(l):
            ks[i] -= 1
        ks[l] += 1
        ds[l] -= 1
        y[idx[l]] += 1
        for i in range(l + 1, n):
            ks[i] -= 1
    return kp


def solve_fast(c, trace=None):
    """O(n^2) bulk-step solver.

    Each bulk step of size ``delta`` adds ``delta`` to every variable of the
    leading block.  When a step cannot be taken in full, the remaining unit
    increments go to the block's variables from the last one backwards, which
    is what the unit-step solver would do.  If ``trace`` is a list, the state
    ``(K', Ks, Ds)`` is appended at every loop head, recursion included.
    """
    c.validate()
    y = [0] * c.n
    value = _bulk_steps(c.kp, list(c.ks), list(c.ds), list(range(c.n)), y, trace)
    _check_witness(c, value, y)
    return value, tuple(y)


def _bulk_steps(kp, ks, ds, idx, y, trace):
    n = len(ks)
    if n == 1:
        return max(kp, ks[0])
    while kp < ks[-1]:
        if trace is not None:
            trace.append((kp, tuple(ks), tuple(ds)))
        l = _block_end(ks)
        for i in range(l + 1):
            if ds[i] == 0:
                return _bulk_steps(kp, _dropped(ks, i), _dropped(ds, i), _dropped(idx, i), y, trace)
        size = l + 1
        gap = ks[-1] - kp
        if size < n:
            delta = min(min(ds[:size]), (ks[size] - ks[l]) // 2, gap // (2 * size))
            if delta == 0:
                for t in range(gap // 2):
                    y[idx[l - t]] += 1
                return (kp + ks[-1]) // 2
        else:
            delta = min(min(ds), gap // (2 * (n - 1)))
            if delta == 0:
                for t in range(1 + gap // 2):
                    y[idx[n - 1 - t]] += 1
                return 1 + (kp + ks[-1]) // 2
        kp += delta * size
        for i in range(size):
            ks[i] += delta * (2 - size)
            ds[i] -= delta
            y[idx[i]] += delta
        for i in range(size, n):
            ks[i] -= delta * size
    return kp


def solve_easy(P):
    """Optimum and an optimal assignment (in variable order) of an easy program."""
    if P.k == 0:
        raise UsageError("program has no constraints")
    if not P.is_easy():
        raise UsageError("program is not easy")
    if P.n == 0:
        return int(P.consts.max()), []
    can = canonicalize(P)
    best = None
    for copy, prog in enumerate(can.programs):
        value, y = solve_fast(prog)
        if best is None or value < best[0]:
            best = (value, copy, y)
    value, copy, y = best
    x = can.restore(copy, y)
    if not P.in_range(x) or P.objective(x) != value:
        raise InternalError(f"assignment {x} does not attain {value}")
    return value, x
