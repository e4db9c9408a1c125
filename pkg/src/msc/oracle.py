"""Brute-force ground truth and a seeded instance generator.

Nothing here touches the ILP or easy-program code paths; the only shared
pieces are the instance type and the distance functions.
"""

from __future__ import annotations

import itertools

import numpy as np

from .model import ConsensusSolution, ContractError, InstanceMatrix, UsageError, dist_to_collection

DEFAULT_CAP = 10**7


class OracleCapExceeded(UsageError):
    """The search would expand more states than the configured cap."""


def brute_force_msc(A, max_states=DEFAULT_CAP):
    """Exhaustive search over the box s[0, j] <= x_j <= s[k-1, j].

    Candidate values are enumerated column by column from the right; partial
    sequences reaching the same suffix distance vector are interchangeable,
    so only distinct vectors are kept.  For a threshold ``t`` a suffix vector
    ``v`` is discarded when some pair of rows (i, i') has
    ``v_i + v_i' + dist(a_i, a_i' on the prefix) > 2t``: any completion then
    puts one of the two rows above ``t``.  The optimum is the smallest ``t``
    for which a full-length vector survives, found by bisection between
    the pairwise lower bound and dist(a_0, A).  ``max_states`` caps the
    number of (vector, value) pairs expanded at any single column.

    Returns the optimum and the lexicographically smallest optimal x.
    """
    k, ell = A.k, A.ell
    if ell == 0:
        return ConsensusSolution(0, ())
    a = A.values
    rows_i, rows_j = np.triu_indices(k)
    gaps = np.abs(a[rows_i] - a[rows_j])
    prefix_gap = np.vstack([np.zeros(len(rows_i), dtype=np.int64), np.cumsum(gaps.T, axis=0)])
    choices = [np.arange(a[:, j].min(), a[:, j].max() + 1) for j in range(ell)]
    costs = [np.abs(c[:, None] - a[:, j][None, :]) for j, c in enumerate(choices)]

    def weights(t):
        if (t + 1) ** k >= 1 << 62:
            raise OracleCapExceeded("distance vectors too wide to pack")
        return (t + 1) ** np.arange(k, dtype=np.int64)

    def suffixes(t):
        out = [None] * (ell + 1)
        out[ell] = np.zeros((1, k), dtype=np.int64)
        for j in range(ell - 1, -1, -1):
            nxt = out[j + 1]
            if len(nxt) * len(choices[j]) > max_states:
                raise OracleCapExceeded(
                    f"column {j} needs {len(nxt) * len(choices[j])} states, cap is {max_states}"
                )
            cand = (costs[j][:, None, :] + nxt[None, :, :]).reshape(-1, k)
            pair = cand[:, rows_i] + cand[:, rows_j] + prefix_gap[j]
            cand = cand[pair.max(axis=1) <= 2 * t]
            # surviving components lie in [0, t]; pack each vector into one int64 key
            _, first = np.unique(cand @ weights(t), return_index=True)
            out[j] = cand[first]
            if len(out[j]) == 0:
                return None
        return out

    lo = (int(prefix_gap[ell].max()) + 1) // 2
    hi = dist_to_collection(a[0], A)
    while lo < hi:
        mid = (lo + hi) // 2
        if suffixes(mid) is None:
            lo = mid + 1
        else:
            hi = mid
    opt = lo
    suffix = suffixes(opt)

    x = []
    prefix = np.zeros(k, dtype=np.int64)
    for j in range(ell):
        for v, cost in zip(choices[j], costs[j]):
            if (suffix[j + 1] + prefix + cost).max(axis=1).min() <= opt:
                x.append(int(v))
                prefix = prefix + cost
                break
    return ConsensusSolution(opt, tuple(x))


def brute_force_easy(P, max_states=10**8, chunk=1 << 20):
    """min over every in-range assignment of max_i (d_i + sum_j e_ij x_j).

    Works for any (±)ILP, easy or not.  Leading variables are expanded into a
    dense block of at most ``chunk`` assignments; the rest are looped over.
    """
    if P.k == 0:
        raise UsageError("program has no constraints")
    sizes = [int(h - l + 1) for l, h in zip(P.lo, P.hi)]
    total = int(np.prod(sizes, dtype=object)) if sizes else 1
    if total > max_states:
        raise OracleCapExceeded(f"{total} assignments exceed cap {max_states}")
    coef = P.coef.astype(np.int64)
    block = P.consts[:, None].astype(np.int64)
    split = 0
    while split < P.n and block.shape[1] * sizes[split] <= chunk:
        vals = np.arange(P.lo[split], P.hi[split] + 1)
        block = (block[:, :, None] + coef[:, split][:, None, None] * vals[None, None, :]).reshape(P.k, -1)
        split += 1
    best = None
    rest = [range(int(P.lo[j]), int(P.hi[j]) + 1) for j in range(split, P.n)]
    for tail in itertools.product(*rest):
        offset = coef[:, split:] @ np.array(tail, dtype=np.int64) if tail else 0
        v = int((block + np.reshape(offset, (-1, 1))).max(axis=0).min())
        best = v if best is None else min(best, v)
    return best


def brute_force_hamming(A):
    """Binary closest string: min over x in {0,1}^ell of the max Hamming distance."""
    a = A.values
    if not np.all((a == 0) | (a == 1)):
        raise UsageError("Hamming oracle needs a 0/1 instance")
    if A.ell > 20:
        raise OracleCapExceeded("binary enumeration limited to ell <= 20")
    if A.ell == 0:
        return 0
    grid = ((np.arange(1 << A.ell)[:, None] >> np.arange(A.ell)) & 1).astype(np.int64)
    mism = (grid[:, None, :] != a[None, :, :]).sum(axis=2)
    return int(mism.max(axis=1).min())


# ---------------------------------------------------------------- generator

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed, count):
    """The first ``count`` outputs of SplitMix64 started from ``seed``.

    Output i is mix(seed + (i+1) * 0x9E3779B97F4A7C15) with all arithmetic
    mod 2**64, i.e. the usual sequential generator evaluated in one pass.
    """
    state = np.uint64(seed % (1 << 64)) + np.arange(1, count + 1, dtype=np.uint64) * _GAMMA
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def random_instance(k, ell, M, seed):
    """k x ell instance, entry (i, j) = draw i*ell + j mapped to [-M, M] by ``mod (2M+1)``.

    The modulo mapping carries a bias below (2M+1) / 2**64, irrelevant for testing.
    """
    if k < 1 or ell < 0 or M < 0:
        raise UsageError("need k >= 1, ell >= 0, M >= 0")
    if k * ell * M >= 1 << 62:
        raise ContractError(f"k*ell*M = {k}*{ell}*{M} violates the 2**62 contract")
    raw = splitmix64(seed, k * ell)
    vals = (raw % np.uint64(2 * M + 1)).astype(np.int64) - M
    return InstanceMatrix(vals.reshape(k, ell), bound=M)
