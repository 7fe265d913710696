"""Pure-numpy kernels mirroring :mod:`numba_impl` operation for operation.

The candidate loop stays in Python (its semantics are sequential: Σ grows while
being scanned); the per-candidate work over Σ and over the object rows is
vectorized.
"""
import itertools

import numpy as np

EXAMPLE2, EXP1, EXP2 = 0, 1, 2


def _closure(rows, ap, an, full):
    sel = ((rows & ap) == ap) & ((rows & an) == 0)
    if not sel.any():
        return full, full
    hit = rows[sel]
    return int(np.bitwise_and.reduce(hit)), int(np.bitwise_and.reduce(~hit)) & full


def _single(x):
    return (x != 0) & ((x & (x - 1)) == 0)


def _is_closed(ap, an, sig):
    if sig.shape[0] == 0:
        return True
    bp, bn, cp, cn = sig[:, 0], sig[:, 1], sig[:, 2], sig[:, 3]
    dp = bp & ~ap
    dn = bn & ~an
    covered = (dp == 0) & (dn == 0)
    if np.any(covered & (((cp & ~ap) != 0) | ((cn & ~an) != 0))):
        return False
    one_missing = ((dn == 0) & _single(dp)) | ((dp == 0) & _single(dn))
    contradicts = ((ap & cn) != 0) | ((an & cp) != 0)
    opposite_absent = np.where(dp != 0, (an & dp) == 0, (ap & dn) == 0)
    return not np.any(one_missing & contradicts & opposite_absent)


def mine(rows, n_attrs, collect_intents):
    rows = np.asarray(rows, dtype=np.int64)
    full = (1 << n_attrs) - 1
    sig = np.empty((16, 4), np.int64)
    ns = 0
    intents = []
    evals = 0
    for counter in range(1 << n_attrs):
        members = [i for i in range(n_attrs) if counter >> (n_attrs - 1 - i) & 1]
        y = sum(1 << i for i in members)
        k = len(members)
        for x in range(1 << k):
            xm = sum(1 << members[j] for j in range(k) if x >> (k - 1 - j) & 1)
            ap, an = y & ~xm, xm
            if not _is_closed(ap, an, sig[:ns]):
                continue
            cp, cn = _closure(rows, ap, an, full)
            evals += 1
            if cp != ap or cn != an:
                if ns == sig.shape[0]:
                    sig = np.concatenate([sig, np.empty_like(sig)])
                sig[ns] = (ap, an, cp & ~ap, cn & ~an)
                ns += 1
            elif collect_intents:
                intents.append((cp, cn))
    return sig[:ns].copy(), np.array(intents, dtype=np.int64).reshape(-1, 2), evals


def objective(code, x):
    """Builtin objectives over the last axis; same operation order as the jit path."""
    x = np.asarray(x, dtype=np.float64)
    if code == EXAMPLE2:
        return (
            x[..., 0] * x[..., 0]
            + (x[..., 1] - 5.0)
            + (x[..., 2] - 5.0)
            - (x[..., 3] - 5.0)
            - x[..., 4] * x[..., 4]
        )
    if code == EXP1:
        s1 = x[..., 0] + x[..., 1] + x[..., 2]
        s2 = x[..., 3] + x[..., 4] + x[..., 5]
        s3 = x[..., 6] + x[..., 7] + x[..., 8]
        return s1 + s2 * s2 + s3 * s3 * s3
    acc = np.zeros(x.shape[:-1])
    for i in range(x.shape[-1]):
        d = x[..., i] - (i + 1.0)
        acc = acc + d * d
    return acc


def combination_grid(row, cols, cands):
    """All 4^|cols| variants of ``row``, first column most significant."""
    n = len(cols)
    digits = np.array(list(itertools.product(range(4), repeat=n)), dtype=np.int64).reshape(-1, n)
    grid = np.repeat(np.asarray(row, dtype=np.float64)[None, :], digits.shape[0], axis=0)
    if n:
        grid[:, cols] = cands[np.arange(n), digits]
    return grid


def grid_search(row, cols, cands, code, target):
    dist = np.abs(objective(code, combination_grid(row, cols, cands)) - target)
    best = int(np.argmin(dist))
    return best, float(dist[best])
