"""numba-compiled kernels. All masks are int64 (|M| <= 20 is enforced upstream)."""
import numpy as np

from .._jit import njit

EXAMPLE2, EXP1, EXP2 = 0, 1, 2


@njit(cache=True)
def _closure(rows, ap, an, full):
    cp = full
    cn = full
    hit = False
    for r in rows:
        if (r & ap) == ap and (r & an) == 0:
            cp &= r
            cn &= ~r
            hit = True
    if not hit:
        return full, full
    return cp, cn & full


@njit(cache=True)
def _single(x):
    return x != 0 and (x & (x - 1)) == 0


@njit(cache=True)
def _is_closed(ap, an, sig, ns):
    for i in range(ns):
        bp = sig[i, 0]
        bn = sig[i, 1]
        cp = sig[i, 2]
        cn = sig[i, 3]
        dp = bp & ~ap
        dn = bn & ~an
        if dp == 0 and dn == 0:
            if (cp & ~ap) != 0 or (cn & ~an) != 0:
                return False
            continue
        if (dn == 0 and _single(dp)) or (dp == 0 and _single(dn)):
            if (ap & cn) != 0 or (an & cp) != 0:
                # the opposite of the missing literal must already be present
                if dp != 0 and (an & dp) == 0:
                    return False
                if dn != 0 and (ap & dn) == 0:
                    return False
    return True


@njit(cache=True)
def _grow(a):
    b = np.empty((a.shape[0] * 2, a.shape[1]), np.int64)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def mine(rows, n_attrs, collect_intents):
    full = (np.int64(1) << n_attrs) - 1
    sig = np.empty((16, 4), np.int64)
    ns = 0
    intents = np.empty((16, 2), np.int64)
    ni = 0
    evals = 0
    members = np.empty(max(n_attrs, 1), np.int64)
    for counter in range(np.int64(1) << n_attrs):
        # attribute 0 is the most significant bit of the counter
        y = np.int64(0)
        k = 0
        for i in range(n_attrs):
            if (counter >> (n_attrs - 1 - i)) & 1:
                y |= np.int64(1) << i
                members[k] = i
                k += 1
        for x in range(np.int64(1) << k):
            xm = np.int64(0)
            for j in range(k):
                if (x >> (k - 1 - j)) & 1:
                    xm |= np.int64(1) << members[j]
            ap = y & ~xm
            an = xm
            if not _is_closed(ap, an, sig, ns):
                continue
            cp, cn = _closure(rows, ap, an, full)
            evals += 1
            if cp != ap or cn != an:
                if ns == sig.shape[0]:
                    sig = _grow(sig)
                sig[ns, 0] = ap
                sig[ns, 1] = an
                sig[ns, 2] = cp & ~ap
                sig[ns, 3] = cn & ~an
                ns += 1
            elif collect_intents:
                if ni == intents.shape[0]:
                    intents = _grow(intents)
                intents[ni, 0] = cp
                intents[ni, 1] = cn
                ni += 1
    return sig[:ns].copy(), intents[:ni].copy(), evals


@njit(cache=True)
def _objective(code, x):
    if code == EXAMPLE2:
        return x[0] * x[0] + (x[1] - 5.0) + (x[2] - 5.0) - (x[3] - 5.0) - x[4] * x[4]
    if code == EXP1:
        s1 = x[0] + x[1] + x[2]
        s2 = x[3] + x[4] + x[5]
        s3 = x[6] + x[7] + x[8]
        return s1 + s2 * s2 + s3 * s3 * s3
    acc = 0.0
    for i in range(x.shape[0]):
        d = x[i] - (i + 1.0)
        acc = acc + d * d
    return acc


@njit(cache=True)
def grid_search(row, cols, cands, code, target):
    n = cols.shape[0]
    work = row.copy()
    best = 0
    best_dist = np.inf
    for t in range(4 ** n):
        rem = t
        for j in range(n - 1, -1, -1):
            work[cols[j]] = cands[j, rem % 4]
            rem //= 4
        d = abs(_objective(code, work) - target)
        if d < best_dist:
            best_dist = d
            best = t
    return best, best_dist
