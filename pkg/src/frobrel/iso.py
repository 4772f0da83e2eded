"""Permutation search for isomorphisms of small incidence structures."""

import numpy as np


def find_isomorphism(src, dst):
    """Find a bijection p with dst[p[a], p[b], ...] == src[a, b, ...] for every array pair.

    ``src`` and ``dst`` are equal-length lists of boolean arrays, every axis
    indexed by the same carrier. Returns p as a tuple or None.
    """
    if len(src) != len(dst):
        raise ValueError("array lists differ in length")
    if not src:
        return ()
    n = src[0].shape[0]
    if any(a.shape != b.shape for a, b in zip(src, dst)) or dst[0].shape[0] != n:
        return None
    sig_s = _signatures(src)
    sig_d = _signatures(dst)
    if sorted(sig_s) != sorted(sig_d):
        return None
    perm = [-1] * n
    used = [False] * n

    def consistent(k):
        # check every entry whose indices all lie in 0..k
        idx = np.array(perm[: k + 1])
        for a, b in zip(src, dst):
            sub_a = a[np.ix_(*([np.arange(k + 1)] * a.ndim))]
            sub_b = b[np.ix_(*([idx] * b.ndim))]
            if not np.array_equal(sub_a, sub_b):
                return False
        return True

    def go(k):
        if k == n:
            return True
        for c in range(n):
            if used[c] or sig_d[c] != sig_s[k]:
                continue
            perm[k] = c
            used[c] = True
            if consistent(k) and go(k + 1):
                return True
            used[c] = False
        perm[k] = -1
        return False

    return tuple(perm) if go(0) else None


def _signatures(arrays):
    # per-element counts along each axis; preserved by any isomorphism
    sig = []
    n = arrays[0].shape[0]
    for e in range(n):
        parts = []
        for a in arrays:
            for ax in range(a.ndim):
                parts.append(int(np.take(a, e, axis=ax).sum()))
        sig.append(tuple(parts))
    return sig


def apply_permutation(a, perm):
    """Relabel every axis of a: out[p[i], p[j], ...] = a[i, j, ...]."""
    inv = np.argsort(np.asarray(perm))
    return a[np.ix_(*([inv] * a.ndim))]
