"""Hot loops: boolean composition and batched axiom scans.

Every kernel exists twice, as a numba loop nest (``*_nb``) and as a
vectorized numpy expression (``*_np``). The public names dispatch on
``USE_NUMBA``; both variants are importable so tests and the benchmark
can compare them directly.

Batched structures are dense boolean arrays with a leading batch axis:
binary multiplications are (N, n, n, n) with M[a, b, c] meaning c is in
a*b, units are (N, n), ternary incidences are (N, n, n, n, n).
"""

import numpy as np

from ._accel import USE_NUMBA, njit

FROB2_FLAGS = ("F1_unit_left", "F2_unit_right", "F3_assoc", "F4_special", "F5_frobenius")
FROB3_FLAGS = (
    "assoc",
    "dagger_symmetric",
    "normal",
    "left_idempotent",
    "right_idempotent",
    "commutative",
)


# -- composition -----------------------------------------------------------


def compose_np(a, b):
    # float32 matmul goes through BLAS; any positive count means "exists"
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


@njit(cache=True)
def compose_nb(a, b):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.bool_)
    for i in range(n):
        for j in range(k):
            if a[i, j]:
                for c in range(m):
                    if b[j, c]:
                        out[i, c] = True
    return out


# -- binary structures -----------------------------------------------------


def frob2_flags_np(M, U):
    M = np.asarray(M, dtype=np.int32)
    U = np.asarray(U, dtype=np.int32)
    N, n = U.shape
    out = np.zeros((N, 5), dtype=bool)
    eye = np.eye(n, dtype=bool)
    left = np.einsum("nx,nxab->nab", U, M) > 0
    right = np.einsum("nx,naxb->nab", U, M) > 0
    out[:, 0] = (left == eye).all(axis=(1, 2))
    out[:, 1] = (right == eye).all(axis=(1, 2))
    lhs = np.einsum("nabe,necd->nabcd", M, M) > 0
    rhs = np.einsum("nbce,naed->nabcd", M, M) > 0
    out[:, 2] = (lhs == rhs).reshape(N, -1).all(axis=1)
    special = np.einsum("nbca,nbcd->nad", M, M) > 0
    out[:, 3] = (special == eye).all(axis=(1, 2))
    lhs = np.einsum("naec,nedb->nabcd", M, M) > 0
    rhs = np.einsum("ncea,nebd->nabcd", M, M) > 0
    out[:, 4] = (lhs == rhs).reshape(N, -1).all(axis=1)
    return out


@njit(cache=True)
def _frob2_one(M, U, out):
    n = U.shape[0]
    f1 = True
    f2 = True
    f4 = True
    for a in range(n):
        for a2 in range(n):
            l = False
            r = False
            for x in range(n):
                if U[x] and M[x, a, a2]:
                    l = True
                if U[x] and M[a, x, a2]:
                    r = True
            if l != (a == a2):
                f1 = False
            if r != (a == a2):
                f2 = False
            s = False
            for b in range(n):
                for c in range(n):
                    if M[b, c, a] and M[b, c, a2]:
                        s = True
            if s != (a == a2):
                f4 = False
    f3 = True
    f5 = True
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    l3 = False
                    r3 = False
                    l5 = False
                    r5 = False
                    for e in range(n):
                        if M[a, b, e] and M[e, c, d]:
                            l3 = True
                        if M[b, c, e] and M[a, e, d]:
                            r3 = True
                        if M[a, e, c] and M[e, d, b]:
                            l5 = True
                        if M[c, e, a] and M[e, b, d]:
                            r5 = True
                    if l3 != r3:
                        f3 = False
                    if l5 != r5:
                        f5 = False
    out[0] = f1
    out[1] = f2
    out[2] = f3
    out[3] = f4
    out[4] = f5


@njit(cache=True)
def frob2_flags_nb(M, U):
    N = U.shape[0]
    out = np.zeros((N, 5), dtype=np.bool_)
    for k in range(N):
        _frob2_one(M[k], U[k], out[k])
    return out


# -- ternary structures ----------------------------------------------------


def frob3_flags_np(L):
    L = np.asarray(L, dtype=bool)
    N, n = L.shape[0], L.shape[1]
    Li = L.astype(np.int32)
    out = np.zeros((N, 6), dtype=bool)
    flat = lambda a: a.reshape(N, -1)  # noqa: E731
    lhs = np.einsum("nxyzw,nwuvs->nxyzuvs", Li, Li) > 0
    rhs = np.einsum("nzuvw,nxyws->nxyzuvs", Li, Li) > 0
    out[:, 0] = (flat(lhs) == flat(rhs)).all(axis=1)
    rev = L.transpose(0, 4, 3, 2, 1)  # (u, z, y, x)
    pair = L.transpose(0, 2, 1, 4, 3)  # (y, x, u, z)
    out[:, 1] = (flat(L) == flat(rev)).all(axis=1) & (flat(L) == flat(pair)).all(axis=1)
    eye = np.eye(n, dtype=bool)
    left_loop = np.einsum("nyyzu->nzu", Li) > 0
    right_loop = np.einsum("nxyyu->nxu", Li) > 0
    out[:, 2] = (left_loop == eye).all(axis=(1, 2)) & (right_loop == eye).all(axis=(1, 2))
    # l((y,z),(x,u)) = L[x,y,z,u];  (l.l)((y,z),(p,q)) = exists x,u: L[x,y,z,u] L[p,x,u,q]
    ll = np.einsum("nxyzu,npxuq->npyzq", Li, Li) > 0
    out[:, 3] = (flat(ll) == flat(L)).all(axis=1)
    # r((x,y),(u,z)) = L[x,y,z,u];  (r.r)((x,y),(p,q)) = exists u,z: L[x,y,z,u] L[u,z,q,p]
    rr = np.einsum("nxyzu,nuzqp->nxyqp", Li, Li) > 0
    out[:, 4] = (flat(rr) == flat(L)).all(axis=1)
    out[:, 5] = (flat(L) == flat(L.transpose(0, 3, 2, 1, 4))).all(axis=1)
    return out


@njit(cache=True)
def _frob3_one(L, out):
    n = L.shape[0]
    assoc = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                for u in range(n):
                    for v in range(n):
                        for s in range(n):
                            l = False
                            r = False
                            for w in range(n):
                                if L[x, y, z, w] and L[w, u, v, s]:
                                    l = True
                                if L[z, u, v, w] and L[x, y, w, s]:
                                    r = True
                            if l != r:
                                assoc = False
                                break
                        if not assoc:
                            break
                    if not assoc:
                        break
                if not assoc:
                    break
            if not assoc:
                break
        if not assoc:
            break
    sym = True
    comm = True
    lidem = True
    ridem = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                for u in range(n):
                    v = L[x, y, z, u]
                    if v != L[u, z, y, x] or v != L[y, x, u, z]:
                        sym = False
                    if v != L[z, y, x, u]:
                        comm = False
                    # l.l at ((y,z),(x,u)) and r.r at ((x,y),(u,z))
                    ll = False
                    rr = False
                    for a in range(n):
                        for b in range(n):
                            if L[a, y, z, b] and L[x, a, b, u]:
                                ll = True
                            if L[x, y, b, a] and L[a, b, z, u]:
                                rr = True
                    if ll != v:
                        lidem = False
                    if rr != v:
                        ridem = False
    normal = True
    for a in range(n):
        for b in range(n):
            left = False
            right = False
            for y in range(n):
                if L[y, y, a, b]:
                    left = True
                if L[a, y, y, b]:
                    right = True
            if left != (a == b) or right != (a == b):
                normal = False
    out[0] = assoc
    out[1] = sym
    out[2] = normal
    out[3] = lidem
    out[4] = ridem
    out[5] = comm


@njit(cache=True)
def frob3_flags_nb(L):
    N = L.shape[0]
    out = np.zeros((N, 6), dtype=np.bool_)
    for k in range(N):
        _frob3_one(L[k], out[k])
    return out


# -- clique covers (brute-force factorization g^dagger g) ------------------


def clique_cover_np(col_masks, target, max_cols):
    k = len(col_masks)
    subsets = np.arange(1 << k, dtype=np.int64)
    acc = np.zeros(1 << k, dtype=np.int64)
    count = np.zeros(1 << k, dtype=np.int64)
    for j in range(k):
        bit = (subsets >> j) & 1
        acc |= np.where(bit == 1, np.int64(col_masks[j]), np.int64(0))
        count += bit
    hit = (acc == target) & (count <= max_cols)
    idx = np.flatnonzero(hit)
    return int(idx[0]) if len(idx) else -1


@njit(cache=True)
def clique_cover_nb(col_masks, target, max_cols):
    k = col_masks.shape[0]
    for s in range(1 << k):
        acc = 0
        c = 0
        for j in range(k):
            if (s >> j) & 1:
                acc |= col_masks[j]
                c += 1
        if c <= max_cols and acc == target:
            return s
    return -1


# -- helpers ---------------------------------------------------------------


def unpack_codes(codes, shape):
    """Decode integers into boolean arrays; bit k is flat row-major index k."""
    codes = np.asarray(codes, dtype=np.int64)
    size = int(np.prod(shape))
    bits = (codes[:, None] >> np.arange(size, dtype=np.int64)) & 1
    return bits.astype(bool).reshape((len(codes),) + tuple(shape))


def pack_array(a):
    flat = np.asarray(a, dtype=bool).ravel()
    return int(sum(1 << i for i in np.flatnonzero(flat)))


if USE_NUMBA:
    compose = compose_nb
    frob2_flags = frob2_flags_nb
    frob3_flags = frob3_flags_nb
    clique_cover = clique_cover_nb
else:
    compose = compose_np
    frob2_flags = frob2_flags_np
    frob3_flags = frob3_flags_np
    clique_cover = clique_cover_np

BACKEND = "numba" if USE_NUMBA else "numpy"
