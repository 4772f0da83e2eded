"""Passing between binary and ternary structures.

The unital bridge, splitting a left idempotent structure through its
l-classes, the enveloping 2-structure, and its universal property.
"""

from dataclasses import dataclass

import numpy as np

from . import finrel as fr
from ._report import AxiomError, Report, require
from .finrel import FinRel, FinSet, Obj
from .frob2 import Frob2, check_frob2, frob2_morphism_check, involution, is_symmetric
from .frob3 import (
    Frob3,
    check_frob3,
    double_eq,
    frob3_morphism_check,
    is_unital,
    l_rel,
    r_rel,
    sub3structure_check,
)


def _einsum_bool(spec, *arrays):
    return np.einsum(spec, *[a.astype(np.int32) for a in arrays]) > 0


# -- unital bridge ------------------------------------------------------------


def two_to_three(f):
    """Lambda(x,y,z,u) iff iota(y, y'), w in x*y' and u in w*z for some y', w."""
    rep = check_frob2(f)
    require(rep, ["F1_unit_left", "F2_unit_right", "F3_assoc", "F5_frobenius"], "two_to_three")
    if not is_symmetric(f):
        raise AxiomError("two_to_three", ["symmetric"])
    iota = involution(f).m
    # x * y' -> w, then w * z -> u
    xyw = _einsum_bool("yv,xvw->xyw", iota, f.M)
    L = _einsum_bool("xyw,wzu->xyzu", xyw, f.M)
    return Frob3(f.A, L)


def three_to_two(t, E):
    """M(a,b,c) iff Lambda(a,e,b,c) for some e in E; the unit is E."""
    mask = np.zeros(t.n, dtype=bool)
    mask[list(E)] = True
    if not is_unital(t, mask):
        raise AxiomError("three_to_two", ["unital"])
    M = t.L[:, mask].any(axis=1)
    return Frob2(t.A, M, mask)


def special_normal_equivalences(t, E):
    """The four equivalent conditions on a unital structure."""
    f = three_to_two(t, E)
    rep3 = check_frob3(t)
    rep = Report(
        {
            "special": check_frob2(f).F4_special,
            "normal": rep3.normal,
            "left_idempotent": rep3.left_idempotent,
            "right_idempotent": rep3.right_idempotent,
        }
    )
    if len(set(rep.values())) != 1:
        raise RuntimeError(f"the four conditions disagree: {rep}")
    return rep


# -- splitting ------------------------------------------------------------------


@dataclass(frozen=True)
class SplitResult:
    L: FinSet
    i: FinRel  # L -> A* (x) A, relating a class to its member pairs
    two_structure: Frob2
    source: Frob3

    def classes(self):
        n = self.source.n
        return [[divmod(int(k), n) for k in np.flatnonzero(row)] for row in self.i.m]


def split_construction(t):
    rep = check_frob3(t)
    require(rep, ["left_idempotent", "dagger_symmetric"], "split_construction")
    n = t.n
    L, i = fr.dagger_split(l_rel(t))
    k = L.size
    members = i.m.reshape(k, n, n)  # class, y, z
    # [a][b] contains [c] when a member (y1, z1) of a and (z1, z2) of b give (y1, z2) in c
    chain = _einsum_bool("ayz,bzw->abyw", members, members)
    M = _einsum_bool("abyw,cyw->abc", chain, members)
    U = members[:, np.arange(n), np.arange(n)].any(axis=1)
    f = Frob2(L, M, U)
    return SplitResult(L, i, f, t)


def L_on_morphisms(f, src, dst):
    """i' dagger . (f (x) f) . i for a 3-structure morphism f between the sources."""
    return fr.compose_all(src.i, fr.tensor(f, f), fr.dagger(dst.i))


# -- the enveloping structure --------------------------------------------------------

TAGS = ("Q_l", "Q_r", "A-", "A+")


@dataclass(frozen=True)
class Envelope:
    E: FinSet
    two_structure: Frob2
    kappa: FinRel  # A -> E onto the A+ block
    tags: tuple  # (tag, local index) per element of E
    offsets: dict  # tag -> first index
    i_l: FinRel  # Q_l -> A* (x) A
    i_r: FinRel  # Q_r -> A (x) A*
    source: Frob3

    @property
    def M_E(self):
        return self.two_structure.mu

    @property
    def U_E(self):
        return self.two_structure.unit_elements

    def block(self, tag):
        start = self.offsets[tag]
        size = sum(1 for tg, _ in self.tags if tg == tag)
        return range(start, start + size)


def envelope(t):
    rep = check_frob3(t)
    require(rep, ["assoc", "dagger_symmetric", "normal"], "envelope")
    n = t.n
    L = t.L
    de = double_eq(t)
    R, S = de.R.m, de.S.m
    Ql, i_l = fr.dagger_split(l_rel(t))
    Qr, i_r = fr.dagger_split(r_rel(t))
    nl, nr = Ql.size, Qr.size
    ml = i_l.m.reshape(nl, n, n)  # class, y, z
    mr = i_r.m.reshape(nr, n, n)  # class, x, y
    sizes = {"Q_l": nl, "Q_r": nr, "A-": n, "A+": n}
    offsets, tags, start = {}, [], 0
    for tag in TAGS:
        offsets[tag] = start
        tags += [(tag, k) for k in range(sizes[tag])]
        start += sizes[tag]
    size = start
    M = np.zeros((size, size, size), dtype=bool)

    def put(a_tag, b_tag, c_tag, block):
        oa, ob, oc = offsets[a_tag], offsets[b_tag], offsets[c_tag]
        na, nb, nc = block.shape
        M[oa : oa + na, ob : ob + nb, oc : oc + nc] |= block

    # x . [y, z] = p(x, y, z)
    put("A+", "Q_l", "A+", _einsum_bool("xyzu,qyz->xqu", L, ml))
    # [x, y] . z = p(x, y, z)
    put("Q_r", "A+", "A+", _einsum_bool("xyzu,qxy->qzu", L, mr))
    # [y, z] . a* = p(a, z, y)*
    put("Q_l", "A-", "A-", _einsum_bool("azyw,qyz->qaw", L, ml))
    # a* . [x, y] = p(y, x, a)*
    put("A-", "Q_r", "A-", _einsum_bool("yxaw,qxy->aqw", L, mr))
    # a* . x = [a, x]_l when S(a, x)
    put("A-", "A+", "Q_l", ml.transpose(1, 2, 0) & S[:, :, None])
    # x . a* = [x, a]_r when R(x, a)
    put("A+", "A-", "Q_r", mr.transpose(1, 2, 0) & R[:, :, None])
    # [b, c][d, e] = [b, w] with Lambda(c, d, e, w)
    cw = _einsum_bool("cdew,pbc,qde->pqbw", L, ml, ml)
    put("Q_l", "Q_l", "Q_l", _einsum_bool("pqbw,rbw->pqr", cw, ml))
    # [a, b][c, d] = [w, d] with Lambda(a, b, c, w)
    wd = _einsum_bool("abcw,pab,qcd->pqwd", L, mr, mr)
    put("Q_r", "Q_r", "Q_r", _einsum_bool("pqwd,rwd->pqr", wd, mr))

    U = np.zeros(size, dtype=bool)
    diag = np.arange(n)
    U[offsets["Q_l"] : offsets["Q_l"] + nl] = ml[:, diag, diag].any(axis=1)
    U[offsets["Q_r"] : offsets["Q_r"] + nr] = mr[:, diag, diag].any(axis=1)
    E = FinSet(f"E({t.A.name})", size)
    two = Frob2(E, M, U)
    kappa = np.zeros((n, size), dtype=bool)
    kappa[diag, offsets["A+"] + diag] = True
    env = Envelope(
        E,
        two,
        FinRel(t.obj, Obj.of(E), kappa),
        tuple(tags),
        offsets,
        FinRel(Obj.of(Ql), i_l.dst, i_l.m),
        FinRel(Obj.of(Qr), i_r.dst, i_r.m),
        t,
    )
    return env


def check_envelope(env):
    """Theorem-level postconditions of the construction."""
    f = env.two_structure
    rep = check_frob2(f)
    flags = dict(rep)
    flags["symmetric"] = is_symmetric(f)
    flags["kappa_sub3"] = bool(
        rep.ok and flags["symmetric"] and sub3structure_check(env.kappa, env.source, two_to_three(f))
    )
    kk = fr.compose(fr.tensor(env.kappa, env.kappa), f.mu)
    flags["kappa_products_empty"] = not kk.m.any()
    return Report(flags)


# -- universal property -----------------------------------------------------------------


def _binsub_preconditions(target, src3, h):
    C, i, s = target
    flags = {}
    flags["target_sub3"] = sub3structure_check(i, s, two_to_three(C))
    flags["target_products_empty"] = not fr.compose(fr.tensor(i, i), C.mu).m.any()
    flags["h_morphism"] = frob3_morphism_check(h, src3, s)
    return Report(flags)


def universal_factorization(env, target, h):
    """The 2-structure morphism f: E -> C with i dagger . f . kappa = h.

    ``target`` is (C, i, s): a 2-structure C with a sub-3-structure i: B -> C
    of carrier s whose products inside C are empty. f is assembled block by
    block from g = i . h.
    """
    C, i, s = target
    pre = _binsub_preconditions(target, env.source, h)
    if not pre.ok:
        raise AxiomError("universal_factorization", pre.failed())
    g = fr.compose(h, i).m.astype(np.int32)  # A -> C
    iota = involution(C).m.astype(np.int32)
    gs = g @ iota  # a -> iota(g(a))
    Mc = C.M.astype(np.int32)
    n = env.source.n
    ml = env.i_l.m.reshape(-1, n, n)
    mr = env.i_r.m.reshape(-1, n, n)
    f = np.zeros((env.E.size, C.n), dtype=bool)
    o = env.offsets
    f[o["A+"] : o["A+"] + n] = g > 0
    f[o["A-"] : o["A-"] + n] = gs > 0
    # [y, z] -> iota(g y) . g z, over members
    pair = np.einsum("ya,zb,abc->yzc", gs, g, Mc) > 0
    f[o["Q_l"] : o["Q_l"] + len(ml)] = _einsum_bool("qyz,yzc->qc", ml, pair)
    pair = np.einsum("xa,yb,abc->xyc", g, gs, Mc) > 0
    f[o["Q_r"] : o["Q_r"] + len(mr)] = _einsum_bool("qxy,xyc->qc", mr, pair)
    fr_f = FinRel(Obj.of(env.E), C.obj, f)
    post = check_factorization(env, target, h, fr_f)
    if not post.ok:
        raise RuntimeError(f"universal factorization fails {post.failed()}")
    return fr_f


def check_factorization(env, target, h, f):
    C, i, _ = target
    fk = fr.compose(env.kappa, f)
    return Report(
        {
            "morphism": frob2_morphism_check(f, env.two_structure, C),
            "binsub": fk == fr.compose_all(fk, fr.dagger(i), i),
            "restricts_to_h": fr.compose(fk, fr.dagger(i)) == h,
        }
    )


def envelope_target(env):
    """The envelope itself as a target (E, kappa, source)."""
    return (env.two_structure, env.kappa, env.source)


__all__ = [
    "Envelope",
    "SplitResult",
    "L_on_morphisms",
    "check_envelope",
    "check_factorization",
    "envelope",
    "envelope_target",
    "special_normal_equivalences",
    "split_construction",
    "three_to_two",
    "two_to_three",
    "universal_factorization",
]
