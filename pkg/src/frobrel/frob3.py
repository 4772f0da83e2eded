"""Ternary Frobenius structures and connectors.

A Frob3 is a boolean array L[x, y, z, u], true when u is in mu3(x, y, z)
for mu3: A (x) A* (x) A -> A. The comultiplication is the same array read
as a relation A -> A (x) A* (x) A.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import finrel as fr
from . import kernels
from ._report import AxiomError, Report, require
from .finrel import MINUS, PLUS, FinRel, FinSet, Obj
from .iso import apply_permutation, find_isomorphism


class Frob3:
    __slots__ = ("A", "L")

    def __init__(self, A, L):
        L = np.array(L, dtype=bool)
        if L.shape != (A.size,) * 4:
            raise fr.ShapeError(f"Frob3 on {A.name}: got Lambda{L.shape}")
        L.setflags(write=False)
        self.A, self.L = A, L

    @classmethod
    def from_quads(cls, A, quads):
        L = np.zeros((A.size,) * 4, dtype=bool)
        for q in quads:
            L[tuple(A.index(v) for v in q)] = True
        return cls(A, L)

    @classmethod
    def from_function(cls, A, f):
        """Lambda(x,y,z,u) iff f(x, y, z) == u; f may return None for undefined."""
        n = A.size
        L = np.zeros((n,) * 4, dtype=bool)
        for x, y, z in product(range(n), repeat=3):
            u = f(x, y, z)
            if u is not None:
                L[x, y, z, u] = True
        return cls(A, L)

    @property
    def n(self):
        return self.A.size

    @property
    def obj(self):
        return Obj.of(self.A)

    @property
    def in_obj(self):
        return Obj(((self.A, PLUS), (self.A, MINUS), (self.A, PLUS)))

    @property
    def mu3(self):
        n = self.n
        return FinRel(self.in_obj, self.obj, self.L.reshape(n**3, n))

    @property
    def comu3(self):
        return fr.dagger(self.mu3)

    def quads(self):
        return [tuple(int(v) for v in q) for q in zip(*np.nonzero(self.L))]

    def __eq__(self, other):
        if not isinstance(other, Frob3):
            return NotImplemented
        return self.A == other.A and np.array_equal(self.L, other.L)

    def __hash__(self):
        return hash((self.A, self.L.tobytes()))

    def __repr__(self):
        return f"Frob3({self.A.name}, |Lambda|={int(self.L.sum())})"


def check_frob3(t):
    flags = kernels.frob3_flags(t.L[None])[0]
    return Report(zip(kernels.FROB3_FLAGS, map(bool, flags)))


def left_loop(t):
    """{(z, u) | some y has Lambda(y, y, z, u)}."""
    return FinRel(t.obj, t.obj, np.einsum("yyzu->zu", t.L.astype(np.int32)) > 0)


def right_loop(t):
    """{(x, u) | some y has Lambda(x, y, y, u)}."""
    return FinRel(t.obj, t.obj, np.einsum("xyyu->xu", t.L.astype(np.int32)) > 0)


def l_rel(t):
    """l((y, z), (x, u)) iff Lambda(x, y, z, u), an endo-relation of A* (x) A."""
    n = t.n
    o = Obj(((t.A, MINUS), (t.A, PLUS)))
    return FinRel(o, o, t.L.transpose(1, 2, 0, 3).reshape(n * n, n * n))


def r_rel(t):
    """r((x, y), (u, z)) iff Lambda(x, y, z, u), an endo-relation of A (x) A*."""
    n = t.n
    o = Obj(((t.A, PLUS), (t.A, MINUS)))
    return FinRel(o, o, t.L.transpose(0, 1, 3, 2).reshape(n * n, n * n))


def check_sliding(t):
    from .diagrams import sliding_equations

    return all(lhs == rhs for lhs, rhs in sliding_equations(t))


def is_sliding_frobenius(t):
    """Associative, dagger symmetric and sliding: the setting of the spider rules."""
    rep = check_frob3(t)
    return rep.assoc and rep.dagger_symmetric and check_sliding(t)


# -- double equivalence relations ---------------------------------------------


@dataclass(frozen=True)
class DoubleEqReport:
    R: FinRel
    S: FinRel
    l: FinRel
    r: FinRel
    flags: Report


def _equivalence_on(rel, support):
    """rel lives inside support x support and is an equivalence relation there."""
    m = rel.m
    inside = not np.any(m & ~np.outer(support, support))
    refl = bool(np.all(np.diag(m)[support]))
    sym = bool(np.array_equal(m, m.T))
    trans = bool(np.all(~kernels.compose(m, m) | m))
    return inside and refl and sym and trans


def double_eq(t):
    n = t.n
    L = t.L
    idx = np.arange(n)
    R = L[idx[:, None], idx[None, :], idx[None, :], idx[:, None]]  # Lambda(x,y,y,x)
    S = L[idx[:, None], idx[:, None], idx[None, :], idx[None, :]]  # Lambda(y,y,z,z)
    Rr = FinRel(t.obj, t.obj, R)
    Sr = FinRel(t.obj, t.obj, S)
    l, r = l_rel(t), r_rel(t)
    x, y, z, u = np.nonzero(L)
    support = bool(np.all(R[x, y] & R[z, u] & S[y, z] & S[x, u]))
    flags = Report(
        {
            "R_equivalence": fr.relation_properties(Rr).equivalence,
            "S_equivalence": fr.relation_properties(Sr).equivalence,
            "l_equivalence_on_S": _equivalence_on(l, S.ravel()),
            "r_equivalence_on_R": _equivalence_on(r, R.ravel()),
            "support": support,
        }
    )
    return DoubleEqReport(Rr, Sr, l, r, flags)


# -- connectors -----------------------------------------------------------------


@dataclass(frozen=True)
class Connector:
    A: FinSet
    R: FinRel
    S: FinRel
    p: tuple  # sorted ((x, y, z), w) entries

    def __post_init__(self):
        entries = tuple(sorted((tuple(int(v) for v in k), int(w)) for k, w in dict(self.p).items()))
        object.__setattr__(self, "p", entries)

    @classmethod
    def build(cls, A, R_pairs, S_pairs, p):
        """``p`` is a dict or a function of (x, y, z) evaluated on R x_A S."""
        R = FinRel.from_pairs(A, A, R_pairs)
        S = FinRel.from_pairs(A, A, S_pairs)
        if callable(p):
            n = A.size
            p = {
                (x, y, z): p(x, y, z)
                for x, y, z in product(range(n), repeat=3)
                if R.m[x, y] and S.m[y, z]
            }
        return cls(A, R, S, tuple(p.items()))

    @property
    def table(self):
        return dict(self.p)


def equivalence_pairs(kind, n):
    if kind == "full":
        return [(a, b) for a in range(n) for b in range(n)]
    if kind == "diag":
        return [(a, a) for a in range(n)]
    raise ValueError(kind)


def check_connector(c):
    n = c.A.size
    R, S = c.R.m, c.S.m
    p = c.table
    flags = {
        "R_equivalence": fr.relation_properties(c.R).equivalence,
        "S_equivalence": fr.relation_properties(c.S).equivalence,
    }
    dom = {(x, y, z) for x, y, z in product(range(n), repeat=3) if R[x, y] and S[y, z]}
    flags["domain"] = set(p) == dom and all(0 <= w < n for w in p.values())
    if not flags["domain"]:
        p = {k: w for k, w in p.items() if k in dom and 0 <= w < n}
    flags["x_S_p"] = all(S[x, w] for (x, y, z), w in p.items())
    flags["z_R_p"] = all(R[z, w] for (x, y, z), w in p.items())
    flags["p_xyy"] = all(p.get((x, y, y)) == x for x in range(n) for y in range(n) if R[x, y] and S[y, y])
    flags["p_yyz"] = all(p.get((y, y, z)) == z for y in range(n) for z in range(n) if R[y, y] and S[y, z])
    assoc = True
    for (x, y, z), w in p.items():
        for u, v in product(range(n), repeat=2):
            left = p.get((w, u, v))
            inner = p.get((z, u, v))
            right = None if inner is None else p.get((x, y, inner))
            if left != right:
                assoc = False
    # the right side may be defined while (x, y, z) is not
    for (z, u, v), inner in p.items():
        for x, y in product(range(n), repeat=2):
            if (x, y, inner) in p and (x, y, z) not in p:
                assoc = False
    flags["assoc"] = assoc
    return Report(flags)


def connector_to_frob3(c):
    rep = check_connector(c)
    if not rep.ok:
        raise AxiomError("connector_to_frob3", rep.failed())
    n = c.A.size
    L = np.zeros((n,) * 4, dtype=bool)
    for (x, y, z), w in c.p:
        L[x, y, z, w] = True
    return Frob3(c.A, L)


def frob3_to_connector(t):
    rep = check_frob3(t)
    require(rep, ["assoc", "dagger_symmetric", "normal"], "frob3_to_connector")
    counts = t.L.sum(axis=3)
    if counts.max(initial=0) > 1:
        raise RuntimeError("normal dagger 3-structure is not single-valued")
    p = {(int(x), int(y), int(z)): int(t.L[x, y, z].argmax()) for x, y, z in zip(*np.nonzero(counts))}
    de = double_eq(t)
    c = Connector(t.A, de.R, de.S, tuple(p.items()))
    if not check_connector(c).ok:
        raise RuntimeError(f"extracted connector fails {check_connector(c).failed()}")
    return c


def connector_isomorphism(c1, c2):
    return find_isomorphism(
        [c1.R.m, c1.S.m, connector_to_frob3(c1).L], [c2.R.m, c2.S.m, connector_to_frob3(c2).L]
    )


def connector_morphism_check(f, c1, c2):
    """f is a function (tuple of images) preserving R, S and p wherever p is defined in c1."""
    f = tuple(f)
    n = c1.A.size
    p2 = c2.table
    for a, b in product(range(n), repeat=2):
        if c1.R.m[a, b] and not c2.R.m[f[a], f[b]]:
            return False
        if c1.S.m[a, b] and not c2.S.m[f[a], f[b]]:
            return False
    return all(p2.get((f[x], f[y], f[z])) == f[w] for (x, y, z), w in c1.p)


# -- constructions -----------------------------------------------------------------


def opposite3(t):
    return Frob3(t.A, t.L.transpose(2, 1, 0, 3))


def dual3(t):
    """Bend the output down to the left and the right input up: Lambda*(x,y,z,u) = Lambda(y,z,u,x)."""
    return Frob3(t.A, t.L.transpose(3, 0, 1, 2))


def product3(t1, t2):
    n1, n2 = t1.n, t2.n
    A = FinSet(f"{t1.A.name}x{t2.A.name}", n1 * n2)
    L = np.einsum("abcd,wxyz->awbxcydz", t1.L, t2.L).reshape((n1 * n2,) * 4)
    return Frob3(A, L)


def product3_wiring(t1, t2):
    """The defining diagram of the product as a relation on wires (x1, x2, y2, y1, z1, z2) -> (u1, u2)."""
    A1, A2 = t1.A, t2.A
    wires = Obj(((A1, PLUS), (A2, PLUS), (A2, MINUS), (A1, MINUS), (A1, PLUS), (A2, PLUS)))
    regroup = fr.permute(wires, (0, 3, 4, 1, 2, 5))
    return fr.compose(regroup, fr.tensor(t1.mu3, t2.mu3))


def pants3(A, B):
    """Lambda((a,b),(c,d),(e,f),(g,h)) iff g = a, h = f, b = d, c = e, on carrier A x B."""
    if isinstance(A, int):
        A = FinSet("A", A)
    if isinstance(B, int):
        B = FinSet("B", B)
    na, nb = A.size, B.size
    C = FinSet(f"{A.name}*x{B.name}", na * nb)
    L = np.zeros((na * nb,) * 4, dtype=bool)
    for a, b, c, f in product(range(na), range(nb), range(na), range(nb)):
        L[a * nb + b, c * nb + b, c * nb + f, a * nb + f] = True
    return Frob3(C, L)


def pants3_wiring(A, B):
    """Wires (a, b, d', c', e, f) with caps b=d' and c'=e, outputs (a, f)."""
    wires = Obj(((A, MINUS), (B, PLUS), (B, MINUS), (A, PLUS), (A, MINUS), (B, PLUS)))
    out = Obj(((A, MINUS), (B, PLUS)))
    m = np.zeros((wires.card, out.card), dtype=bool)
    for a, b, d, c, e, f in wires.elements():
        if b == d and c == e:
            m[wires.encode((a, b, d, c, e, f)), out.encode((a, f))] = True
    return FinRel(wires, out, m)


# -- units -------------------------------------------------------------------------


def _unit_relations(L, E):
    left = L[:, E][:, :, E].any(axis=(1, 2))  # (x, u): exists e1,e2 Lambda(x,e1,e2,u)
    right = L[E][:, E].any(axis=(0, 1))  # (x, u): exists e1,e2 Lambda(e1,e2,x,u)
    return left, right


def is_unital(t, E):
    E = np.flatnonzero(_mask(E, t.n))
    eye = np.eye(t.n, dtype=bool)
    left, right = _unit_relations(t.L, E)
    return bool(np.array_equal(left, eye) and np.array_equal(right, eye))


def _mask(E, n):
    E = np.asarray(E)
    if E.dtype == bool:
        return E.copy()
    v = np.zeros(n, dtype=bool)
    if E.size:
        v[E.astype(int)] = True
    return v


def unit_candidates(t):
    """Every subset E making t unital, in index order of their sorted member lists.

    The two existential relations only grow with E, so once one of them has an
    off-diagonal entry no superset can work and the branch is cut.
    """
    n = t.n
    L = t.L
    off = ~np.eye(n, dtype=bool)
    found = []

    def go(k, chosen):
        if chosen:
            left, right = _unit_relations(L, chosen)
            if np.any(left & off) or np.any(right & off):
                return
        if k == n:
            if chosen and is_unital(t, chosen):
                found.append(tuple(chosen))
            return
        go(k + 1, chosen + [k])
        go(k + 1, chosen)

    go(0, [])
    return sorted(found)


# -- morphisms ---------------------------------------------------------------------


def frob3_morphism_check(g, src, dst):
    return fr.compose(src.mu3, g) == fr.compose(fr.tensor_all(g, g, g), dst.mu3)


def sub3structure_check(i, src, dst):
    return fr.is_isometry(i) and frob3_morphism_check(i, src, dst)


def isomorphism3(t1, t2):
    return find_isomorphism([t1.L], [t2.L])


def relabel3(t, perm):
    return Frob3(t.A, apply_permutation(t.L, perm))


def restrict3(t, members, name=None):
    """Restriction of Lambda to a subset, with the inclusion relation."""
    members = [int(m) for m in members]
    sub = FinSet(name or f"{t.A.name}|{len(members)}", len(members))
    idx = np.array(members, dtype=int)
    L = t.L[np.ix_(idx, idx, idx, idx)]
    inc = np.zeros((len(members), t.n), dtype=bool)
    inc[np.arange(len(members)), idx] = True
    return Frob3(sub, L), FinRel(Obj.of(sub), t.obj, inc)
