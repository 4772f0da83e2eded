"""Binary Frobenius structures, groupoids, involutions and complete positivity.

A Frob2 stores its multiplication as a boolean array M[a, b, c] ("c is in
a*b") and its unit as a boolean vector. Groupoids compose right to left:
m(a, b) is "a after b" and is defined exactly when s(a) == t(b).
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import finrel as fr
from . import kernels
from ._report import AxiomError, Report, require
from .finrel import FinRel, FinSet, Obj
from .iso import find_isomorphism


class Frob2:
    __slots__ = ("A", "M", "U")

    def __init__(self, A, M, U):
        M = np.array(M, dtype=bool)
        U = np.array(U, dtype=bool)
        n = A.size
        if M.shape != (n, n, n) or U.shape != (n,):
            raise fr.ShapeError(f"Frob2 on {A.name}: got M{M.shape}, U{U.shape}")
        M.setflags(write=False)
        U.setflags(write=False)
        self.A, self.M, self.U = A, M, U

    @classmethod
    def from_table(cls, A, table, unit):
        """``table`` maps (a, b) to an element or an iterable of elements."""
        n = A.size
        M = np.zeros((n, n, n), dtype=bool)
        for (a, b), cs in table.items():
            if isinstance(cs, (int, np.integer, str)):
                cs = [cs]
            for c in cs:
                M[A.index(a), A.index(b), A.index(c)] = True
        U = np.zeros(n, dtype=bool)
        for e in unit:
            U[A.index(e)] = True
        return cls(A, M, U)

    @property
    def n(self):
        return self.A.size

    @property
    def obj(self):
        return Obj.of(self.A)

    @property
    def mu(self):
        """mu: A (x) A -> A."""
        n = self.n
        return FinRel(Obj.of(self.A, self.A), self.obj, self.M.reshape(n * n, n))

    @property
    def eta(self):
        return FinRel(fr.I, self.obj, self.U[None, :])

    @property
    def unit_elements(self):
        return [int(x) for x in np.flatnonzero(self.U)]

    def products(self, a, b):
        return [int(c) for c in np.flatnonzero(self.M[a, b])]

    def __eq__(self, other):
        if not isinstance(other, Frob2):
            return NotImplemented
        return self.A == other.A and np.array_equal(self.M, other.M) and np.array_equal(self.U, other.U)

    def __hash__(self):
        return hash((self.A, self.M.tobytes(), self.U.tobytes()))

    def __repr__(self):
        return f"Frob2({self.A.name}, |M|={int(self.M.sum())}, U={self.unit_elements})"


def check_frob2(f):
    flags = kernels.frob2_flags(f.M[None], f.U[None])[0]
    return Report(zip(kernels.FROB2_FLAGS, map(bool, flags)))


def involution(f):
    """iota(a, b) iff a*b contains a unit."""
    iota = (f.M & f.U[None, None, :]).any(axis=2)
    return FinRel(f.obj, f.obj, iota)


def is_symmetric(f):
    m = involution(f).m
    return bool(np.array_equal(m, m.T))


def isomorphism(f, g):
    """A carrier bijection carrying f onto g, or None."""
    return find_isomorphism([f.M, f.U], [g.M, g.U])


def relabel(f, perm, A=None):
    from .iso import apply_permutation

    return Frob2(A or f.A, apply_permutation(f.M, perm), apply_permutation(f.U, perm))


# -- groupoids ---------------------------------------------------------------


@dataclass(frozen=True)
class Groupoid:
    C0: FinSet
    C1: FinSet
    s: tuple
    t: tuple
    u: tuple
    i: tuple
    m: tuple  # sorted ((a, b), c) entries, c = a after b

    def __post_init__(self):
        for name in ("s", "t", "u", "i"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
        entries = tuple(sorted(((int(a), int(b)), int(c)) for (a, b), c in dict(self.m).items()))
        object.__setattr__(self, "m", entries)
        n0, n1 = self.C0.size, self.C1.size
        if len(self.s) != n1 or len(self.t) != n1 or len(self.i) != n1 or len(self.u) != n0:
            raise fr.ShapeError("groupoid maps do not match the declared sizes")

    @property
    def comp(self):
        return dict(self.m)

    def compose(self, a, b):
        return self.comp.get((a, b))

    def __eq__(self, other):
        # objects are anonymous: compare sizes, not the C0 name
        if not isinstance(other, Groupoid):
            return NotImplemented
        return (
            self.C0.size == other.C0.size
            and self.C1 == other.C1
            and (self.s, self.t, self.u, self.i, self.m) == (other.s, other.t, other.u, other.i, other.m)
        )

    def __hash__(self):
        return hash((self.C0.size, self.C1, self.s, self.t, self.u, self.i, self.m))

    def canonical(self):
        """Renumber objects so that u is increasing."""
        order = sorted(range(self.C0.size), key=lambda x: self.u[x])
        new = {old: k for k, old in enumerate(order)}
        return Groupoid(
            self.C0,
            self.C1,
            [new[x] for x in self.s],
            [new[x] for x in self.t],
            [self.u[x] for x in order],
            self.i,
            self.m,
        )


def make_groupoid(n_objects, n_morphisms, s, t, u, i, m, name="G"):
    return Groupoid(
        FinSet(f"{name}0", n_objects), FinSet(name, n_morphisms), s, t, u, i, tuple(dict(m).items())
    )


def check_groupoid(g):
    n0, n1 = g.C0.size, g.C1.size
    comp = g.comp
    in0 = lambda x: 0 <= x < n0  # noqa: E731
    in1 = lambda x: 0 <= x < n1  # noqa: E731
    typed = (
        all(in0(x) for x in g.s + g.t)
        and all(in1(x) for x in g.u + g.i)
        and all(in1(a) and in1(b) and in1(c) for (a, b), c in comp.items())
    )
    if not typed:
        return Report({"maps_typed": False})
    sections = all(g.s[g.u[x]] == x and g.t[g.u[x]] == x for x in range(n0))
    domain = set(comp) == {(a, b) for a in range(n1) for b in range(n1) if g.s[a] == g.t[b]}
    ends = all(g.s[c] == g.s[b] and g.t[c] == g.t[a] for (a, b), c in comp.items())
    units = all(
        comp.get((a, g.u[g.s[a]])) == a and comp.get((g.u[g.t[a]], a)) == a for a in range(n1)
    )
    assoc = True
    for (a, b), ab in comp.items():
        for c in range(n1):
            if (b, c) in comp:
                if comp.get((ab, c)) != comp.get((a, comp[(b, c)])):
                    assoc = False
    inv_ends = all(g.s[g.i[a]] == g.t[a] and g.t[g.i[a]] == g.s[a] for a in range(n1))
    inverse = all(
        comp.get((a, g.i[a])) == g.u[g.t[a]] and comp.get((g.i[a], a)) == g.u[g.s[a]] for a in range(n1)
    )
    return Report(
        {
            "maps_typed": True,
            "unit_sections": sections,
            "composition_domain": domain,
            "composite_ends": ends,
            "unit_laws": units,
            "assoc": assoc,
            "inverse_ends": inv_ends,
            "inverse_laws": inverse,
        }
    )


def groupoid_to_frob2(g):
    rep = check_groupoid(g)
    if not rep.ok:
        raise AxiomError("not a groupoid", rep.failed())
    n = g.C1.size
    M = np.zeros((n, n, n), dtype=bool)
    for (a, b), c in g.m:
        M[a, b, c] = True
    U = np.zeros(n, dtype=bool)
    U[list(g.u)] = True
    return Frob2(g.C1, M, U)


def _unique(candidates, what):
    if len(candidates) != 1:
        raise RuntimeError(f"{what}: expected exactly one candidate, found {candidates}")
    return candidates[0]


def frob2_to_groupoid(f):
    rep = check_frob2(f)
    require(rep, kernels.FROB2_FLAGS, "frob2_to_groupoid")
    M, units = f.M, f.unit_elements
    obj_of = {x: k for k, x in enumerate(units)}
    n = f.n
    defined = M.any(axis=2)
    s = [obj_of[_unique([x for x in units if defined[a, x]], f"source of {a}")] for a in range(n)]
    t = [obj_of[_unique([y for y in units if defined[y, a]], f"target of {a}")] for a in range(n)]
    hits_unit = (M & f.U[None, None, :]).any(axis=2)
    inv = [
        _unique([b for b in range(n) if hits_unit[a, b] and hits_unit[b, a]], f"inverse of {a}")
        for a in range(n)
    ]
    m = {}
    for a, b in zip(*np.nonzero(defined)):
        m[(int(a), int(b))] = _unique(f.products(a, b), f"composite {a}*{b}")
    g = Groupoid(FinSet(f"{f.A.name}0", len(units)), f.A, s, t, units, inv, tuple(m.items()))
    if not check_groupoid(g).ok:
        raise RuntimeError("extracted groupoid fails its own axioms")
    return g


# -- products, opposites, pants ------------------------------------------------


def opposite2(f):
    return Frob2(f.A, f.M.transpose(1, 0, 2), f.U)


def product2(f, g):
    """Carrier f.A x g.A, componentwise multiplication and unit."""
    n, k = f.n, g.n
    A = FinSet(f"{f.A.name}x{g.A.name}", n * k)
    M = np.einsum("abc,xyz->axbycz", f.M, g.M).reshape(n * k, n * k, n * k)
    U = np.outer(f.U, g.U).ravel()
    return Frob2(A, M, U)


def pants2(X):
    """The pair-of-pants structure on X* (x) X: (a, b)(b, d) = (a, d), unit the diagonal."""
    if isinstance(X, int):
        X = FinSet("X", X)
    n = X.size
    A = FinSet(f"{X.name}*x{X.name}", n * n)
    M = np.zeros((n * n,) * 3, dtype=bool)
    for a, b, d in product(range(n), repeat=3):
        M[a * n + b, b * n + d, a * n + d] = True
    U = np.zeros(n * n, dtype=bool)
    U[[x * n + x for x in range(n)]] = True
    return Frob2(A, M, U)


# -- complete positivity ---------------------------------------------------------


@dataclass(frozen=True)
class CpReport:
    c_of_f: FinRel
    is_cp: bool
    witness_g: FinRel = None


def _as_mask(R, n):
    v = np.zeros(n, dtype=bool)
    R = np.asarray(R)
    if R.dtype == bool:
        v[:] = R
    elif R.size:
        v[R.astype(int)] = True
    return v


def c_of_state(R, f):
    """C(R)(a, b) iff b^-1 a lies in R, computed as the dagger of mu.(id (x) R)."""
    state = fr.subset_state(f.obj, _as_mask(R, f.n))
    right_mult = fr.compose(fr.tensor(fr.identity(f.obj), state), f.mu)
    return fr.dagger(right_mult)


def edge_witness(c):
    """g: A -> edges of c, relating a to every edge {a, b} with c(a, b)."""
    m = c.m
    n = len(m)
    edges = [(a, b) for a in range(n) for b in range(a, n) if m[a, b]]
    X = FinSet("edges", len(edges))
    g = np.zeros((n, len(edges)), dtype=bool)
    for k, (a, b) in enumerate(edges):
        g[a, k] = g[b, k] = True
    return FinRel(c.src, Obj.of(X), g)


def factorization_criterion(c):
    m = c.m
    return bool(np.array_equal(m, m.T) and np.all(~m | np.diag(m)[:, None]))


def cp_state(R, f):
    c = c_of_state(R, f)
    if not factorization_criterion(c):
        return CpReport(c, False, None)
    g = edge_witness(c)
    if fr.compose(g, fr.dagger(g)) != c:
        raise RuntimeError("edge witness does not reproduce C(R)")
    return CpReport(c, True, g)


def brute_force_factorization(c, max_codomain):
    """Search every g: A -> X with |X| <= max_codomain for c = g^dagger g.

    A column of g is a subset S of A and contributes S x S to g^dagger g, so
    every column must be a clique of c. Growing a column to a maximal clique
    keeps the product inside c, so it is enough to scan sets of maximal
    cliques. Returns a witness or None.
    """
    m = c.m
    n = len(m)
    if n * n > 63:
        raise ValueError("brute-force factorization is capped at 7 elements")
    rows = [sum(1 << b for b in range(n) if m[a, b]) for a in range(n)]
    cliques = [S for S in range(1, 1 << n) if all(rows[a] & S == S for a in range(n) if (S >> a) & 1)]
    cols = [S for S in cliques if not any(T != S and T & S == S for T in cliques)]
    if len(cols) > 62:
        raise ValueError(f"{len(cols)} maximal cliques is too many for an exhaustive scan")
    masks = np.array(
        [sum(1 << (a * n + b) for a in range(n) for b in range(n) if (S >> a) & 1 and (S >> b) & 1) for S in cols],
        dtype=np.int64,
    )
    target = sum(1 << (a * n + b) for a in range(n) for b in range(n) if m[a, b])
    hit = kernels.clique_cover(masks, np.int64(target), max_codomain)
    if hit < 0:
        return None
    chosen = [cols[j] for j in range(len(cols)) if (hit >> j) & 1]
    X = FinSet("X", len(chosen))
    g = np.zeros((n, len(chosen)), dtype=bool)
    for k, S in enumerate(chosen):
        for a in range(n):
            g[a, k] = bool((S >> a) & 1)
    return FinRel(c.src, Obj.of(X), g)


def transpose_to_state(r, src, dst):
    """The subset of B x A named by r: B -/-> A, as a mask on product2(opposite2(src), dst)."""
    return r.m.ravel().copy()


def cp_rel(r, src, dst):
    P = product2(opposite2(src), dst)
    return cp_state(transpose_to_state(r, src, dst), P)


def is_closed_subset(f, S):
    """S contains the identities at both ends of its members, their inverses, and their composites."""
    S = _as_mask(S, f.n)
    defined = f.M.any(axis=2)
    iota = involution(f).m
    for a in np.flatnonzero(S):
        for x in f.unit_elements:
            if (defined[a, x] or defined[x, a]) and not S[x]:
                return False
        if not np.all(S[iota[a]]):
            return False
    prods = f.M[np.ix_(S, S)].any(axis=(0, 1))
    return bool(np.all(S[prods]))


def is_subgroupoid(r, src, dst):
    return is_closed_subset(product2(opposite2(src), dst), transpose_to_state(r, src, dst))


# -- morphisms and representability -------------------------------------------


def frob2_morphism_check(f, src, dst, unital=False):
    mult = fr.compose(src.mu, f) == fr.compose(fr.tensor(f, f), dst.mu)
    inv = fr.compose(f, involution(dst)) == fr.compose(involution(src), f)
    if not (mult and inv):
        return False
    return fr.compose(src.eta, f) == dst.eta if unital else True


@dataclass(frozen=True)
class Representation:
    i: FinRel  # A -> X* (x) X, an isometry
    pants: Frob2


def representability(f):
    rep = check_frob2(f)
    require(rep, kernels.FROB2_FLAGS, "representability")
    if not is_symmetric(f):
        raise AxiomError("representability", ["symmetric"])
    n = f.n
    P = pants2(f.A)
    # bend the left input of mu upwards: x -> {(a, c) | c in a*x}
    i = f.M.transpose(1, 0, 2).reshape(n, n * n)
    emb = FinRel(f.obj, P.obj, i)
    if not fr.is_isometry(emb):
        raise RuntimeError("bent multiplication is not an isometry")
    return Representation(emb, P)
