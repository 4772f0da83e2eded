"""Relations between finite sets as boolean matrices.

Objects are tensor words of finite sets. Each factor carries a polarity
("+" for A, "-" for A*); polarity is only consulted by the diagram
typechecker, since A* = A as far as relations go. Elements of a tensor
word are encoded row-major (mixed radix), so (a, b) in A x B is a*|B| + b.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import kernels

PLUS = "+"
MINUS = "-"


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class FinSet:
    name: str
    size: int
    labels: tuple = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"negative size for {self.name}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.size or len(set(labels)) != self.size:
                raise ValueError(f"{self.name}: labels must be {self.size} distinct names")
            # labels that merely repeat the indices carry no information
            if labels == tuple(map(str, range(self.size))):
                labels = None
            object.__setattr__(self, "labels", labels)

    def index(self, x):
        """Element index from an int or a label."""
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.size:
                raise IndexError(f"{x} out of range for {self.name} (size {self.size})")
            return int(x)
        if self.labels and x in self.labels:
            return self.labels.index(x)
        raise KeyError(f"{x!r} is not an element of {self.name}")

    def label(self, i):
        return self.labels[i] if self.labels else str(i)

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"FinSet({self.name!r}, {self.size})"


@dataclass(frozen=True)
class Obj:
    factors: tuple = ()

    def __post_init__(self):
        fs = tuple((s, p) for s, p in self.factors)
        for s, p in fs:
            if p not in (PLUS, MINUS):
                raise ValueError(f"bad polarity {p!r}")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def of(cls, *sets, polarity=PLUS):
        return cls(tuple((s, polarity) for s in sets))

    @property
    def sets(self):
        return tuple(s for s, _ in self.factors)

    @property
    def sizes(self):
        return tuple(s.size for s in self.sets)

    @property
    def polarities(self):
        return tuple(p for _, p in self.factors)

    @property
    def card(self):
        return int(np.prod(self.sizes, dtype=np.int64)) if self.factors else 1

    def __matmul__(self, other):
        return Obj(self.factors + other.factors)

    def dual(self):
        flip = {PLUS: MINUS, MINUS: PLUS}
        return Obj(tuple((s, flip[p]) for s, p in reversed(self.factors)))

    def encode(self, elem):
        if not self.factors:
            return 0
        if len(self.factors) == 1 and not isinstance(elem, tuple):
            return self.sets[0].index(elem)
        elem = tuple(elem)
        if len(elem) != len(self.factors):
            raise ShapeError(f"element {elem} does not fit {self}")
        idx = tuple(s.index(x) for s, x in zip(self.sets, elem))
        return int(np.ravel_multi_index(idx, self.sizes))

    def decode(self, k):
        if not self.factors:
            return ()
        return tuple(int(x) for x in np.unravel_index(k, self.sizes))

    def elements(self):
        return product(*(range(n) for n in self.sizes))

    def __repr__(self):
        if not self.factors:
            return "I"
        return " (x) ".join(s.name + ("*" if p == MINUS else "") for s, p in self.factors)


I = Obj()


def as_obj(x):
    if isinstance(x, Obj):
        return x
    if isinstance(x, FinSet):
        return Obj.of(x)
    raise TypeError(f"expected Obj or FinSet, got {type(x).__name__}")


class FinRel:
    """A relation src -|-> dst. The matrix is made read-only on construction."""

    __slots__ = ("src", "dst", "m")

    def __init__(self, src, dst, matrix):
        src, dst = as_obj(src), as_obj(dst)
        m = np.array(matrix, dtype=bool)
        if m.shape != (src.card, dst.card):
            raise ShapeError(f"matrix {m.shape} does not match {src} -> {dst} ({src.card}, {dst.card})")
        m.setflags(write=False)
        self.src, self.dst, self.m = src, dst, m

    @classmethod
    def from_pairs(cls, src, dst, pairs):
        src, dst = as_obj(src), as_obj(dst)
        m = np.zeros((src.card, dst.card), dtype=bool)
        for a, b in pairs:
            m[src.encode(a), dst.encode(b)] = True
        return cls(src, dst, m)

    @classmethod
    def from_function(cls, src, dst, f):
        src, dst = as_obj(src), as_obj(dst)
        m = np.zeros((src.card, dst.card), dtype=bool)
        for a in range(src.card):
            m[a, f(a)] = True
        return cls(src, dst, m)

    def pairs(self):
        return {(int(a), int(b)) for a, b in zip(*np.nonzero(self.m))}

    def __call__(self, a, b):
        return bool(self.m[self.src.encode(a), self.dst.encode(b)])

    @property
    def T(self):
        return dagger(self)

    def __eq__(self, other):
        if not isinstance(other, FinRel):
            return NotImplemented
        return (
            self.src.sets == other.src.sets
            and self.dst.sets == other.dst.sets
            and np.array_equal(self.m, other.m)
        )

    def __hash__(self):
        return hash((self.src.sets, self.dst.sets, self.m.tobytes()))

    def __repr__(self):
        shown = sorted(self.pairs())
        body = ", ".join(map(str, shown[:8])) + (", ..." if len(shown) > 8 else "")
        return f"FinRel({self.src} -> {self.dst}: {{{body}}})"


def _same_sets(x, y):
    return x.sets == y.sets


def compose(r, s):
    """s after r: (a, c) related iff some b has r(a, b) and s(b, c)."""
    if not _same_sets(r.dst, s.src):
        raise ShapeError(f"cannot compose {r.src} -> {r.dst} with {s.src} -> {s.dst}")
    return FinRel(r.src, s.dst, kernels.compose(r.m, s.m))


def compose_all(*rels):
    """Compose left to right: compose_all(f, g, h) = h after g after f."""
    out = rels[0]
    for r in rels[1:]:
        out = compose(out, r)
    return out


def dagger(r):
    return FinRel(r.dst, r.src, r.m.T)


def tensor(r, s):
    m = np.kron(r.m.astype(np.uint8), s.m.astype(np.uint8)).astype(bool)
    return FinRel(r.src @ s.src, r.dst @ s.dst, m)


def tensor_all(*rels):
    out = rels[0]
    for r in rels[1:]:
        out = tensor(out, r)
    return out


def identity(obj):
    obj = as_obj(obj)
    return FinRel(obj, obj, np.eye(obj.card, dtype=bool))


def zero(src, dst):
    src, dst = as_obj(src), as_obj(dst)
    return FinRel(src, dst, np.zeros((src.card, dst.card), dtype=bool))


def union(r, s):
    _check_parallel(r, s)
    return FinRel(r.src, r.dst, r.m | s.m)


def intersection(r, s):
    _check_parallel(r, s)
    return FinRel(r.src, r.dst, r.m & s.m)


def is_leq(r, s):
    _check_parallel(r, s)
    return bool(np.all(~r.m | s.m))


def _check_parallel(r, s):
    if not (_same_sets(r.src, s.src) and _same_sets(r.dst, s.dst)):
        raise ShapeError(f"relations are not parallel: {r.src} -> {r.dst} vs {s.src} -> {s.dst}")


def permute(obj, perm):
    """Re-indexing bijection obj -> obj' where factor k of obj' is factor perm[k] of obj."""
    obj = as_obj(obj)
    perm = tuple(perm)
    if sorted(perm) != list(range(len(obj.factors))):
        raise ShapeError(f"{perm} is not a permutation of {len(obj.factors)} factors")
    out = Obj(tuple(obj.factors[k] for k in perm))
    idx = np.arange(obj.card).reshape(obj.sizes or ())
    moved = np.transpose(idx, perm).ravel() if obj.factors else idx.ravel()
    m = np.zeros((obj.card, out.card), dtype=bool)
    m[moved, np.arange(out.card)] = True
    return FinRel(obj, out, m)


def swap(x, y):
    x, y = as_obj(x), as_obj(y)
    nx = len(x.factors)
    ny = len(y.factors)
    return permute(x @ y, tuple(range(nx, nx + ny)) + tuple(range(nx)))


def _diagonal(obj):
    """Relation I -> obj.dual() (x) obj relating * to (reversed x, x)."""
    obj = as_obj(obj)
    d = obj.dual()
    target = d @ obj
    m = np.zeros((1, target.card), dtype=bool)
    k = len(obj.factors)
    for elem in obj.elements():
        m[0, target.encode(tuple(reversed(elem)) + tuple(elem))] = True
    return FinRel(I, target, m)


def cup(A):
    """eta: I -> A* (x) A, the diagonal state."""
    return _diagonal(A)


def cup_swapped(A):
    """eta': I -> A (x) A*."""
    return _diagonal(as_obj(A).dual())


def cap(A):
    """epsilon: A (x) A* -> I."""
    return dagger(cup_swapped(A))


def cap_swapped(A):
    """epsilon': A* (x) A -> I."""
    return dagger(cup(A))


def subset_state(obj, members):
    """The state I -> obj picking out a subset (given as a boolean vector or indices)."""
    obj = as_obj(obj)
    v = np.zeros(obj.card, dtype=bool)
    members = np.asarray(members)
    if members.dtype == bool:
        v[:] = members
    else:
        v[members.astype(int)] = True
    return FinRel(I, obj, v[None, :])


def is_map(r):
    """Total and single-valued."""
    return bool(np.all(r.m.sum(axis=1) == 1))


def as_function(r):
    if not is_map(r):
        raise ValueError("relation is not the graph of a function")
    return tuple(int(j) for j in r.m.argmax(axis=1))


def is_isometry(r):
    """dagger(r) . r = id on the source, i.e. compose(r, dagger(r)) is the identity."""
    return compose(r, dagger(r)) == identity(r.src)


def biproduct(objs):
    """Disjoint union of carriers together with the injections."""
    objs = [as_obj(o) for o in objs]
    if len(objs) == 1:
        return objs[0], [identity(objs[0])]
    total = sum(o.card for o in objs)
    name = "+".join(repr(o) for o in objs)
    out = Obj.of(FinSet(f"({name})", total))
    injections = []
    offset = 0
    for o in objs:
        m = np.zeros((o.card, total), dtype=bool)
        m[np.arange(o.card), offset + np.arange(o.card)] = True
        injections.append(FinRel(o, out, m))
        offset += o.card
    return out, injections


def factorize(r):
    """Image factorization of a map r = m . e with e surjective, m injective."""
    f = as_function(r)
    image = sorted(set(f))
    im = Obj.of(FinSet(f"im({r.src!r})", len(image)))
    pos = {b: k for k, b in enumerate(image)}
    e = FinRel.from_function(r.src, im, lambda a: pos[f[a]])
    mono = FinRel.from_function(im, r.dst, lambda k: image[k])
    return im, e, mono


@dataclass(frozen=True)
class RelationReport:
    reflexive: bool
    symmetric: bool
    transitive: bool
    equivalence: bool
    single_valued: bool
    total: bool
    difunctional: bool
    goursat_identity: bool

    def as_dict(self):
        return dict(self.__dict__)


def relation_properties(r):
    """Quantifier-level checks. The first four flags need an endo-relation."""
    m = r.m
    endo = _same_sets(r.src, r.dst)
    if endo:
        comp = kernels.compose(m, m)
        reflexive = bool(np.all(np.diag(m)))
        symmetric = bool(np.array_equal(m, m.T))
        transitive = bool(np.all(~comp | m))
    else:
        reflexive = symmetric = transitive = False
    kernel = kernels.compose(m, m.T)  # (a, c) iff a and c share an image
    rrr = kernels.compose(kernel, m)
    return RelationReport(
        reflexive=reflexive,
        symmetric=symmetric,
        transitive=transitive,
        equivalence=reflexive and symmetric and transitive,
        single_valued=bool(np.all(m.sum(axis=1) <= 1)),
        total=bool(np.all(m.any(axis=1))),
        difunctional=bool(np.all(~rrr | m)),
        goursat_identity=bool(np.array_equal(kernels.compose(kernel, kernel), kernel)),
    )


def _require_equivalence(r, what):
    p = relation_properties(r)
    if not p.equivalence:
        raise ValueError(f"{what} is not an equivalence relation")


def goursat_chain_check(R, S):
    _require_equivalence(R, "R")
    _require_equivalence(S, "S")
    return compose_all(S, R, S) == compose_all(R, S, R)


def dagger_split(p):
    """Split a symmetric transitive relation through its classes.

    Returns (L, i) with i: L -> A relating each class to its members, so that
    compose(i, dagger(i)) is id_L and compose(dagger(i), i) is p.
    """
    props = relation_properties(p)
    if not (props.symmetric and props.transitive):
        raise ValueError("dagger_split needs a symmetric and transitive relation")
    m = p.m
    seen = np.zeros(len(m), dtype=bool)
    classes = []
    for a in range(len(m)):
        if m[a, a] and not seen[a]:
            members = np.flatnonzero(m[a])
            seen[members] = True
            classes.append(members)
    L = FinSet(f"{_carrier_name(p.src)}/~", len(classes))
    i = np.zeros((len(classes), p.src.card), dtype=bool)
    for k, members in enumerate(classes):
        i[k, members] = True
    return L, FinRel(Obj.of(L), p.src, i)


def _carrier_name(obj):
    return repr(obj).replace(" ", "")
