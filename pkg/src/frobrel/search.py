"""Enumeration oracles and counterexample searches.

Counts are of labeled structures on the carrier {0, ..., n-1}. Raw scans
decode candidate k from its bits (bit j is flat index j of the array).
"""

import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import kernels
from ._report import Report
from .finrel import FinRel, FinSet, Obj
from .frob2 import (
    Frob2,
    brute_force_factorization,
    check_groupoid,
    check_frob2,
    cp_state,
    frob2_to_groupoid,
    groupoid_to_frob2,
    is_closed_subset,
    is_symmetric,
    make_groupoid,
)
from .frob3 import (
    Connector,
    Frob3,
    check_connector,
    check_frob3,
    connector_to_frob3,
    frob3_to_connector,
    unit_candidates,
)

CHUNK = 1 << 16


@dataclass
class EnumReport:
    kind: str
    n: int
    space: int
    survivors: list = field(repr=False)
    strategy: str = "raw"
    seconds: float = 0.0

    @property
    def count(self):
        return len(self.survivors)

    def as_dict(self):
        return {
            "kind": self.kind,
            "size": self.n,
            "strategy": self.strategy,
            "candidate_space": self.space,
            "count": self.count,
            "seconds": round(self.seconds, 3),
        }


class SearchTooLarge(ValueError):
    pass


# -- binary structures ---------------------------------------------------------


def enumerate_frob2(n, strategy="auto"):
    """All (M, U) on n elements passing F1-F5."""
    start = time.perf_counter()
    if strategy == "auto":
        strategy = "raw" if n <= 2 else "single-valued"
    A = FinSet(f"C{n}", n)
    if strategy == "raw":
        if n > 2:
            raise SearchTooLarge("raw binary scan is capped at n = 2")
        bits = n**3 + n
        space = 1 << bits
        codes = np.arange(space, dtype=np.int64)
        M = kernels.unpack_codes(codes >> n, (n, n, n))
        U = kernels.unpack_codes(codes & ((1 << n) - 1), (n,))
        ok = kernels.frob2_flags(M, U).all(axis=1)
        survivors = [Frob2(A, M[k], U[k]) for k in np.flatnonzero(ok)]
    elif strategy == "single-valued":
        if n > 3:
            raise SearchTooLarge("single-valued binary scan is capped at n = 3")
        # every cell is empty or one element; speciality forces this
        cells = n * n
        space = (n + 1) ** cells * (1 << n)
        survivors = []
        digits = (n + 1) ** np.arange(cells, dtype=np.int64)
        for lo in range(0, (n + 1) ** cells, CHUNK):
            codes = np.arange(lo, min(lo + CHUNK, (n + 1) ** cells), dtype=np.int64)
            vals = (codes[:, None] // digits) % (n + 1)  # value n means empty
            M = np.zeros((len(codes), cells, n + 1), dtype=bool)
            np.put_along_axis(M, vals[:, :, None], True, axis=2)
            M = np.ascontiguousarray(M[:, :, :n].reshape(len(codes), n, n, n))
            for u in range(1 << n):
                U = np.broadcast_to(kernels.unpack_codes([u], (n,)), (len(codes), n))
                ok = kernels.frob2_flags(M, np.ascontiguousarray(U)).all(axis=1)
                survivors += [(int(codes[k]), u, M[k]) for k in np.flatnonzero(ok)]
        survivors.sort(key=lambda s: (s[0], s[1]))
        survivors = [Frob2(A, m, kernels.unpack_codes([u], (n,))[0]) for _, u, m in survivors]
    else:
        raise ValueError(f"unknown strategy {strategy}")
    return EnumReport("frob2", n, space, survivors, strategy, time.perf_counter() - start)


def enumerate_groupoids(n):
    """All labeled groupoids with morphisms {0..n-1}, by backtracking on the axioms."""
    if n > 6:
        raise SearchTooLarge("groupoid enumeration is capped at 6 morphisms")
    start = time.perf_counter()
    found = []
    space = 0
    for umask in range(1 << n):
        units = [x for x in range(n) if (umask >> x) & 1]
        k = len(units)
        if n and not k:
            continue
        rest = [a for a in range(n) if a not in units]
        for ends in product(range(k * k), repeat=len(rest)):
            space += 1
            s = [0] * n
            t = [0] * n
            for j, x in enumerate(units):
                s[x] = t[x] = j
            for a, e in zip(rest, ends):
                t[a], s[a] = divmod(e, k)
            if not _hom_sizes_ok(s, t, k):
                continue
            for comp in _compositions(n, s, t, units):
                inv = _inverses(n, comp, s, t, units)
                if inv is None:
                    continue
                g = make_groupoid(k, n, s, t, units, inv, comp, name=f"C{n}")
                if check_groupoid(g).ok:
                    found.append(g)
    found.sort(key=_groupoid_key)
    return EnumReport("groupoid", n, space, found, "backtracking", time.perf_counter() - start)


def _groupoid_key(g):
    return (g.u, g.s, g.t, g.m)


def _hom_sizes_ok(s, t, k):
    # every non-empty hom-set of a groupoid has the size of the endomorphism sets at its ends
    size = np.zeros((k, k), dtype=int)
    for a in range(len(s)):
        size[t[a], s[a]] += 1
    for x, y in product(range(k), repeat=2):
        if size[x, y] and (size[x, y] != size[x, x] or size[x, y] != size[y, y]):
            return False
        if size[x, y] and not size[y, x]:
            return False
    return True


def _compositions(n, s, t, units):
    """Yield complete composition tables (dict) satisfying unit laws, cancellation and associativity."""
    unit_of = {j: x for j, x in enumerate(units)}
    comp = -np.ones((n, n), dtype=int)
    composable = np.zeros((n, n), dtype=bool)
    for a, b in product(range(n), repeat=2):
        if s[a] == t[b]:
            composable[a, b] = True
    unitset = set(units)
    for a in range(n):
        comp[a, unit_of[s[a]]] = a
        comp[unit_of[t[a]], a] = a
    cells = [(a, b) for a, b in zip(*np.nonzero(composable)) if a not in unitset and b not in unitset]
    hom = {}
    for c in range(n):
        hom.setdefault((t[c], s[c]), []).append(c)

    def assoc_ok():
        ab = comp
        x, y, z = np.nonzero(composable[:, :, None] & composable[None, :, :])
        xy, yz = ab[x, y], ab[y, z]
        known = (xy >= 0) & (yz >= 0)
        lhs = ab[xy[known], z[known]]
        rhs = ab[x[known], yz[known]]
        both = (lhs >= 0) & (rhs >= 0)
        return bool(np.all(lhs[both] == rhs[both]))

    def go(k):
        if k == len(cells):
            yield {(int(a), int(b)): int(comp[a, b]) for a, b in zip(*np.nonzero(composable))}
            return
        a, b = cells[k]
        for c in hom[(t[a], s[b])]:
            # cancellation: a . - and - . b are injective
            row = comp[a][composable[a]]
            col = comp[:, b][composable[:, b]]
            if c in row or c in col:
                continue
            comp[a, b] = c
            if assoc_ok():
                yield from go(k + 1)
            comp[a, b] = -1

    yield from go(0)


def _inverses(n, comp, s, t, units):
    inv = []
    for a in range(n):
        cands = [
            b
            for b in range(n)
            if comp.get((a, b)) == units[t[a]] and comp.get((b, a)) == units[s[a]]
        ]
        if len(cands) != 1:
            return None
        inv.append(cands[0])
    return inv


# -- ternary structures ----------------------------------------------------------

NORMAL_FLAGS = ("assoc", "dagger_symmetric", "normal")


def enumerate_frob3(n, require=NORMAL_FLAGS, strategy="auto"):
    require = tuple(require)
    if strategy == "auto":
        strategy = "raw" if n <= 2 else "partial-operation"
    start = time.perf_counter()
    A = FinSet(f"C{n}", n)
    idx = [kernels.FROB3_FLAGS.index(r) for r in require]
    if strategy == "raw":
        if n > 2:
            raise SearchTooLarge("raw ternary scan is capped at n = 2")
        space = 1 << n**4
        survivors = []
        for lo in range(0, space, CHUNK):
            L = kernels.unpack_codes(np.arange(lo, min(lo + CHUNK, space)), (n,) * 4)
            ok = kernels.frob3_flags(L)[:, idx].all(axis=1)
            survivors += [Frob3(A, L[k]) for k in np.flatnonzero(ok)]
    elif strategy == "partial-operation":
        if not set(NORMAL_FLAGS) <= set(require):
            raise ValueError("the partial-operation strategy needs assoc, dagger_symmetric and normal")
        if n > 3:
            raise SearchTooLarge("partial-operation ternary scan is capped at n = 3")
        leaves = list(_symmetric_partial_ops(n))
        space = len(leaves)
        survivors = []
        for lo in range(0, len(leaves), CHUNK):
            L = np.array(leaves[lo : lo + CHUNK], dtype=bool).reshape((-1,) + (n,) * 4)
            ok = kernels.frob3_flags(L)[:, idx].all(axis=1)
            survivors += [Frob3(A, L[k]) for k in np.flatnonzero(ok)]
        survivors.sort(key=lambda t: kernels.pack_array(t.L))
    else:
        raise ValueError(f"unknown strategy {strategy}")
    return EnumReport("frob3", n, space, survivors, strategy, time.perf_counter() - start)


def _klein_orbit(x, y, z, u):
    return [(x, y, z, u), (u, z, y, x), (y, x, u, z), (z, u, x, y)]


def _symmetric_partial_ops(n):
    """Single-valued incidences closed under the dagger symmetries with loop-free legs.

    Each triple (x, y, z) gets one value or none; choosing u for it also
    fixes the triples of the other three quadruples in its symmetry orbit.
    Normality forbids Lambda(y, y, z, u) for z != u and Lambda(x, y, y, u)
    for x != u, which prunes the choices before any full check.
    """
    NONE = -1
    UNSET = -2
    val = {tr: UNSET for tr in product(range(n), repeat=3)}
    order = sorted(val)

    def allowed(x, y, z, u):
        if x == y and z != u:
            return False
        if y == z and x != u:
            return False
        return True

    def assign(q, trail):
        for a, b, c, d in _klein_orbit(*q):
            if not allowed(a, b, c, d):
                return False
            cur = val[(a, b, c)]
            if cur == UNSET:
                val[(a, b, c)] = d
                trail.append((a, b, c))
            elif cur != d:
                return False
        return True

    def go(k):
        while k < len(order) and val[order[k]] != UNSET:
            k += 1
        if k == len(order):
            L = np.zeros((n,) * 4, dtype=bool)
            for (x, y, z), u in val.items():
                if u >= 0:
                    L[x, y, z, u] = True
            yield L
            return
        tr = order[k]
        for u in [NONE] + list(range(n)):
            trail = []
            if u == NONE:
                val[tr] = NONE
                trail.append(tr)
                ok = True
            else:
                ok = assign(tr + (u,), trail)
            if ok:
                yield from go(k + 1)
            for t in trail:
                val[t] = UNSET

    yield from go(0)


def set_partitions(n):
    """Equivalence relations on range(n) as boolean matrices, in restricted-growth order."""

    def rg(k, labels, top):
        if k == n:
            yield list(labels)
            return
        for lab in range(top + 2):
            labels.append(lab)
            yield from rg(k + 1, labels, max(top, lab))
            labels.pop()

    for labels in rg(0, [], -1):
        lab = np.array(labels, dtype=int)
        yield lab[:, None] == lab[None, :]


def enumerate_connectors(n):
    """All connectors on n elements: equivalence pairs (R, S) and a p-table, backtracking."""
    if n > 3:
        raise SearchTooLarge("connector enumeration is capped at n = 3")
    start = time.perf_counter()
    A = FinSet(f"C{n}", n)
    found = []
    space = 0
    for R in set_partitions(n):
        for S in set_partitions(n):
            dom = [(x, y, z) for x, y, z in product(range(n), repeat=3) if R[x, y] and S[y, z]]
            choices = []
            for x, y, z in dom:
                opts = [w for w in range(n) if S[x, w] and R[z, w]]
                if y == z:
                    opts = [w for w in opts if w == x]
                if x == y:
                    opts = [w for w in opts if w == z]
                choices.append(opts)
            space += int(np.prod([len(c) for c in choices], dtype=float))
            for p in _connector_tables(dom, choices):
                c = Connector(
                    A,
                    _rel(A, R),
                    _rel(A, S),
                    tuple(p.items()),
                )
                if check_connector(c).ok:
                    found.append(c)
    return EnumReport("connector", n, space, found, "backtracking", time.perf_counter() - start)


def _rel(A, m):
    return FinRel(Obj.of(A), Obj.of(A), m)


def _connector_tables(dom, choices):
    p = {}

    def go(k):
        if k == len(dom):
            yield dict(p)
            return
        key = dom[k]
        for w in choices[k]:
            p[key] = w
            if _assoc_partial(p):
                yield from go(k + 1)
            del p[key]

    yield from go(0)


def _assoc_partial(p):
    for (x, y, z), w in p.items():
        for (z2, u, v), inner in p.items():
            if z2 != z:
                continue
            left = p.get((w, u, v))
            right = p.get((x, y, inner))
            if left is not None and right is not None and left != right:
                return False
    return True


# -- counterexamples and sweeps ----------------------------------------------------


def find_cp_gap(g, max_codomain=10):
    """A completely positive subset of morphisms that is not a subgroupoid, or None.

    Subsets are scanned by increasing bitmask; a candidate is kept only when
    the brute-force factorization search confirms the CP verdict.
    """
    f = groupoid_to_frob2(g) if not isinstance(g, Frob2) else g
    n = f.n
    for mask in range(1 << n):
        R = np.array([(mask >> a) & 1 for a in range(n)], dtype=bool)
        rep = cp_state(R, f)
        if rep.is_cp and not is_closed_subset(f, R):
            if brute_force_factorization(rep.c_of_f, max_codomain) is None:
                raise RuntimeError("edge witness disagrees with brute-force factorization")
            return [int(a) for a in np.flatnonzero(R)]
    return None


def closure_failure(f, R):
    """An explicit reason a subset is not closed: ('unit', a, x), ('inverse', a, b) or ('product', a, b, c)."""
    R = np.asarray(R, dtype=bool)
    defined = f.M.any(axis=2)
    for a in np.flatnonzero(R):
        for x in f.unit_elements:
            if (defined[a, x] or defined[x, a]) and not R[x]:
                return ("unit", int(a), int(x))
    for a in np.flatnonzero(R):
        for b in range(f.n):
            if (f.M[a, b] & f.U).any() and not R[b]:
                return ("inverse", int(a), int(b))
    for a, b in product(np.flatnonzero(R), repeat=2):
        for c in np.flatnonzero(f.M[a, b]):
            if not R[c]:
                return ("product", int(a), int(b), int(c))
    return None


def subgroupoids(f):
    n = f.n
    out = []
    for mask in range(1 << n):
        R = np.array([(mask >> a) & 1 for a in range(n)], dtype=bool)
        if is_closed_subset(f, R):
            out.append(R)
    return out


def sweep_roundtrips(frob2_suite=(), frob3_suite=()):
    """Run every applicable converter pair; failures name the structure and the step."""
    from .bridges import three_to_two, two_to_three

    failures = []
    checked = 0
    for name, f in _named(frob2_suite):
        rep = check_frob2(f)
        if rep.ok:
            checked += 1
            g = frob2_to_groupoid(f)
            if groupoid_to_frob2(g) != f:
                failures.append((name, "frob2 -> groupoid -> frob2"))
            if frob2_to_groupoid(groupoid_to_frob2(g)) != g:
                failures.append((name, "groupoid -> frob2 -> groupoid"))
        if rep.F1_unit_left and rep.F2_unit_right and rep.F3_assoc and rep.F5_frobenius:
            if is_symmetric(f):
                checked += 1
                if three_to_two(two_to_three(f), f.unit_elements) != f:
                    failures.append((name, "frob2 -> frob3 -> frob2"))
    for name, t in _named(frob3_suite):
        rep = check_frob3(t)
        if rep.assoc and rep.dagger_symmetric and rep.normal:
            checked += 1
            c = frob3_to_connector(t)
            if connector_to_frob3(c) != t:
                failures.append((name, "frob3 -> connector -> frob3"))
            if frob3_to_connector(connector_to_frob3(c)) != c:
                failures.append((name, "connector -> frob3 -> connector"))
        if not (rep.assoc and rep.dagger_symmetric):
            continue
        for E in unit_candidates(t):
            checked += 1
            if two_to_three(three_to_two(t, E)) != t:
                failures.append((name, f"frob3 -> frob2(E={list(E)}) -> frob3"))
    return Report({"roundtrips": not failures}, failures=failures, checked=checked)


def _named(suite):
    if isinstance(suite, dict):
        return list(suite.items())
    return [(f"#{k}", s) for k, s in enumerate(suite)]
