from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobrel import finrel as fr
from frobrel.finrel import FinRel, FinSet, Obj, ShapeError

A2 = FinSet("A", 2)
A3 = FinSet("B", 3)


def rel(src, dst, pairs):
    return FinRel.from_pairs(src, dst, pairs)


def all_relations(A):
    n = A.size
    for code in range(1 << (n * n)):
        m = np.array([(code >> k) & 1 for k in range(n * n)], dtype=bool).reshape(n, n)
        yield FinRel(A, A, m)


@st.composite
def relations(draw, src=None, dst=None, max_size=4):
    if src is None:
        src = FinSet("S", draw(st.integers(0, max_size)))
    if dst is None:
        dst = FinSet("T", draw(st.integers(0, max_size)))
    src, dst = fr.as_obj(src), fr.as_obj(dst)
    bits = draw(st.lists(st.booleans(), min_size=src.card * dst.card, max_size=src.card * dst.card))
    return FinRel(src, dst, np.array(bits, dtype=bool).reshape(src.card, dst.card))


def test_compose_examples():
    r = rel(A2, A2, [(0, 1)])
    assert fr.compose(fr.identity(A2), r) == r
    assert fr.compose(r, rel(A2, A2, [(1, 0)])).pairs() == {(0, 0)}
    R = rel(A2, A2, [(0, 0), (1, 0)])
    assert fr.compose(R, fr.dagger(R)).pairs() == set(product(range(2), repeat=2))


def test_compose_mismatch_names_boundaries():
    with pytest.raises(ShapeError, match="A.*B"):
        fr.compose(fr.identity(A2), fr.identity(A3))


def test_compose_ignores_polarity():
    r = FinRel(Obj.of(A2), Obj.of(A2, polarity="-"), np.eye(2, dtype=bool))
    assert fr.compose(r, fr.identity(A2)).pairs() == {(0, 0), (1, 1)}


def test_dagger_examples():
    assert fr.dagger(fr.identity(A3)) == fr.identity(A3)
    assert fr.dagger(rel(A2, A2, [(0, 1)])).pairs() == {(1, 0)}


def test_cup_and_snakes():
    assert fr.cup(A2).pairs() == {(0, 0), (0, 3)}
    for n in range(7):
        A = FinSet("X", n)
        Ob = Obj.of(A)
        # (cap (x) id) . (id (x) cup) = id, and the mirrored snake
        left = fr.compose(fr.tensor(fr.identity(Ob), fr.cup(A)), fr.tensor(fr.cap(A), fr.identity(Ob)))
        right = fr.compose(fr.tensor(fr.cup_swapped(A), fr.identity(Ob)), fr.tensor(fr.identity(Ob), fr.cap_swapped(A)))
        assert left.m.tolist() == np.eye(n, dtype=bool).tolist()
        assert right.m.tolist() == np.eye(n, dtype=bool).tolist()


def test_union_zero_and_leq():
    r = rel(A3, A3, [(0, 1), (2, 2)])
    assert fr.union(r, fr.zero(A3, A3)) == r
    assert fr.is_leq(fr.zero(A3, A3), r)
    assert not fr.is_leq(r, fr.identity(A3))


def test_biproduct():
    obj, inj = fr.biproduct([Obj.of(A2)])
    assert obj == Obj.of(A2) and inj[0] == fr.identity(A2)
    obj, (k1, k2) = fr.biproduct([Obj.of(A2), Obj.of(A3)])
    assert obj.card == 5
    assert k1.pairs() == {(0, 0), (1, 1)}
    assert k2.pairs() == {(0, 2), (1, 3), (2, 4)}
    for k in (k1, k2):
        assert fr.is_isometry(k)
    assert not fr.compose(k1, fr.dagger(k2)).m.any()
    total = fr.union(fr.compose(fr.dagger(k1), k1), fr.compose(fr.dagger(k2), k2))
    assert total == fr.identity(obj)


def test_relation_properties_examples():
    p = fr.relation_properties(fr.identity(A3))
    assert all(p.as_dict().values())
    p = fr.relation_properties(rel(A2, A2, [(0, 1), (1, 0)]))
    assert p.symmetric and not p.reflexive and not p.transitive
    p = fr.relation_properties(rel(A3, A3, [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)]))
    assert not p.difunctional


def _four_premise(m):
    n = len(m)
    return all(
        m[a, d] for a, b, c, d in product(range(n), repeat=4) if m[a, b] and m[c, b] and m[c, d]
    )


def test_difunctional_versus_goursat_identity():
    # difunctional is the four-premise law; R^t R R^t R = R^t R is strictly weaker
    counts = {}
    for n in (1, 2, 3):
        both = goursat_only = 0
        for r in all_relations(FinSet("X", n)):
            p = fr.relation_properties(r)
            assert p.difunctional == _four_premise(r.m)
            assert not p.difunctional or p.goursat_identity
            both += p.difunctional
            goursat_only += p.goursat_identity and not p.difunctional
        counts[n] = (both, goursat_only)
    assert counts == {1: (2, 0), 2: (12, 4), 3: (128, 294)}


def _partition(n, blocks):
    pairs = [(a, b) for blk in blocks for a in blk for b in blk]
    return rel(FinSet("P", n), FinSet("P", n), pairs)


def test_goursat_chain_check():
    R = _partition(5, [[0, 1], [2], [3, 4]])
    S = _partition(5, [[0], [1, 2], [3], [4]])
    assert fr.goursat_chain_check(R, R)
    assert fr.goursat_chain_check(fr.identity(R.src), S)
    # S.R.S joins 0..2, R.S.R as well; 3,4 stay together either way
    srs = fr.compose_all(S, R, S)
    rsr = fr.compose_all(R, S, R)
    assert srs == rsr
    assert fr.goursat_chain_check(R, S) is True
    with pytest.raises(ValueError):
        fr.goursat_chain_check(rel(A2, A2, [(0, 1)]), fr.identity(A2))


def test_goursat_chain_failure():
    # two partitions of a 4-set whose joins need three steps
    R = _partition(4, [[0, 1], [2, 3]])
    S = _partition(4, [[0], [1, 2], [3]])
    assert not fr.goursat_chain_check(R, S)


def test_dagger_split_examples():
    L, i = fr.dagger_split(fr.identity(A3))
    assert L.size == 3 and i.m.tolist() == np.eye(3, dtype=bool).tolist()
    L, i = fr.dagger_split(rel(A2, A2, list(product(range(2), repeat=2))))
    assert L.size == 1
    p = rel(A3, A3, [(0, 0), (0, 1), (1, 0), (1, 1)])
    L, i = fr.dagger_split(p)
    assert L.size == 1 and i.pairs() == {(0, 0), (0, 1)}
    with pytest.raises(ValueError):
        fr.dagger_split(rel(A2, A2, [(0, 1)]))


def test_dagger_split_all_pers():
    for r in all_relations(A3):
        p = fr.relation_properties(r)
        if not (p.symmetric and p.transitive):
            continue
        L, i = fr.dagger_split(r)
        assert fr.compose(fr.dagger(i), i) == r
        assert fr.compose(i, fr.dagger(i)) == fr.identity(L)


def test_permute_and_swap():
    s = fr.swap(Obj.of(A2), Obj.of(A3))
    assert s.dst == Obj.of(A3, A2)
    assert fr.compose(s, fr.swap(Obj.of(A3), Obj.of(A2))) == fr.identity(Obj.of(A2, A3))
    with pytest.raises(ShapeError):
        fr.permute(Obj.of(A2, A3), (0, 0))


def test_factorize_map():
    f = FinRel.from_function(A3, A3, lambda a: [2, 2, 0][a])
    im, e, m = fr.factorize(f)
    assert im.card == 2
    assert fr.compose(e, m) == f
    assert fr.is_isometry(m)


def test_shapes_and_labels():
    with pytest.raises(ShapeError):
        FinRel(A2, A3, np.zeros((2, 2), dtype=bool))
    with pytest.raises(ValueError):
        FinSet("X", 2, ("a", "a"))
    X = FinSet("X", 2, ("p", "q"))
    assert X.index("q") == 1 and X.label(0) == "p"
    assert FinSet("Y", 2, ("0", "1")).labels is None
    assert fr.I.card == 1


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_composition_associative_and_unital(data):
    sizes = [data.draw(st.integers(0, 4)) for _ in range(4)]
    sets = [FinSet(f"S{k}", n) for k, n in enumerate(sizes)]
    r = data.draw(relations(sets[0], sets[1]))
    s = data.draw(relations(sets[1], sets[2]))
    t = data.draw(relations(sets[2], sets[3]))
    assert fr.compose(fr.compose(r, s), t) == fr.compose(r, fr.compose(s, t))
    assert fr.compose(fr.identity(sets[0]), r) == r == fr.compose(r, fr.identity(sets[1]))
    assert fr.dagger(fr.compose(r, s)) == fr.compose(fr.dagger(s), fr.dagger(r))


@settings(max_examples=60, deadline=None)
@given(relations(max_size=3), relations(max_size=3))
def test_dagger_monoidal(r, s):
    assert fr.dagger(fr.dagger(r)) == r
    assert fr.dagger(fr.tensor(r, s)) == fr.tensor(fr.dagger(r), fr.dagger(s))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_union_laws(data):
    A, B, C = FinSet("A", 3), FinSet("B", 2), FinSet("C", 3)
    r, s, t = (data.draw(relations(A, B)) for _ in range(3))
    u = data.draw(relations(B, C))
    assert fr.union(r, r) == r
    assert fr.union(r, s) == fr.union(s, r)
    assert fr.union(fr.union(r, s), t) == fr.union(r, fr.union(s, t))
    assert fr.compose(fr.union(r, s), u) == fr.union(fr.compose(r, u), fr.compose(s, u))
