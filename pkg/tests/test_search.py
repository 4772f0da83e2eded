import numpy as np
import pytest

from frobrel import catalog
from frobrel.frob2 import (
    brute_force_factorization,
    check_frob2,
    cp_state,
    frob2_to_groupoid,
    groupoid_to_frob2,
    is_closed_subset,
)
from frobrel.frob3 import check_connector, check_frob3, connector_to_frob3, frob3_to_connector
from frobrel.kernels import pack_array
from frobrel.search import (
    SearchTooLarge,
    closure_failure,
    enumerate_connectors,
    enumerate_frob2,
    enumerate_frob3,
    enumerate_groupoids,
    find_cp_gap,
    subgroupoids,
    sweep_roundtrips,
)


def test_frob2_counts():
    assert [enumerate_frob2(n).count for n in range(4)] == [1, 1, 3, 10]
    rep = enumerate_frob2(2)
    assert rep.space == 1024 and rep.strategy == "raw"
    assert set(rep.as_dict()) == {"kind", "size", "strategy", "candidate_space", "count", "seconds"}


def test_frob2_size2_survivors():
    # discrete on two objects, and Z/2 with either element as the unit
    units = sorted(tuple(f.unit_elements) for f in enumerate_frob2(2).survivors)
    assert units == [(0,), (0, 1), (1,)]


def test_frob2_strategies_agree():
    raw = enumerate_frob2(2, "raw").survivors
    pruned = enumerate_frob2(2, "single-valued").survivors
    key = lambda f: (pack_array(f.M), pack_array(f.U))  # noqa: E731
    assert sorted(map(key, raw)) == sorted(map(key, pruned))
    with pytest.raises(SearchTooLarge):
        enumerate_frob2(3, "raw")
    with pytest.raises(ValueError):
        enumerate_frob2(2, "guess")


def test_groupoid_counts_and_bijection():
    for n in range(4):
        fs = enumerate_frob2(n).survivors
        gs = enumerate_groupoids(n).survivors
        assert len(fs) == len(gs)
        assert sorted(map(repr, (frob2_to_groupoid(f) for f in fs))) == sorted(map(repr, gs))
        assert all(groupoid_to_frob2(g) in fs for g in gs)
    assert enumerate_groupoids(2).count == 3


def test_groupoids_on_four_morphisms():
    gs = enumerate_groupoids(4).survivors
    assert len(gs) == 65
    fs = [groupoid_to_frob2(g) for g in gs]
    assert all(check_frob2(f).ok for f in fs)
    assert len({(pack_array(f.M), pack_array(f.U)) for f in fs}) == 65
    assert all(frob2_to_groupoid(f) == g for f, g in zip(fs, gs))
    with pytest.raises(SearchTooLarge):
        enumerate_groupoids(7)


def test_frob3_and_connector_counts():
    assert enumerate_frob3(1).count == 1
    assert enumerate_frob3(2).count == enumerate_connectors(2).count == 4
    assert enumerate_frob3(3).count == enumerate_connectors(3).count == 13
    assert enumerate_connectors(1).count == 1


def test_frob3_strategies_agree():
    raw = enumerate_frob3(2, strategy="raw").survivors
    pruned = enumerate_frob3(2, strategy="partial-operation").survivors
    assert sorted(pack_array(t.L) for t in raw) == sorted(pack_array(t.L) for t in pruned)
    with pytest.raises(ValueError, match="partial-operation"):
        enumerate_frob3(3, require=("assoc",), strategy="partial-operation")
    with pytest.raises(SearchTooLarge):
        enumerate_frob3(3, strategy="raw")


def test_frob3_connector_bijection():
    for n in (2, 3):
        ts = enumerate_frob3(n).survivors
        cs = enumerate_connectors(n).survivors
        assert all(check_connector(c).ok for c in cs)
        assert sorted(pack_array(connector_to_frob3(c).L) for c in cs) == sorted(pack_array(t.L) for t in ts)
        for t in ts:
            assert connector_to_frob3(frob3_to_connector(t)) == t


def test_frob3_other_requirements():
    # the frozen size-2 counts for single flags
    assert enumerate_frob3(2, require=("assoc",)).count == 256
    assert enumerate_frob3(2, require=("dagger_symmetric",)).count == 128
    assert enumerate_frob3(2, require=("assoc", "dagger_symmetric")).count == 16


def test_find_cp_gap():
    Z4 = catalog.cyclic(4)
    w = find_cp_gap(Z4)
    assert w == [0, 1, 3]
    rep = cp_state(w, Z4)
    assert rep.is_cp and not is_closed_subset(Z4, w)
    assert brute_force_factorization(rep.c_of_f, 10) is not None
    # 1 + 1 = 2 leaves the subset
    assert closure_failure(Z4, np.isin(range(4), w)) == ("product", 1, 1, 2)
    assert find_cp_gap(catalog.cyclic(2)) is None
    assert find_cp_gap(catalog.cyclic(3)) is None
    assert find_cp_gap(frob2_to_groupoid(catalog.symmetric3())) == [0, 1, 2]


def test_cp_gap_witnesses_fail_closure():
    for f in catalog.curated_frob2().values():
        w = find_cp_gap(f)
        if w is not None:
            assert closure_failure(f, np.isin(range(f.n), w)) is not None


def test_subgroupoids_are_cp_and_closed():
    for name, f in catalog.curated_frob2().items():
        subs = subgroupoids(f)
        assert any(not s.any() for s in subs), name
        for s in subs:
            assert closure_failure(f, s) is None
            rep = cp_state(s, f)
            assert rep.is_cp
            assert brute_force_factorization(rep.c_of_f, 10) is not None


def test_sweep_roundtrips():
    rep = sweep_roundtrips(enumerate_frob2(2).survivors, enumerate_frob3(2, require=("assoc",)).survivors)
    assert rep.ok and rep.details["checked"] > 0
    rep = sweep_roundtrips(catalog.curated_frob2(), catalog.curated_frob3())
    assert rep.ok, rep.details["failures"]


def test_mutations_are_rejected():
    for f in catalog.curated_frob2().values():
        M = f.M.copy()
        M[0, 0] = ~M[0, 0]
        assert not check_frob2(type(f)(f.A, M, f.U)).ok
    for t in enumerate_frob3(2).survivors:
        L = t.L.copy()
        L[0, 0, 0, 0] = ~L[0, 0, 0, 0]
        rep = check_frob3(type(t)(t.A, L))
        assert not (rep.assoc and rep.dagger_symmetric and rep.normal)
