from itertools import product

import numpy as np
import pytest

from frobrel import bridges, catalog
from frobrel import finrel as fr
from frobrel._report import AxiomError
from frobrel.bridges import (
    L_on_morphisms,
    check_envelope,
    envelope,
    envelope_target,
    special_normal_equivalences,
    split_construction,
    three_to_two,
    two_to_three,
    universal_factorization,
)
from frobrel.finrel import FinRel
from frobrel.frob2 import (
    check_frob2,
    frob2_morphism_check,
    frob2_to_groupoid,
    is_symmetric,
    isomorphism,
    product2,
)
from frobrel.frob3 import Frob3, check_frob3, connector_to_frob3, frob3_morphism_check, unit_candidates

Z2, Z3, Z4 = catalog.cyclic(2), catalog.cyclic(3), catalog.cyclic(4)


def test_two_to_three_examples():
    assert two_to_three(Z2) == catalog.ternary_cyclic(2)
    assert two_to_three(Z3) == catalog.T3()
    d = two_to_three(catalog.discrete(2))
    assert set(d.quads()) == {(0, 0, 0, 0), (1, 1, 1, 1)}
    g = catalog.indiscrete_groupoid(2)
    t = two_to_three(catalog.pair_groupoid(2))
    inv, comp = g.i, g.comp
    expected = set()
    for x, y, z in product(range(4), repeat=3):
        yz = comp.get((inv[y], z))
        if yz is not None and (x, yz) in comp:
            expected.add((x, y, z, comp[(x, yz)]))
    assert set(t.quads()) == expected
    with pytest.raises(AxiomError):
        two_to_three(catalog.pants2(2).__class__(Z2.A, np.zeros((2, 2, 2), bool), np.zeros(2, bool)))


def test_three_to_two_examples():
    T3 = catalog.T3()
    assert three_to_two(T3, [0]) == Z3
    f = three_to_two(T3, [1])
    assert all(f.M[a, b, (a - 1 + b) % 3] for a, b in product(range(3), repeat=2))
    assert f.M.sum() == 9 and f.unit_elements == [1]
    s3 = catalog.symmetric3()
    assert three_to_two(two_to_three(s3), s3.unit_elements) == s3
    with pytest.raises(AxiomError, match="unital"):
        three_to_two(T3, [0, 1])


def test_roundtrips_on_suites():
    from frobrel.search import sweep_roundtrips

    rep = sweep_roundtrips(catalog.curated_frob2(), catalog.curated_frob3())
    assert rep.ok, rep.details["failures"]
    assert rep.details["checked"] > 20


def test_special_normal_equivalences():
    assert special_normal_equivalences(catalog.T3(), [0]).ok
    for f in catalog.curated_frob2().values():
        assert special_normal_equivalences(two_to_three(f), f.unit_elements).ok
    # a unital structure that is not normal: the four flags agree on false
    from frobrel.kernels import frob3_flags, unpack_codes

    L = unpack_codes(np.arange(1 << 16), (2, 2, 2, 2))
    flags = frob3_flags(L)
    seen = set()
    for x in L[flags[:, 0] & flags[:, 1]]:
        t = Frob3(Z2.A, x)
        for E in unit_candidates(t):
            seen.add(tuple(special_normal_equivalences(t, E).values()))
    assert seen == {(True,) * 4, (False,) * 4}


def test_split_examples():
    res = split_construction(catalog.T3())
    assert res.L.size == 3
    assert isomorphism(res.two_structure, Z3) is not None
    for cls in res.classes():
        assert len({(z - y) % 3 for y, z in cls}) == 1
    assert fr.compose(res.i, fr.dagger(res.i)) == fr.identity(res.L)
    # Tproj: S is the diagonal and every (y, y) lands in one class
    res = split_construction(catalog.Tproj(2))
    assert res.classes() == [[(0, 0), (1, 1)]]
    assert check_frob2(res.two_structure).ok
    res = split_construction(two_to_three(Z2))
    assert isomorphism(res.two_structure, Z2) is not None


def test_split_of_lift_is_isomorphic():
    for f in catalog.curated_frob2().values():
        assert check_frob2(f).ok and is_symmetric(f)
        assert isomorphism(split_construction(two_to_three(f)).two_structure, f) is not None


def test_split_special_iff_right_idempotent():
    for t in catalog.curated_frob3().values():
        rep = check_frob3(t)
        if rep.left_idempotent and rep.dagger_symmetric:
            f = split_construction(t).two_structure
            frep = check_frob2(f)
            assert frep.F1_unit_left and frep.F2_unit_right and frep.F3_assoc and frep.F5_frobenius
            assert is_symmetric(f)
            assert frep.F4_special == rep.right_idempotent


def hom_sizes(g):
    k = g.C0.size
    counts = np.zeros((k, k), dtype=int)
    for a in range(g.C1.size):
        counts[g.s[a], g.t[a]] += 1
    return counts


def test_envelope_z2():
    env = envelope(catalog.ternary_cyclic(2))
    assert env.E.size == 8
    g = frob2_to_groupoid(env.two_structure)
    assert g.C0.size == 2 and (hom_sizes(g) == 2).all()
    assert isomorphism(env.two_structure, product2(Z2, catalog.pair_groupoid(2))) is not None
    assert check_envelope(env).ok


def test_envelope_sizes():
    tproj = envelope(catalog.Tproj(2))
    blocks = {tag: len(tproj.block(tag)) for tag in bridges.TAGS}
    assert tproj.E.size == blocks["Q_l"] + blocks["Q_r"] + 4 == 9
    triv = envelope(connector_to_frob3(catalog.trivial_connector(2)))
    assert triv.E.size == 8
    assert len(triv.block("Q_l")) == len(triv.block("Q_r")) == 2
    for env in (tproj, triv):
        assert check_envelope(env).ok


def test_envelope_on_normal_suite():
    from frobrel.search import enumerate_connectors

    suite = [connector_to_frob3(c) for n in (1, 2, 3) for c in enumerate_connectors(n).survivors]
    suite += [catalog.T3(), catalog.Tproj(3), catalog.coset_Z4()[0]]
    for t in suite:
        env = envelope(t)
        rep = check_envelope(env)
        assert rep.ok, rep.failed()
        frob2_to_groupoid(env.two_structure)
        # units are exactly the diagonal classes
        assert not env.two_structure.U[env.offsets["A-"] :].any()


def test_envelope_requires_normal():
    with pytest.raises(AxiomError, match="normal"):
        envelope(catalog.full_lambda(2))


def test_universal_factorization_identity():
    for t in (catalog.ternary_cyclic(2), catalog.T3(), catalog.Tproj(2)):
        env = envelope(t)
        f = universal_factorization(env, envelope_target(env), fr.identity(t.obj))
        assert f == fr.identity(env.E)


def test_universal_factorization_coset():
    sub, inc = catalog.coset_Z4()
    z4 = catalog.ternary_cyclic(4)
    big = envelope(z4)
    env = envelope(sub)
    target = (big.two_structure, big.kappa, z4)
    f = universal_factorization(env, target, inc)
    rep = bridges.check_factorization(env, target, inc, f)
    assert rep.ok
    assert fr.compose_all(env.kappa, f, fr.dagger(big.kappa)) == inc
    assert frob2_morphism_check(f, env.two_structure, big.two_structure)


def test_universal_factorization_rejects_bad_target():
    # Z/4 sitting in itself is a sub-3-structure, but its products are not empty
    sub, inc = catalog.coset_Z4()
    env = envelope(sub)
    with pytest.raises(AxiomError, match="target_products_empty"):
        universal_factorization(env, (Z4, fr.identity(Z4.A), two_to_three(Z4)), inc)


def test_L_on_morphisms():
    t4, t2 = two_to_three(Z4), two_to_three(Z2)
    s4, s2 = split_construction(t4), split_construction(t2)
    assert L_on_morphisms(fr.identity(t4.obj), s4, s4) == fr.identity(s4.L)
    q = FinRel.from_function(Z4.A, Z2.A, lambda a: a % 2)
    assert frob3_morphism_check(q, t4, t2)
    induced = L_on_morphisms(q, s4, s2)
    assert fr.is_map(induced)
    assert frob2_morphism_check(induced, s4.two_structure, s2.two_structure)
    zero = fr.zero(Z4.A, Z2.A)
    assert not L_on_morphisms(zero, s4, s2).m.any()
    # composition: Z4 -> Z4 (negation) then the quotient
    neg = FinRel.from_function(Z4.A, Z4.A, lambda a: (-a) % 4)
    both = L_on_morphisms(fr.compose(neg, q), s4, s2)
    assert both == fr.compose(L_on_morphisms(neg, s4, s4), induced)
