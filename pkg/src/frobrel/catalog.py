"""Named example structures and the suites the tests sweep over."""

from itertools import permutations, product

import numpy as np

from .finrel import FinSet
from .frob2 import Frob2, groupoid_to_frob2, make_groupoid, pants2, product2
from .frob3 import Connector, Frob3, equivalence_pairs, restrict3


def group(name, elements, mult, identity):
    """Frob2 of a finite group given by a multiplication function on indices."""
    n = len(elements)
    A = FinSet(name, n, tuple(elements))
    M = np.zeros((n, n, n), dtype=bool)
    for a, b in product(range(n), repeat=2):
        M[a, b, mult(a, b)] = True
    U = np.zeros(n, dtype=bool)
    U[identity] = True
    return Frob2(A, M, U)


def cyclic(n):
    return group(f"Z{n}", range(n), lambda a, b: (a + b) % n, 0)


def klein():
    return group("V4", range(4), lambda a, b: a ^ b, 0)


def symmetric3():
    perms = list(permutations(range(3)))
    index = {p: k for k, p in enumerate(perms)}

    def mult(a, b):
        # (p q)(i) = p(q(i))
        return index[tuple(perms[a][perms[b][i]] for i in range(3))]

    return group("S3", ["".join(map(str, p)) for p in perms], mult, index[(0, 1, 2)])


def discrete(n):
    """Only identities: a*a = a, every element a unit."""
    A = FinSet(f"D{n}", n)
    M = np.zeros((n, n, n), dtype=bool)
    M[np.arange(n), np.arange(n), np.arange(n)] = True
    return Frob2(A, M, np.ones(n, dtype=bool))


def indiscrete_groupoid(k):
    """One morphism (a, b) from b to a for every pair of objects: s = second, t = first."""
    pairs = [(a, b) for a in range(k) for b in range(k)]
    idx = {p: j for j, p in enumerate(pairs)}
    m = {
        (idx[(a, b)], idx[(b2, c)]): idx[(a, c)]
        for (a, b), (b2, c) in product(pairs, repeat=2)
        if b == b2
    }
    return make_groupoid(
        k,
        k * k,
        [b for a, b in pairs],
        [a for a, b in pairs],
        [idx[(x, x)] for x in range(k)],
        [idx[(b, a)] for a, b in pairs],
        m,
        name=f"Pair{k}",
    )


def pair_groupoid(k):
    return groupoid_to_frob2(indiscrete_groupoid(k))


# -- ternary examples ------------------------------------------------------------------


def ternary_cyclic(n):
    """T3-style structure u = x - y + z on Z/n."""
    return Frob3.from_function(FinSet(f"Z{n}", n), lambda x, y, z: (x - y + z) % n)


def T3():
    return ternary_cyclic(3)


def Tproj(n=2):
    """u = x and y = z."""
    return Frob3.from_function(FinSet(f"P{n}", n), lambda x, y, z: x if y == z else None)


def full_lambda(n=2):
    return Frob3(FinSet(f"F{n}", n), np.ones((n,) * 4, dtype=bool))


def coset_Z4():
    """The coset {1, 3} of {0, 2} inside the ternary structure of Z/4, with its inclusion."""
    return restrict3(ternary_cyclic(4), [1, 3], name="1+2Z4")


def trivial_connector(n=2):
    """(A, diag, diag, p(x, x, x) = x)."""
    A = FinSet(f"Z{n}", n)
    return Connector.build(A, equivalence_pairs("diag", n), equivalence_pairs("diag", n), lambda x, y, z: x)


def parallelogram_connector(n):
    A = FinSet(f"Z{n}", n)
    full = equivalence_pairs("full", n)
    return Connector.build(A, full, full, lambda x, y, z: (x - y + z) % n)


def projection_connector(n=2):
    """(A, full, diag, p(x, y, y) = x), the connector of Tproj."""
    A = FinSet(f"P{n}", n)
    return Connector.build(A, equivalence_pairs("full", n), equivalence_pairs("diag", n), lambda x, y, z: x)


# -- suites --------------------------------------------------------------------------


def curated_frob2():
    """Special dagger Frobenius structures of size 3 and 4 plus a few larger ones."""
    return {
        "Z3": cyclic(3),
        "Z4": cyclic(4),
        "V4": klein(),
        "D3": discrete(3),
        "Pair2": pair_groupoid(2),
        "Pants2": pants2(2),
        "Z2xD2": product2(cyclic(2), discrete(2)),
        "S3": symmetric3(),
    }


def curated_frob3():
    """Ternary structures of size 3 and 4 used alongside the exhaustive size-2 suite."""
    from .bridges import two_to_three

    out = {
        "T3": T3(),
        "TZ4": ternary_cyclic(4),
        "Tproj3": Tproj(3),
        "full3": full_lambda(3),
        "coset13": coset_Z4()[0],
    }
    for name, f in curated_frob2().items():
        if f.n <= 4:
            out[f"3({name})"] = two_to_three(f)
    return out
