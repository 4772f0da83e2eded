"""Random well-typed terms, built as a stack of one-generator layers."""

from .semantics import loop_profile, to_graph
from .terms import SIGNATURES, Gen, ids, par, seq


def _moves(word, nodes_left, max_width, commutative):
    w = tuple(word)
    out = []
    for i in range(len(w) + 1):
        if nodes_left:
            if w[i : i + 3] == ("+", "-", "+"):
                out.append(("mu3", i))
            if w[i : i + 1] == ("+",):
                out.append(("comu3", i))
        if len(w) + 2 <= max_width:
            out.append(("cup", i))
            out.append(("cupx", i))
        if w[i : i + 2] == ("+", "-"):
            out.append(("cap", i))
        if w[i : i + 2] == ("-", "+"):
            out.append(("capx", i))
        if commutative and i + 2 <= len(w):
            out.append(("swap", i))
    return out


def _layer(word, name, i):
    if name == "swap":
        g = Gen("swap", (word[i], word[i + 1]))
        k = 2
        new = (word[i + 1], word[i])
    else:
        g = Gen(name)
        k = len(SIGNATURES[name][0])
        new = SIGNATURES[name][1]
    term = par(ids(word[:i]), g, ids(word[i + k :]))
    return term, tuple(word[:i]) + tuple(new) + tuple(word[i + k :])


def random_term(rng, max_nodes=6, commutative=False, max_width=6, max_layers=14):
    """One attempt; may be disconnected. ``rng`` is a random.Random."""
    word = tuple(rng.choice("+-") for _ in range(rng.randint(0, 3)))
    target = rng.randint(1, max_nodes)
    nodes = 0
    layers = []
    for _ in range(max_layers):
        moves = _moves(word, nodes < target, max_width, commutative)
        if not moves:
            break
        node_moves = [mv for mv in moves if mv[0] in ("mu3", "comu3")]
        if node_moves and rng.random() < 0.6:
            name, i = rng.choice(node_moves)
        else:
            name, i = rng.choice(moves)
        term, word = _layer(word, name, i)
        layers.append(term)
        nodes += name in ("mu3", "comu3")
        if nodes >= target and rng.random() < 0.5:
            break
    return seq(*layers)


def random_connected_term(
    rng, max_nodes=6, commutative=False, min_nodes=1, max_loops=None, max_boundary=6, tries=10000
):
    """Rejection-sample a connected term with some boundary and 1..max_nodes nodes."""
    for _ in range(tries):
        t = random_term(rng, max_nodes, commutative)
        if t is None:
            continue
        g = to_graph(t, commutative)
        b = len(g.inputs) + len(g.outputs)
        if not (min_nodes <= len(g.nodes) <= max_nodes) or b == 0 or b > max_boundary:
            continue
        prof = loop_profile(g)
        if not prof.connected:
            continue
        if max_loops is not None and prof.internal_loops > max_loops:
            continue
        return t
    raise RuntimeError("no connected term found")


def random_tree_term(rng, nodes, max_width=7, tries=1000):
    """A connected term with exactly ``nodes`` nodes and no internal loops.

    Wires carry a component id; mu3 and caps only join wires of distinct
    components, so no cycle can close.
    """
    for _ in range(tries):
        width = rng.randint(1, 5)
        word = tuple(rng.choice("+-") for _ in range(width))
        comp = list(range(width))
        alive = width  # number of components
        layers = []
        placed = 0
        for _ in range(4 * nodes + 8):
            if placed == nodes and alive == 1:
                break
            moves = []
            for i in range(len(word) + 1):
                if placed < nodes:
                    if word[i : i + 3] == ("+", "-", "+") and len(set(comp[i : i + 3])) == 3:
                        moves.append(("mu3", i))
                    if word[i : i + 1] == ("+",) and len(word) + 2 <= max_width:
                        moves.append(("comu3", i))
                if word[i : i + 2] in (("+", "-"), ("-", "+")) and comp[i] != comp[i + 1]:
                    moves.append(("cap" if word[i] == "+" else "capx", i))
            if not moves:
                break
            name, i = rng.choice(moves)
            term, word = _layer(word, name, i)
            layers.append(term)
            if name == "comu3":
                comp = comp[:i] + [comp[i]] * 3 + comp[i + 1 :]
                placed += 1
                continue
            k = 3 if name == "mu3" else 2
            keep, gone = comp[i], set(comp[i : i + k])
            alive -= len(gone) - 1
            rest = [keep if c in gone else c for c in comp]
            comp = rest[:i] + ([keep] if name == "mu3" else []) + rest[i + k :]
            placed += name == "mu3"
        if placed == nodes and alive == 1 and word and layers:
            return seq(*layers)
    raise RuntimeError("no tree term found")
