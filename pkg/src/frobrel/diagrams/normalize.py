"""Spider normal forms.

A connected diagram over a sliding structure equals a spider: a comb of
multiplications, m left loops, n right loops, then a comb of
comultiplications, once at most one input and one output are bent.

The strategy works on the planar rotation system of the open graph. Every
node lists its legs counter-clockwise, together with the direction the
A-arrow runs through the leg. Nodes are fused one edge at a time starting
from node 0 (the first node the term introduces), always absorbing the
lowest-numbered neighbour through its lowest-numbered wire. Fusing edges
between the growing spider and a node it already touches turns the extra
edges into self-loops. Adjacent self-loop legs are then removed in a
fixed order: a loop whose counter-clockwise first leg carries the arrow
into the spider is a left loop, otherwise a right loop.
"""

from dataclasses import dataclass

from .semantics import evaluate, loop_profile, to_graph
from .terms import (
    Gen,
    N,
    P,
    as_term,
    ids,
    node_count,
    par,
    seq,
    typecheck,
)

# counter-clockwise leg order and arrow direction ("in" = towards the node)
ROTATION = {"mu3": (3, 0, 1, 2), "comu3": (3, 2, 1, 0)}
FLOW = {"mu3": ("in", "out", "in", "out"), "comu3": ("out", "in", "out", "in")}

LEFT_LOOP = seq(par(Gen("cupx"), Gen("id+")), Gen("mu3"))
RIGHT_LOOP = seq(par(Gen("id+"), Gen("cup")), Gen("mu3"))


def _flip(w):
    return N if w == P else P


def is_normal_word(w):
    return len(w) % 2 == 1 and all(c == (P if k % 2 == 0 else N) for k, c in enumerate(w))


@dataclass(frozen=True)
class Bending:
    """Which boundary wires to bend before comparing with the spider.

    ``input`` / ``output`` are None, "left" or "right". In commutative mode
    ``perm`` is set instead: all outputs are bent down (rightmost first),
    the resulting inputs are permuted so that target position j takes
    wire perm[j], and the last input is bent up again.
    """

    input: object = None
    output: object = None
    perm: object = None
    closed: bool = False


NO_BENDING = Bending()


@dataclass(frozen=True)
class NormalFormDescriptor:
    in_word: tuple
    out_word: tuple
    m: int
    n: int
    bending: Bending = NO_BENDING


# -- spiders -------------------------------------------------------------------


def spider(m, n=None, in_word=None, out_word=None):
    """Canonical spider term; also accepts a NormalFormDescriptor."""
    if isinstance(m, NormalFormDescriptor):
        d = m
        m, n, in_word, out_word = d.m, d.n, d.in_word, d.out_word
    in_word, out_word = tuple(in_word), tuple(out_word)
    if not (is_normal_word(in_word) and is_normal_word(out_word)):
        raise ValueError(f"boundary {in_word} -> {out_word} is not realizable by a spider")
    if m < 0 or n < 0:
        raise ValueError("loop counts must be non-negative")
    parts = []
    k = len(in_word)
    while k > 1:
        parts.append(par(Gen("mu3"), ids(in_word[3:k])))
        k -= 2
    parts += [LEFT_LOOP] * m + [RIGHT_LOOP] * n
    k = 1
    while k < len(out_word):
        parts.append(par(Gen("comu3"), ids(out_word[1:k])))
        k += 2
    return seq(*parts) or Gen("id+")


def normal_form_term(desc):
    s = spider(desc)
    if desc.bending.closed:
        return seq(Gen("cup"), par(Gen("id-"), s), Gen("capx"))
    return s


# -- bending -------------------------------------------------------------------


def _cup_pair(first):
    """State producing (first, flip(first))."""
    return Gen("cupx") if first == P else Gen("cup")


def _cap_pair(first):
    """Effect consuming (first, flip(first))."""
    return Gen("cap") if first == P else Gen("capx")


def bend_input(term, side, commutative=False):
    term = as_term(term)
    w_in, w_out = typecheck(term, commutative)
    if not w_in:
        raise ValueError("no input to bend")
    if side == "right":
        w = w_in[-1]
        return seq(par(ids(w_in[:-1]), _cup_pair(w)), par(term, ids((_flip(w),))))
    w = w_in[0]
    return seq(par(_cup_pair(_flip(w)), ids(w_in[1:])), par(ids((_flip(w),)), term))


def bend_output(term, side, commutative=False):
    term = as_term(term)
    w_in, w_out = typecheck(term, commutative)
    if not w_out:
        raise ValueError("no output to bend")
    if side == "right":
        w = w_out[-1]
        return seq(par(term, ids((_flip(w),))), par(ids(w_out[:-1]), _cap_pair(w)))
    w = w_out[0]
    return seq(par(ids((_flip(w),)), term), par(_cap_pair(_flip(w)), ids(w_out[1:])))


def _bent_words(w_in, w_out, b):
    w_in, w_out = list(w_in), list(w_out)
    if b.input == "right":
        w_out.append(_flip(w_in.pop()))
    elif b.input == "left":
        w_out.insert(0, _flip(w_in.pop(0)))
    if b.output == "right":
        w_in.append(_flip(w_out.pop()))
    elif b.output == "left":
        w_in.insert(0, _flip(w_out.pop(0)))
    return tuple(w_in), tuple(w_out)


def _swap_layers(word, order):
    """Term permuting wires: output position j carries input wire order[j]."""
    cur = list(range(len(word)))
    types = list(word)
    layers = []
    target = list(order)
    # bubble sort cur towards target, recording adjacent swaps
    for j in range(len(target)):
        k = cur.index(target[j])
        while k > j:
            a, b = types[k - 1], types[k]
            layers.append(par(ids(types[: k - 1]), Gen("swap", (a, b)), ids(types[k + 1 :])))
            cur[k - 1], cur[k] = cur[k], cur[k - 1]
            types[k - 1], types[k] = types[k], types[k - 1]
            k -= 1
    return seq(*layers)


def bend(term, bending, commutative=False):
    term = as_term(term)
    if bending.closed:
        return term
    if bending.perm is not None:
        commutative = True
        t = term
        while typecheck(t, True)[1]:
            t = bend_output(t, "right", True)
        word = typecheck(t, True)[0]
        target = tuple(word[k] for k in bending.perm)
        # the prefix maps the target order onto the term's order: wire k of
        # the term is target position perm.index(k)
        inverse = [bending.perm.index(k) for k in range(len(word))]
        pre = _swap_layers(target, inverse)
        t = seq(pre, t)
        return bend_input(t, "right", True)
    if bending.input:
        term = bend_input(term, bending.input, commutative)
    if bending.output:
        term = bend_output(term, bending.output, commutative)
    return term


_OPTIONS = [
    Bending(None, None),
    Bending("right", None),
    Bending("left", None),
    Bending(None, "right"),
    Bending(None, "left"),
    Bending("right", "left"),
    Bending("left", "right"),
]


# -- normalization ---------------------------------------------------------------


class NormalizationError(ValueError):
    pass


def _fuse(graph):
    """Contract all node-node wires; returns the cyclic (wire, flow) list."""
    spiders = {}
    for k, (kind, legs) in enumerate(graph.nodes):
        spiders[k] = [(legs[j], FLOW[kind][j]) for j in ROTATION[kind]]
    if not spiders:
        return []
    cur = spiders.pop(0)
    while spiders:
        best = None
        for k in sorted(spiders):
            shared = sorted({w for w, _ in spiders[k]} & {w for w, _ in cur})
            if shared:
                best = (k, shared[0])
                break
        if best is None:
            raise NormalizationError("diagram is not connected")
        k, w = best
        other = spiders.pop(k)
        i = next(j for j, (x, _) in enumerate(cur) if x == w)
        j = next(j for j, (x, _) in enumerate(other) if x == w)
        cur = cur[i + 1 :] + cur[:i] + other[j + 1 :] + other[:j]
    return cur


def _strip_loops(ring):
    m = n = 0
    ring = list(ring)
    changed = True
    while changed:
        changed = False
        size = len(ring)
        for i in range(size):
            a, b = ring[i], ring[(i + 1) % size]
            if size >= 2 and a[0] == b[0]:
                if a[1] == "in":
                    m += 1
                else:
                    n += 1
                for idx in sorted({i, (i + 1) % size}, reverse=True):
                    ring.pop(idx)
                changed = True
                break
    return ring, m, n


def _cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[k:] + a[:k] == b for k in range(len(a)))


def normalize(term, commutative=False):
    term = as_term(term)
    graph = to_graph(term, commutative)
    prof = loop_profile(graph)
    if not prof.connected:
        raise NormalizationError("diagram is not connected")
    w_in, w_out = graph.in_word, graph.out_word
    if commutative:
        return _normalize_commutative(graph, prof)
    if not w_in and not w_out:
        raise NormalizationError("closed diagrams have no normal form in non-commutative mode")
    ring = _fuse(graph)
    boundary = set(graph.inputs) | set(graph.outputs)
    if graph.nodes:
        ring, m, n = _strip_loops(ring)
        if any(w not in boundary for w, _ in ring):
            raise NormalizationError("loop legs are not adjacent after fusion")
        expected = list(reversed(graph.outputs)) + list(graph.inputs)
        if not _cyclic_equal([w for w, _ in ring], expected):
            raise NormalizationError("boundary order does not match the fused rotation")
    else:
        m = n = 0
    if m + n != prof.internal_loops:
        raise NormalizationError("loop count mismatch")
    for b in _OPTIONS:
        if (b.input and not w_in) or (b.output and not w_out):
            continue
        bi, bo = _bent_words(w_in, w_out, b)
        if is_normal_word(bi) and is_normal_word(bo):
            return NormalFormDescriptor(bi, bo, m, n, b)
    raise NormalizationError(f"no bending makes {w_in} -> {w_out} normal")


def _normalize_commutative(graph, prof):
    loops = prof.internal_loops
    word = tuple(graph.in_word) + tuple(_flip(w) for w in reversed(graph.out_word))
    if not word:
        return NormalFormDescriptor((P,), (P,), loops - 1, 0, Bending(closed=True))
    pluses = [k for k, w in enumerate(word) if w == P]
    minuses = [k for k, w in enumerate(word) if w == N]
    if len(pluses) != len(minuses):
        raise NormalizationError("unbalanced boundary")
    perm = []
    for a, b in zip(pluses, minuses):
        perm += [a, b]
    half = len(word) // 2
    in_word = tuple(P if k % 2 == 0 else N for k in range(2 * half - 1))
    return NormalFormDescriptor(in_word, (P,), loops, 0, Bending(perm=tuple(perm)))


def check_descriptor(term, desc, structures, commutative=False):
    """eval(bend(term)) == eval(normal form) on every structure."""
    lhs_term = bend(term, desc.bending, commutative)
    rhs_term = normal_form_term(desc)
    comm = commutative or desc.bending.perm is not None
    return all(evaluate(lhs_term, s, comm) == evaluate(rhs_term, s, comm) for s in structures)


def corollary_check(t1, t2, structures):
    t1, t2 = as_term(t1), as_term(t2)
    if typecheck(t1) != typecheck(t2):
        raise ValueError(f"boundary mismatch: {typecheck(t1)} vs {typecheck(t2)}")
    return all(evaluate(t1, s) == evaluate(t2, s) for s in structures)


def nodes_preserved(term, desc):
    return node_count(normal_form_term(desc)) == node_count(term)


__all__ = [
    "Bending",
    "NormalFormDescriptor",
    "NormalizationError",
    "bend",
    "bend_input",
    "bend_output",
    "check_descriptor",
    "corollary_check",
    "normal_form_term",
    "normalize",
    "spider",
]

