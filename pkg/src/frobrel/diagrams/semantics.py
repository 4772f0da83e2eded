"""Evaluation of diagram terms and their open graphs.

Two evaluators exist. ``evaluate`` maps generators to relations and folds
with finrel.compose / finrel.tensor; it is the reference. ``evaluate_batch``
flattens the term into an open graph once and contracts it with einsum over
a whole batch of incidences at the same time.
"""

from dataclasses import dataclass

import numpy as np

from .. import finrel as fr
from ..finrel import MINUS, PLUS, Obj
from .terms import NODE_KINDS, Compose, Gen, Tensor, as_term, typecheck


def _gen_rel(g, t, cache):
    key = (g.name, g.args)
    if key in cache:
        return cache[key]
    A = t.A
    name = g.name
    if name == "mu3":
        r = t.mu3
    elif name == "comu3":
        r = t.comu3
    elif name == "cup":
        r = fr.cup(A)
    elif name == "cupx":
        r = fr.cup_swapped(A)
    elif name == "cap":
        r = fr.cap(A)
    elif name == "capx":
        r = fr.cap_swapped(A)
    elif name == "id+":
        r = fr.identity(Obj(((A, PLUS),)))
    elif name == "id-":
        r = fr.identity(Obj(((A, MINUS),)))
    elif name == "swap":
        w1, w2 = g.args
        r = fr.swap(Obj(((A, w1),)), Obj(((A, w2),)))
    else:
        raise ValueError(f"unknown generator {name}")
    cache[key] = r
    return r


def evaluate(term, t, commutative=False):
    """Relation denoted by ``term`` in the ternary structure ``t``."""
    term = as_term(term)
    typecheck(term, commutative)
    if commutative:
        from ..frob3 import check_frob3

        if not check_frob3(t).commutative:
            raise ValueError("commutative-mode evaluation needs a commutative structure")
    cache = {}

    def go(x):
        if isinstance(x, Gen):
            return _gen_rel(x, t, cache)
        if isinstance(x, Compose):
            return fr.compose(go(x.first), go(x.then))
        return fr.tensor(go(x.left), go(x.right))

    return go(term)


# -- open graphs -------------------------------------------------------------


@dataclass(frozen=True)
class OpenGraph:
    """Nodes carry four wire ids each, legs ordered as Lambda's arguments.

    For mu3 legs 0..2 are the inputs and leg 3 the output; for comu3 legs
    0..2 are the outputs and leg 3 the input. Wires with no endpoint at all
    are closed circles and are only counted.
    """

    nodes: tuple  # ((kind, (w0, w1, w2, w3)), ...)
    inputs: tuple  # wire id per input position
    outputs: tuple
    in_word: tuple
    out_word: tuple
    n_wires: int
    circles: int

    def endpoints(self):
        """wire id -> list of ('node', k, leg) / ('in', j) / ('out', j)."""
        ends = {w: [] for w in range(self.n_wires)}
        for k, (_, legs) in enumerate(self.nodes):
            for leg, w in enumerate(legs):
                ends[w].append(("node", k, leg))
        for j, w in enumerate(self.inputs):
            ends[w].append(("in", j))
        for j, w in enumerate(self.outputs):
            ends[w].append(("out", j))
        return ends


class _UF:
    def __init__(self):
        self.parent = []

    def new(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def to_graph(term, commutative=False):
    term = as_term(term)
    in_word, out_word = typecheck(term, commutative)
    uf = _UF()
    nodes = []

    def go(x):
        # returns (input endpoint ids, output endpoint ids)
        if isinstance(x, Compose):
            a_in, a_out = go(x.first)
            b_in, b_out = go(x.then)
            for p, q in zip(a_out, b_in):
                uf.union(p, q)
            return a_in, b_out
        if isinstance(x, Tensor):
            a_in, a_out = go(x.left)
            b_in, b_out = go(x.right)
            return a_in + b_in, a_out + b_out
        name = x.name
        if name in NODE_KINDS:
            legs = [uf.new() for _ in range(4)]
            nodes.append((name, legs))
            if name == "mu3":
                return legs[:3], legs[3:]
            return legs[3:], legs[:3]
        if name in ("id+", "id-"):
            e = uf.new()
            return [e], [e]
        if name in ("cup", "cupx"):
            e = uf.new()
            return [], [e, e]
        if name in ("cap", "capx"):
            e = uf.new()
            return [e, e], []
        a, b = uf.new(), uf.new()
        return [a, b], [b, a]

    ins, outs = go(term)
    roots = {}

    def wid(e):
        r = uf.find(e)
        return roots.setdefault(r, len(roots))

    g_nodes = tuple((kind, tuple(wid(e) for e in legs)) for kind, legs in nodes)
    g_in = tuple(wid(e) for e in ins)
    g_out = tuple(wid(e) for e in outs)
    attached = {w for _, legs in g_nodes for w in legs} | set(g_in) | set(g_out)
    all_roots = {uf.find(e) for e in range(len(uf.parent))}
    circles = len(all_roots) - len(attached)
    return OpenGraph(g_nodes, g_in, g_out, in_word, out_word, len(attached), circles)


@dataclass(frozen=True)
class LoopProfile:
    nodes: int
    internal_loops: int
    connected: bool


def loop_profile(graph):
    """Cycle rank of the graph whose vertices are nodes and boundary ports."""
    if not isinstance(graph, OpenGraph):
        graph = to_graph(graph)
    n_nodes = len(graph.nodes)
    n_vertices = n_nodes + len(graph.inputs) + len(graph.outputs)
    uf = _UF()
    for _ in range(n_vertices):
        uf.new()
    ends = graph.endpoints()

    def vertex(end):
        if end[0] == "node":
            return end[1]
        if end[0] == "in":
            return n_nodes + end[1]
        return n_nodes + len(graph.inputs) + end[1]

    edges = 0
    for w, es in ends.items():
        assert len(es) == 2, f"wire {w} has {len(es)} endpoints"
        uf.union(vertex(es[0]), vertex(es[1]))
        edges += 1
    components = len({uf.find(v) for v in range(n_vertices)})
    loops = edges - n_vertices + components + graph.circles
    return LoopProfile(n_nodes, loops, components + graph.circles == 1)


# -- batched contraction -----------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXY"


def evaluate_batch(term, L, commutative=False):
    """Evaluate ``term`` on a batch L of shape (N, n, n, n, n).

    Returns a boolean array (N, n**p, n**q) holding the relation matrices.
    """
    graph = term if isinstance(term, OpenGraph) else to_graph(term, commutative)
    L = np.asarray(L)
    N, n = L.shape[0], L.shape[1]
    boundary = list(graph.inputs) + list(graph.outputs)
    if len(boundary) + graph.n_wires + 1 > len(_LETTERS):
        raise ValueError("term too large for batched evaluation")
    batch = "Z"
    wire = lambda w: _LETTERS[w]  # noqa: E731
    pos = lambda j: _LETTERS[graph.n_wires + j]  # noqa: E731
    operands, subs = [], []
    Li = L.astype(np.int64)
    for _, legs in graph.nodes:
        operands.append(Li)
        subs.append(batch + "".join(wire(w) for w in legs))
    eye = np.eye(n, dtype=np.int64)
    for j, w in enumerate(boundary):
        operands.append(eye)
        subs.append(pos(j) + wire(w))
    out_sub = batch + "".join(pos(j) for j in range(len(boundary)))
    if not graph.nodes:
        # nothing carries the batch axis
        operands.append(np.ones(N, dtype=np.int64))
        subs.append(batch)
    res = np.einsum(",".join(subs) + "->" + out_sub, *operands, optimize="greedy") > 0
    if graph.circles and n == 0:
        res[:] = False
    p, q = len(graph.inputs), len(graph.outputs)
    return res.reshape(N, n**p, n**q)
