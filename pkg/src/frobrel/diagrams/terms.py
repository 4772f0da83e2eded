"""Diagram terms: AST, parser, printer and typechecker.

Grammar::

    seq    := tensor (';' tensor)*        sequential, left runs first
    tensor := atom ('*' atom)*
    atom   := NAME | 'swap' '(' W ',' W ')' | '(' seq ')'
    NAME   := mu3 | comu3 | cup | cupx | cap | capx | id+ | id-
    W      := '+' | '-'
"""

import re
from dataclasses import dataclass, field

P, N = "+", "-"

SIGNATURES = {
    "mu3": ((P, N, P), (P,)),
    "comu3": ((P,), (P, N, P)),
    "cup": ((), (N, P)),
    "cupx": ((), (P, N)),
    "cap": ((P, N), ()),
    "capx": ((N, P), ()),
    "id+": ((P,), (P,)),
    "id-": ((N,), (N,)),
}
NODE_KINDS = ("mu3", "comu3")


class DiagramSyntaxError(ValueError):
    def __init__(self, msg, text, pos):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{msg} at line {line}, column {col}")


class DiagramTypeError(TypeError):
    def __init__(self, msg, term):
        self.term = term
        super().__init__(f"{msg} in `{to_text(term)}`")


@dataclass(frozen=True)
class Gen:
    name: str
    args: tuple = ()
    pos: int = field(default=-1, compare=False, repr=False)


@dataclass(frozen=True)
class Compose:
    first: object
    then: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


def gen(name, *args):
    return Gen(name, tuple(args))


def seq(*terms):
    """Sequential composition of the non-None arguments, left to right."""
    terms = [t for t in terms if t is not None]
    if not terms:
        return None
    out = terms[0]
    for t in terms[1:]:
        out = Compose(out, t)
    return out


def par(*terms):
    terms = [t for t in terms if t is not None]
    if not terms:
        return None
    out = terms[0]
    for t in terms[1:]:
        out = Tensor(out, t)
    return out


def ids(word):
    """Identity on a type word, or None for the empty word."""
    return par(*[Gen("id" + w) for w in word])


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s+|(?P<tok>id[+-]|[A-Za-z_][A-Za-z0-9_]*|[();*,+-])")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise DiagramSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if mt.group("tok"):
            toks.append((mt.group("tok"), pos))
        pos = mt.end()
    toks.append(("<end>", len(text)))
    return toks


def parse(text):
    toks = _tokenize(text)
    k = 0

    def peek():
        return toks[k][0]

    def take(expected=None):
        nonlocal k
        tok, pos = toks[k]
        if expected is not None and tok != expected:
            what = "end of input" if tok == "<end>" else repr(tok)
            raise DiagramSyntaxError(f"expected {expected!r}, found {what}", text, pos)
        k += 1
        return tok, pos

    def p_seq():
        out = p_tensor()
        while peek() == ";":
            take()
            out = Compose(out, p_tensor())
        return out

    def p_tensor():
        out = p_atom()
        while peek() == "*":
            take()
            out = Tensor(out, p_atom())
        return out

    def p_atom():
        tok, pos = toks[k]
        if tok == "(":
            take()
            out = p_seq()
            take(")")
            return out
        if tok == "swap":
            take()
            take("(")
            w1 = _wire(take())
            take(",")
            w2 = _wire(take())
            take(")")
            return Gen("swap", (w1, w2), pos)
        if tok in SIGNATURES:
            take()
            return Gen(tok, (), pos)
        what = "end of input" if tok == "<end>" else repr(tok)
        raise DiagramSyntaxError(f"expected a generator or '(', found {what}", text, pos)

    def _wire(tp):
        tok, pos = tp
        if tok not in (P, N):
            raise DiagramSyntaxError(f"swap wire must be + or -, found {tok!r}", text, pos)
        return tok

    out = p_seq()
    if peek() != "<end>":
        tok, pos = toks[k]
        raise DiagramSyntaxError(f"unexpected {tok!r}", text, pos)
    return out


def to_text(term):
    if isinstance(term, Gen):
        return f"swap({term.args[0]},{term.args[1]})" if term.name == "swap" else term.name
    if isinstance(term, Tensor):
        left = to_text(term.left)
        right = to_text(term.right)
        if isinstance(term.left, Compose):
            left = f"({left})"
        if isinstance(term.right, (Compose, Tensor)):
            right = f"({right})"
        return f"{left} * {right}"
    if isinstance(term, Compose):
        first = to_text(term.first)
        then = to_text(term.then)
        if isinstance(term.then, Compose):
            then = f"({then})"
        return f"{first} ; {then}"
    raise TypeError(f"not a diagram term: {term!r}")


def as_term(x):
    return parse(x) if isinstance(x, str) else x


# -- typing ------------------------------------------------------------------


def signature(g, commutative=False):
    if g.name == "swap":
        if not commutative:
            raise DiagramTypeError("swap is only allowed in commutative mode", g)
        w1, w2 = g.args
        return (w1, w2), (w2, w1)
    return SIGNATURES[g.name]


def typecheck(term, commutative=False):
    """Return (input word, output word) or raise DiagramTypeError."""
    term = as_term(term)
    if isinstance(term, Gen):
        return signature(term, commutative)
    if isinstance(term, Tensor):
        a_in, a_out = typecheck(term.left, commutative)
        b_in, b_out = typecheck(term.right, commutative)
        return a_in + b_in, a_out + b_out
    if isinstance(term, Compose):
        a_in, a_out = typecheck(term.first, commutative)
        b_in, b_out = typecheck(term.then, commutative)
        if a_out != b_in:
            raise DiagramTypeError(f"boundary mismatch {_word(a_out)} vs {_word(b_in)}", term)
        return a_in, b_out
    raise TypeError(f"not a diagram term: {term!r}")


def _word(w):
    return "(" + ",".join(w) + ")"


def node_count(term):
    term = as_term(term)
    if isinstance(term, Gen):
        return int(term.name in NODE_KINDS)
    a, b = (term.left, term.right) if isinstance(term, Tensor) else (term.first, term.then)
    return node_count(a) + node_count(b)


def uses_swap(term):
    if isinstance(term, Gen):
        return term.name == "swap"
    a, b = (term.left, term.right) if isinstance(term, Tensor) else (term.first, term.then)
    return uses_swap(a) or uses_swap(b)
