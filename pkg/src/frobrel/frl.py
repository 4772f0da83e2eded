"""Reading and writing .frl structure files.

A file is a sequence of declarations; ``#`` starts a comment::

    object Z2 2
    rel swap : (Z2, ~Z2) -> (~Z2, Z2) { ((0,1),(1,0)) ... }
    frob2 z2 { carrier Z2  unit { 0 }  mult { (0,0)->{0} (0,1)->{1} ... } }
    frob3 t3 { carrier Z3  lambda { (0,0,0)->{0} ... } }
    connector c { carrier A  releq R { (0,0) ... }  releq S { ... }  p { (0,0,0)->0 ... } }
    groupoid g { objects 1  morphisms 2  source 0 0  target 0 0  unit 0  inverse 0 1
                 compose { (0,0)->0 ... } }
    tags env : g { Q_l Q_r A- A+ ... }

Elements are indices or, when the carrier declares labels, labels. An
object expression is a name, or a parenthesized list of names where ``~``
marks a dual factor.
"""

import re
from dataclasses import dataclass, field

import numpy as np

from .finrel import MINUS, PLUS, FinRel, FinSet, Obj
from .frob2 import Frob2, Groupoid
from .frob3 import Connector, Frob3


class FrlError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(msg + where)


@dataclass
class Tags:
    target: str
    tags: tuple


@dataclass
class FrlDocument:
    decls: dict = field(default_factory=dict)

    def add(self, name, value):
        if name in self.decls:
            raise FrlError(f"duplicate declaration {name!r}")
        self.decls[name] = value

    def get(self, name=None, kinds=None):
        """Select a structure by name, or the sole structure of the wanted kinds."""
        kinds = kinds or (Frob2, Frob3, Connector, Groupoid, FinRel)
        if name is not None:
            if name not in self.decls:
                raise FrlError(f"no declaration named {name!r}")
            return self.decls[name]
        cands = [v for v in self.decls.values() if isinstance(v, kinds)]
        if len(cands) != 1:
            names = [k for k, v in self.decls.items() if isinstance(v, kinds)]
            raise FrlError(f"--name is required: the file holds {names or 'no structures'}")
        return cands[0]

    def name_of(self, value):
        return next(k for k, v in self.decls.items() if v is value)


# -- lexing ---------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<tok>->|[{}(),:~]|[^\s{}(),:~#]+)")


def _lex(text):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FrlError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        if m.group("tok"):
            toks.append((m.group("tok"), line, pos - line_start + 1))
        chunk = m.group(0)
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    toks.append(("<eof>", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _lex(text)
        self.k = 0
        self.doc = FrlDocument()

    # token helpers
    def peek(self):
        return self.toks[self.k][0]

    def err(self, msg):
        _, line, col = self.toks[self.k]
        raise FrlError(msg, line, col)

    def take(self, expected=None):
        tok = self.toks[self.k][0]
        if expected is not None and tok != expected:
            self.err(f"expected {expected!r}, found {tok!r}")
        self.k += 1
        return tok

    def int_(self):
        tok = self.peek()
        if not re.fullmatch(r"-?\d+", tok):
            self.err(f"expected an integer, found {tok!r}")
        self.take()
        return int(tok)

    def name(self):
        tok = self.peek()
        if tok in "{}(),:~" or tok in ("->", "<eof>"):
            self.err(f"expected a name, found {tok!r}")
        return self.take()

    def ref(self, kinds, what):
        pos = self.k
        nm = self.name()
        v = self.doc.decls.get(nm)
        if not isinstance(v, kinds):
            self.k = pos
            self.err(f"unresolved {what} {nm!r}")
        return v

    def element(self, A):
        pos = self.k
        tok = self.name()
        try:
            if A.labels and tok in A.labels:
                return A.labels.index(tok)
            return A.index(int(tok) if re.fullmatch(r"-?\d+", tok) else tok)
        except (ValueError, KeyError, IndexError):
            self.k = pos
            self.err(f"{tok!r} is not an element of {A.name}")

    def tuple_(self, sets):
        """(e1, ..., ek) over the given carriers; a bare element when k == 1."""
        if len(sets) == 1 and self.peek() != "(":
            return (self.element(sets[0]),)
        self.take("(")
        out = []
        for j, A in enumerate(sets):
            if j:
                self.take(",")
            out.append(self.element(A))
        self.take(")")
        return tuple(out)

    def elem_set(self, A):
        self.take("{")
        out = []
        while self.peek() != "}":
            out.append(self.element(A))
        self.take("}")
        return out

    # declarations
    def parse(self):
        while self.peek() != "<eof>":
            kw = self.peek()
            handler = getattr(self, f"d_{kw}", None)
            if handler is None:
                self.err(f"unknown declaration {kw!r}")
            start = self.k
            self.take()
            try:
                handler()
            except ValueError as e:
                if getattr(e, "line", None) is not None:
                    raise
                # errors raised outside the token stream point at the declaration
                _, line, col = self.toks[start]
                raise FrlError(str(e), line, col) from None
        return self.doc

    def d_object(self):
        nm = self.name()
        size = self.int_()
        labels = []
        while self.peek() not in ("<eof>",) and not self._at_keyword():
            labels.append(self.name())
        if labels and len(labels) != size:
            raise FrlError(f"object {nm} declares {size} elements but {len(labels)} labels")
        self.doc.add(nm, FinSet(nm, size, tuple(labels) if labels else None))

    def _at_keyword(self):
        return self.peek() in ("object", "rel", "frob2", "frob3", "connector", "groupoid", "tags")

    def obj_expr(self):
        if self.peek() != "(":
            return Obj(((self.ref(FinSet, "object"), PLUS),))
        self.take("(")
        factors = []
        if self.peek() == ")":
            self.take()
            return Obj(())
        while True:
            pol = PLUS
            if self.peek() == "~":
                self.take()
                pol = MINUS
            factors.append((self.ref(FinSet, "object"), pol))
            if self.peek() == ")":
                break
            self.take(",")
        self.take(")")
        return Obj(tuple(factors))

    def d_rel(self):
        nm = self.name()
        self.take(":")
        src = self.obj_expr()
        self.take("->")
        dst = self.obj_expr()
        self.take("{")
        m = np.zeros((src.card, dst.card), dtype=bool)
        while self.peek() != "}":
            self.take("(")
            a = self.tuple_(src.sets) if src.factors else self._unit()
            self.take(",")
            b = self.tuple_(dst.sets) if dst.factors else self._unit()
            self.take(")")
            m[src.encode(a), dst.encode(b)] = True
        self.take("}")
        self.doc.add(nm, FinRel(src, dst, m))

    def _unit(self):
        self.take("(")
        self.take(")")
        return ()

    def d_frob2(self):
        nm = self.name()
        self.take("{")
        self.take("carrier")
        A = self.ref(FinSet, "object")
        n = A.size
        self.take("unit")
        U = np.zeros(n, dtype=bool)
        U[self.elem_set(A)] = True
        self.take("mult")
        self.take("{")
        M = np.zeros((n, n, n), dtype=bool)
        while self.peek() != "}":
            a, b = self.tuple_([A, A])
            self.take("->")
            M[a, b, self.elem_set(A)] = True
        self.take("}")
        self.take("}")
        self.doc.add(nm, Frob2(A, M, U))

    def d_frob3(self):
        nm = self.name()
        self.take("{")
        self.take("carrier")
        A = self.ref(FinSet, "object")
        n = A.size
        self.take("lambda")
        self.take("{")
        L = np.zeros((n,) * 4, dtype=bool)
        while self.peek() != "}":
            x, y, z = self.tuple_([A, A, A])
            self.take("->")
            L[x, y, z, self.elem_set(A)] = True
        self.take("}")
        self.take("}")
        self.doc.add(nm, Frob3(A, L))

    def _pairs(self, A):
        self.take("{")
        m = np.zeros((A.size, A.size), dtype=bool)
        while self.peek() != "}":
            a, b = self.tuple_([A, A])
            m[a, b] = True
        self.take("}")
        return FinRel(Obj.of(A), Obj.of(A), m)

    def d_connector(self):
        nm = self.name()
        self.take("{")
        self.take("carrier")
        A = self.ref(FinSet, "object")
        self.take("releq")
        self.take("R")
        R = self._pairs(A)
        self.take("releq")
        self.take("S")
        S = self._pairs(A)
        self.take("p")
        self.take("{")
        p = {}
        while self.peek() != "}":
            key = self.tuple_([A, A, A])
            self.take("->")
            if key in p:
                self.err(f"p{key} is given twice")
            p[key] = self.element(A)
        self.take("}")
        self.take("}")
        self.doc.add(nm, Connector(A, R, S, tuple(p.items())))

    def d_groupoid(self):
        nm = self.name()
        self.take("{")
        self.take("objects")
        k = self.int_()
        self.take("morphisms")
        if re.fullmatch(r"\d+", self.peek()):
            C1 = FinSet(nm, self.int_())
        else:
            C1 = self.ref(FinSet, "object")
        n = C1.size
        fields = {}
        for key, count in (("source", n), ("target", n), ("unit", k), ("inverse", n)):
            self.take(key)
            fields[key] = [self.int_() for _ in range(count)]
        self.take("compose")
        self.take("{")
        comp = {}
        while self.peek() != "}":
            self.take("(")
            a = self.int_()
            self.take(",")
            b = self.int_()
            self.take(")")
            self.take("->")
            comp[(a, b)] = self.int_()
        self.take("}")
        self.take("}")
        try:
            g = Groupoid(
                FinSet(f"{nm}0", k),
                C1,
                fields["source"],
                fields["target"],
                fields["unit"],
                fields["inverse"],
                tuple(comp.items()),
            )
        except ValueError as e:
            self.err(str(e))
        self.doc.add(nm, g)

    def d_tags(self):
        nm = self.name()
        self.take(":")
        target = self.name()
        if target not in self.doc.decls:
            self.err(f"unresolved structure {target!r}")
        self.take("{")
        tags = []
        while self.peek() != "}":
            tags.append(self.name())
        self.take("}")
        self.doc.add(nm, Tags(target, tuple(tags)))


def loads(text):
    return _Parser(text).parse()


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- writing ----------------------------------------------------------------------


def _el(A, i):
    return A.labels[i] if A.labels else str(i)


def _tup(sets, elems):
    if len(sets) == 1:
        return _el(sets[0], elems[0])
    return "(" + ",".join(_el(A, e) for A, e in zip(sets, elems)) + ")"


def _obj_expr(o):
    if len(o.factors) == 1 and o.factors[0][1] == PLUS:
        return o.factors[0][0].name
    return "(" + ", ".join(("~" if p == MINUS else "") + A.name for A, p in o.factors) + ")"


_NAME = re.compile(r"[^\s{}(),:~#]+")


def safe_name(text):
    """``text`` with characters the lexer treats specially replaced by '_'."""
    return re.sub(r"[\s{}(),:~#]", "_", text).replace("->", "_") or "_"


def _check_name(name):
    if not _NAME.fullmatch(name) or "->" in name or re.fullmatch(r"-?\d+", name):
        raise FrlError(f"{name!r} cannot be written as an .frl name")


def _anonymous(g, name):
    return g.C1.name == name and not g.C1.labels


def _object_line(A):
    labels = " " + " ".join(A.labels) if A.labels else ""
    return f"object {A.name} {A.size}{labels}"


def _carriers(value, name=None):
    if isinstance(value, Groupoid):
        return [] if _anonymous(value, name) else [value.C1]
    if isinstance(value, FinRel):
        return [A for A, _ in value.src.factors + value.dst.factors]
    if isinstance(value, (Frob2, Frob3, Connector)):
        return [value.A]
    return []


def dumps(doc):
    """Canonical text: objects first (in declaration order), then everything else."""
    lines = []
    seen = {}
    objects = [v for v in doc.decls.values() if isinstance(v, FinSet)]
    for name, v in doc.decls.items():
        objects += _carriers(v, name)
    for A in objects:
        if A.name in seen:
            if seen[A.name] != A:
                raise FrlError(f"two different objects are named {A.name!r}")
            continue
        if not isinstance(doc.decls.get(A.name, A), FinSet):
            raise FrlError(f"carrier {A.name!r} clashes with a structure of the same name")
        _check_name(A.name)
        seen[A.name] = A
        lines.append(_object_line(A))
    for name, v in doc.decls.items():
        if isinstance(v, FinSet):
            continue
        _check_name(name)
        lines.append(dump_decl(name, v))
    return "\n".join(lines) + "\n"


def dump_decl(name, v):
    if isinstance(v, Frob2):
        A = v.A
        unit = " ".join(_el(A, i) for i in np.flatnonzero(v.U))
        rows = []
        for a in range(A.size):
            for b in range(A.size):
                cs = np.flatnonzero(v.M[a, b])
                if len(cs):
                    rows.append(f"    {_tup([A, A], (a, b))}->{{{' '.join(_el(A, c) for c in cs)}}}")
        body = "\n".join(rows)
        return f"frob2 {name} {{\n  carrier {A.name}\n  unit {{ {unit} }}\n  mult {{\n{body}\n  }}\n}}"
    if isinstance(v, Frob3):
        A = v.A
        rows = []
        counts = v.L.any(axis=3)
        for x, y, z in zip(*np.nonzero(counts)):
            us = " ".join(_el(A, u) for u in np.flatnonzero(v.L[x, y, z]))
            rows.append(f"    {_tup([A, A, A], (x, y, z))}->{{{us}}}")
        body = "\n".join(rows)
        return f"frob3 {name} {{\n  carrier {A.name}\n  lambda {{\n{body}\n  }}\n}}"
    if isinstance(v, Connector):
        A = v.A

        def pairs(r):
            return " ".join(_tup([A, A], ab) for ab in zip(*np.nonzero(r.m)))

        p = "\n".join(f"    {_tup([A, A, A], k)}->{_el(A, w)}" for k, w in v.p)
        return (
            f"connector {name} {{\n  carrier {A.name}\n  releq R {{ {pairs(v.R)} }}\n"
            f"  releq S {{ {pairs(v.S)} }}\n  p {{\n{p}\n  }}\n}}"
        )
    if isinstance(v, Groupoid):
        ints = lambda xs: " ".join(map(str, xs))  # noqa: E731
        comp = "\n".join(f"    ({a},{b})->{c}" for (a, b), c in v.m)
        morphisms = v.C1.size if _anonymous(v, name) else v.C1.name
        return (
            f"groupoid {name} {{\n  objects {v.C0.size}\n  morphisms {morphisms}\n"
            f"  source {ints(v.s)}\n  target {ints(v.t)}\n  unit {ints(v.u)}\n"
            f"  inverse {ints(v.i)}\n  compose {{\n{comp}\n  }}\n}}"
        )
    if isinstance(v, FinRel):
        def side(o, k):
            if not o.factors:
                return "()"
            return _tup(o.sets, o.decode(k))

        rows = " ".join(f"({side(v.src, a)},{side(v.dst, b)})" for a, b in zip(*np.nonzero(v.m)))
        return f"rel {name} : {_obj_expr(v.src)} -> {_obj_expr(v.dst)} {{ {rows} }}"
    if isinstance(v, Tags):
        return f"tags {name} : {v.target} {{ {' '.join(v.tags)} }}"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def save(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
