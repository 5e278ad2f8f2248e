"""Definition files: rings and modules in a small hand-editable language.

Grammar (``#`` starts a comment, whitespace is free)::

    file     := (ring | module)*
    ring     := 'ring' NAME ['over' field] 'vars' IDENT* ';' 'relations' poly (',' poly)* ';'
              | 'ring' NAME ['over' field] 'basis' '1' IDENT* ';' ['products' prod (',' prod)* ';']
    field    := 'GF' '(' INT ')' | 'QQ'
    prod     := IDENT '*' IDENT '=' poly
    module   := 'module' NAME 'over' NAME body ';'
    body     := 'presented' 'by' matrix
              | 'builtin' ('R' | 'k' | 'omega')
              | 'action' IDENT '=' matrix (',' IDENT '=' matrix)*
    matrix   := '[' row (';' row)* ']'
    row      := poly (',' poly)*
    poly     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ['^' INT]
    atom     := INT | IDENT | '(' poly ')'

A presentation matrix has one row per generator and one column per
relation; the module is its cokernel.  Action matrices act on column
vectors.  Products in the structure-table form that are not listed are zero.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .algebra import LocalAlgebra, build_from_structure_constants, build_quotient, parse_element
from .errors import BadMatrixShape, DefinitionSyntaxError, UnknownModule, UnknownRing
from .homology import canonical_module
from .linalg import Field
from .modules import (
    FinModule,
    FreeMatrix,
    coker_of_free_matrix,
    module_from_generator_actions,
    regular_module,
    residue_field,
)

BUILTINS = ("R", "k", "omega")

_TOKEN = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<int>\d+)|(?P<sym>[;,\[\](){}=+\-*^/])")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | sym | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DefinitionSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind in ("ident", "int", "sym"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- syntax tree --------------------------------------------------------------------------


@dataclass(frozen=True)
class RingDef:
    name: str
    field: str | None  # "GF(p)", "QQ" or None for the environment default
    variables: tuple[str, ...] = ()
    relations: tuple[str, ...] = ()
    basis: tuple[str, ...] | None = None  # structure-table form, unit omitted
    products: tuple[tuple[str, str, str], ...] = ()
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ModuleDef:
    name: str
    ring: str
    kind: str  # presented | builtin | action
    matrix: tuple[tuple[str, ...], ...] = ()
    builtin: str = ""
    actions: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...] = ()
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class DefinitionFile:
    rings: tuple[RingDef, ...]
    modules: tuple[ModuleDef, ...]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise DefinitionSyntaxError(f"{msg}, found {found}", t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("ident", "sym", "int") and self.tok.text == text

    def take(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected {what}")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> Token:
        if self.tok.kind != "int":
            self.error("expected integer")
        t = self.tok
        self.i += 1
        return t

    # -- top level --

    def parse(self) -> DefinitionFile:
        rings: list[RingDef] = []
        mods: list[ModuleDef] = []
        seen_r: set[str] = set()
        seen_m: set[str] = set()
        while self.tok.kind != "eof":
            if self.at("ring"):
                r = self.ring()
                if r.name in seen_r:
                    raise DefinitionSyntaxError(f"ring {r.name!r} defined twice", *r.pos)
                seen_r.add(r.name)
                rings.append(r)
            elif self.at("module"):
                m = self.module()
                if m.name in seen_m:
                    raise DefinitionSyntaxError(f"module {m.name!r} defined twice", *m.pos)
                if m.ring not in seen_r:
                    raise UnknownRing(f"module {m.name!r} refers to ring {m.ring!r}, which is not defined above it "
                                      f"(line {m.pos[0]}, column {m.pos[1]})")
                seen_m.add(m.name)
                mods.append(m)
            else:
                self.error("expected 'ring' or 'module'")
        return DefinitionFile(tuple(rings), tuple(mods))

    def field_spec(self) -> str:
        if self.at("QQ"):
            self.i += 1
            return "QQ"
        self.take("GF")
        self.take("(")
        p = self.integer()
        self.take(")")
        return f"GF({int(p.text)})"

    def ring(self) -> RingDef:
        start = self.take("ring")
        name = self.ident("ring name").text
        fld = None
        if self.at("over"):
            self.i += 1
            fld = self.field_spec()
        pos = (start.line, start.col)
        if self.at("vars"):
            self.i += 1
            vs = []
            while self.tok.kind == "ident" and self.tok.text != "relations":
                vs.append(self.ident().text)
            if len(set(vs)) != len(vs):
                self.error("repeated variable name")
            self.take(";")
            self.take("relations")
            rels = [self.poly()]
            while self.at(","):
                self.i += 1
                rels.append(self.poly())
            self.take(";")
            return RingDef(name, fld, tuple(vs), tuple(rels), pos=pos)
        if self.at("basis"):
            self.i += 1
            self.take("1")
            names = []
            while self.tok.kind == "ident":
                names.append(self.ident().text)
            if len(set(names)) != len(names):
                self.error("repeated basis name")
            self.take(";")
            prods = []
            if self.at("products"):
                self.i += 1
                while True:
                    a = self.ident("basis name").text
                    self.take("*")
                    b = self.ident("basis name").text
                    self.take("=")
                    prods.append((a, b, self.poly()))
                    if not self.at(","):
                        break
                    self.i += 1
                self.take(";")
            return RingDef(name, fld, basis=tuple(names), products=tuple(prods), pos=pos)
        self.error("expected 'vars' or 'basis'")

    def module(self) -> ModuleDef:
        start = self.take("module")
        name = self.ident("module name").text
        self.take("over")
        ring = self.ident("ring name").text
        pos = (start.line, start.col)
        if self.at("presented"):
            self.i += 1
            self.take("by")
            mat = self.matrix()
            self.take(";")
            return ModuleDef(name, ring, "presented", matrix=mat, pos=pos)
        if self.at("builtin"):
            self.i += 1
            t = self.ident("builtin name")
            if t.text not in BUILTINS:
                self.error(f"expected one of {', '.join(BUILTINS)}", t)
            self.take(";")
            return ModuleDef(name, ring, "builtin", builtin=t.text, pos=pos)
        if self.at("action"):
            self.i += 1
            acts = []
            while True:
                v = self.ident("variable").text
                self.take("=")
                acts.append((v, self.matrix()))
                if not self.at(","):
                    break
                self.i += 1
            self.take(";")
            return ModuleDef(name, ring, "action", actions=tuple(acts), pos=pos)
        self.error("expected 'presented', 'builtin' or 'action'")

    def matrix(self) -> tuple[tuple[str, ...], ...]:
        self.take("[")
        rows = [self.row()]
        while self.at(";"):
            self.i += 1
            rows.append(self.row())
        self.take("]")
        return tuple(rows)

    def row(self) -> tuple[str, ...]:
        out = [self.poly()]
        while self.at(","):
            self.i += 1
            out.append(self.poly())
        return tuple(out)

    # polynomials come back as canonical strings (no whitespace)
    def poly(self) -> str:
        s = ""
        if self.at("-"):
            self.i += 1
            s = "-"
        s += self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            s += op + self.term()
        return s

    def term(self) -> str:
        s = self.factor()
        while self.at("*"):
            self.i += 1
            s += "*" + self.factor()
        return s

    def factor(self) -> str:
        s = self.atom()
        if self.at("^"):
            self.i += 1
            s += "^" + str(int(self.integer().text))
        return s

    def atom(self) -> str:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return str(int(t.text))
        if t.kind == "ident":
            self.i += 1
            return t.text
        if self.at("("):
            self.i += 1
            inner = self.poly()
            self.take(")")
            return f"({inner})"
        self.error("expected a polynomial")


def parse(text: str) -> DefinitionFile:
    """Parse definition text into its syntax tree (no algebra is built yet)."""
    return _Parser(text).parse()


# -- printing -----------------------------------------------------------------------------


def _fmt_matrix(mat) -> str:
    return "[ " + " ; ".join(", ".join(row) for row in mat) + " ]"


def format_ring(r: RingDef) -> str:
    head = f"ring {r.name}" + (f" over {r.field}" if r.field else "")
    if r.basis is None:
        return f"{head} vars {' '.join(r.variables)} ; relations {', '.join(r.relations)} ;"
    out = f"{head} basis 1 {' '.join(r.basis)} ;".replace("1  ;", "1 ;")
    if r.products:
        out += " products " + ", ".join(f"{a}*{b} = {c}" for a, b, c in r.products) + " ;"
    return out


def format_module(m: ModuleDef) -> str:
    head = f"module {m.name} over {m.ring}"
    if m.kind == "presented":
        return f"{head} presented by {_fmt_matrix(m.matrix)} ;"
    if m.kind == "builtin":
        return f"{head} builtin {m.builtin} ;"
    return f"{head} action " + ", ".join(f"{v} = {_fmt_matrix(a)}" for v, a in m.actions) + " ;"


def format_definitions(d: DefinitionFile) -> str:
    lines = [format_ring(r) for r in d.rings] + [format_module(m) for m in d.modules]
    return "\n".join(lines) + "\n"


# -- resolution ---------------------------------------------------------------------------


def field_from_text(text: str) -> Field:
    t = text.strip().replace(" ", "")
    if t.upper() == "QQ":
        return Field(None)
    m = re.fullmatch(r"(?:GF\((\d+)\)|(\d+))", t, flags=re.IGNORECASE)
    if not m:
        raise ValueError(f"cannot read a field from {text!r}; use GF(p) or QQ")
    return Field(int(m.group(1) or m.group(2)))


def default_field() -> Field:
    return field_from_text(os.environ.get("TOTREF_FIELD", "GF(101)"))


@dataclass
class Library:
    """Resolved definitions: algebras and modules by name, in file order."""

    rings: dict[str, LocalAlgebra]
    modules: dict[str, FinModule]
    source: DefinitionFile

    def ring(self, name: str) -> LocalAlgebra:
        if name not in self.rings:
            raise UnknownRing(f"no ring named {name!r}; defined: {', '.join(self.rings) or 'none'}")
        return self.rings[name]

    def module(self, name: str) -> FinModule:
        """A defined module, or ``RING:R``, ``RING:k``, ``RING:omega``."""
        if name in self.modules:
            return self.modules[name]
        if ":" in name:
            rname, b = name.split(":", 1)
            if b in BUILTINS:
                return builtin(self.ring(rname), b)
        raise UnknownModule(f"no module named {name!r}")

    def names(self) -> list[str]:
        return list(self.modules) + [f"{r}:{b}" for r in self.rings for b in BUILTINS]


def builtin(R: LocalAlgebra, which: str) -> FinModule:
    if which == "R":
        M = regular_module(R)
        M.label = R.name
    elif which == "k":
        M = residue_field(R)
    else:
        M = canonical_module(R)
        M.label = f"omega_{R.name}"
    return M


def _build_ring(r: RingDef, fallback: Field) -> LocalAlgebra:
    F = field_from_text(r.field) if r.field else fallback
    if r.basis is None:
        return build_quotient(list(r.variables), [x.replace("^", "**") for x in r.relations], F, name=r.name)
    import sympy

    names = ["1"] + list(r.basis)
    n = len(names)
    syms = {b: sympy.Symbol(b) for b in r.basis}
    index = {b: i + 1 for i, b in enumerate(r.basis)}
    table = np.empty((n, n, n), dtype=object)
    table[...] = F.scalar(0)
    for i in range(n):
        table[0, i, i] = table[i, 0, i] = F.scalar(1)
    given: dict[tuple[int, int], list] = {}
    for a, b, rhs in r.products:
        for v in (a, b):
            if v not in index:
                raise DefinitionSyntaxError(f"unknown basis name {v!r} in ring {r.name}", *r.pos)
        expr = sympy.expand(sympy.sympify(rhs.replace("^", "**"), locals=syms))
        stray = expr.free_symbols - set(syms.values())
        if stray:
            raise DefinitionSyntaxError(f"unknown basis name {sorted(map(str, stray))[0]!r} in ring {r.name}", *r.pos)
        vec = [F.scalar(0)] * n
        for mon, c in sympy.Poly(expr, *syms.values()).terms():
            if sum(mon) > 1:
                raise DefinitionSyntaxError(f"product {a}*{b} must be a linear combination of basis names", *r.pos)
            vec[0 if sum(mon) == 0 else 1 + list(mon).index(1)] = _coeff(c, F)
        key = (index[a], index[b])
        for k in (key, key[::-1]):
            if k in given and not all(x == y for x, y in zip(given[k], vec)):
                raise DefinitionSyntaxError(f"conflicting values for {a}*{b} in ring {r.name}", *r.pos)
            given[k] = vec
    for (i, j), vec in given.items():
        table[i, j, :] = vec
    return build_from_structure_constants(table, 0, list(range(1, n)), F, labels=names,
                                          name=r.name, variables=list(r.basis))


def _coeff(c, F: Field):
    from fractions import Fraction

    if hasattr(c, "p") and hasattr(c, "q"):
        c = Fraction(int(c.p), int(c.q))
    return F.scalar(c)


def _eval_matrix(R: LocalAlgebra, mat, where: str, pos: tuple[int, int] = (0, 0)) -> list[list[np.ndarray]]:
    widths = {len(row) for row in mat}
    if len(widths) != 1:
        raise BadMatrixShape(f"{where}: rows have different lengths {sorted(widths)}")
    known = set(R.variables)
    for row in mat:
        for e in row:
            for name in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", e):
                if name not in known:
                    raise DefinitionSyntaxError(f"{where}: {name!r} is not a variable of ring {R.name}", *pos)
    return [[parse_element(R, e.replace("^", "**")) for e in row] for row in mat]


def _build_module(m: ModuleDef, R: LocalAlgebra) -> FinModule:
    where = f"module {m.name} (line {m.pos[0]})"
    if m.kind == "builtin":
        M = builtin(R, m.builtin)
    elif m.kind == "presented":
        grid = _eval_matrix(R, m.matrix, where, m.pos)
        M = coker_of_free_matrix(FreeMatrix.from_elements(R, grid))
    else:
        F = R.field
        by_var = {}
        size = None
        for v, mat in m.actions:
            if v not in R.variables:
                raise DefinitionSyntaxError(f"{where}: {v!r} is not a variable of ring {R.name}", *m.pos)
            if v in by_var:
                raise DefinitionSyntaxError(f"{where}: action of {v!r} given twice", *m.pos)
            grid = _eval_matrix(R, mat, where, m.pos)
            rows, cols = len(grid), len(grid[0])
            if rows != cols or (size is not None and rows != size):
                raise BadMatrixShape(f"{where}: action of {v} is {rows}x{cols}; all must be square of one size")
            size = rows
            entries = []
            for row in grid:
                for e in row:
                    if not F.is_zero(np.delete(e, R.unit)):
                        raise BadMatrixShape(f"{where}: action entries must be scalars")
                    entries.append(e[R.unit])
            by_var[v] = F.asarray(np.array(entries, dtype=object).reshape(rows, cols))
        missing = [v for v in R.variables if v not in by_var]
        if missing:
            raise BadMatrixShape(f"{where}: no action given for {', '.join(missing)}")
        M = module_from_generator_actions(R, [by_var[v] for v in R.variables])
    M.label = m.name
    return M


def resolve_definitions(d: DefinitionFile, fallback: Field | None = None) -> Library:
    F = fallback or default_field()
    rings: dict[str, LocalAlgebra] = {}
    for r in d.rings:
        rings[r.name] = _build_ring(r, F)
    mods: dict[str, FinModule] = {}
    for m in d.modules:
        if m.ring not in rings:
            raise UnknownRing(f"module {m.name!r} refers to undefined ring {m.ring!r}")
        mods[m.name] = _build_module(m, rings[m.ring])
    return Library(rings, mods, d)


def load(text: str, fallback: Field | None = None) -> Library:
    return resolve_definitions(parse(text), fallback)


def iter_examples() -> Iterator[tuple[str, str]]:
    """``(file name, text)`` for each shipped example file."""
    from importlib import resources

    root = resources.files("totref") / "examples"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".totref"):
            yield entry.name, entry.read_text()


def example_library(fallback: Field | None = None) -> Library:
    """All shipped examples merged into one library."""
    text = "\n".join(t for _, t in iter_examples())
    return load(text, fallback)
