"""Finite-dimensional commutative local algebras over an exact field.

An algebra is stored by structure constants ``table[i, j, l]`` with
``e_i * e_j = sum_l table[i, j, l] e_l``.  Elements are coordinate vectors.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    FieldMismatch,
    NoUnit,
    NotArtinianDetected,
    NotAssociative,
    NotCommutative,
    NotLocal,
    NotNilpotent,
)
from .linalg import Field


class LocalAlgebra:
    """A validated commutative local ``k``-algebra ``R`` with maximal ideal ``m``.

    ``gens`` are vectors generating ``m`` as an ideal.  Construct through
    :func:`build_from_structure_constants` or :func:`build_quotient`.
    """

    def __init__(self, field: Field, table: np.ndarray, unit: int, gens: np.ndarray,
                 labels: Sequence[str] | None = None, name: str = "R",
                 variables: Sequence[str] | None = None):
        self.field = field
        self.table = table
        self.dim = table.shape[0]
        self.unit = unit
        self.gens = gens
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.dim)]
        self.name = name
        self.variables = list(variables) if variables is not None else [f"g{i}" for i in range(gens.shape[1])]
        # mult[i] is the matrix of multiplication by e_i
        self.mult = np.ascontiguousarray(np.transpose(table, (0, 2, 1)))

    def __repr__(self) -> str:
        return f"LocalAlgebra({self.name}, dim={self.dim}, {self.field})"

    # -- elements -----------------------------------------------------------

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim, 1)[:, 0]

    def one(self) -> np.ndarray:
        v = self.zero()
        v[self.unit] = self.field.scalar(1)
        return v

    def basis_element(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = self.field.scalar(1)
        return v

    def var(self, name: str) -> np.ndarray:
        return self.gens[:, self.variables.index(name)].copy()

    def mul_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``r -> a*r``."""
        F = self.field
        if F.dtype is object:
            out = F.zeros(self.dim, self.dim)
            for i in np.nonzero(a)[0]:
                out = out + a[i] * self.mult[i]
            return F.reduce(out)
        return F.reduce(np.tensordot(a, self.mult, axes=(0, 0)))

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.mul_matrix(a), b.reshape(-1, 1))[:, 0]

    def residue(self, a: np.ndarray):
        """Image of ``a`` in ``k = R/m``."""
        return self.field.reduce((self.residue_functional @ a.reshape(-1, 1)))[0, 0]

    def is_unit(self, a: np.ndarray) -> bool:
        return self.residue(a) != 0

    def inverse(self, a: np.ndarray) -> np.ndarray:
        return self.field.solve(self.mul_matrix(a), self.one())

    def power(self, a: np.ndarray, n: int) -> np.ndarray:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def format_element(self, a: np.ndarray) -> str:
        terms = []
        for i in np.nonzero(a)[0]:
            c = self.field.to_int(a[i])
            lab = self.labels[i]
            if lab == "1":
                terms.append(f"{c}")
            elif c == 1:
                terms.append(lab)
            else:
                terms.append(f"{c}*{lab}")
        return " + ".join(terms) if terms else "0"

    # -- ideals -------------------------------------------------------------

    def ideal_span(self, elems: np.ndarray) -> np.ndarray:
        """Basis of the ideal generated by the columns of ``elems``."""
        F = self.field
        if elems.shape[1] == 0:
            return F.zeros(self.dim, 0)
        cols = [F.matmul(self.mult[i], elems) for i in range(self.dim)]
        return F.column_basis(np.concatenate(cols, axis=1))

    @cached_property
    def max_ideal(self) -> np.ndarray:
        return self.ideal_span(self.gens)

    @cached_property
    def residue_functional(self) -> np.ndarray:
        F = self.field
        # functional killing m and sending 1 to 1
        sys = np.concatenate([self.max_ideal, self.one().reshape(-1, 1)], axis=1).T
        rhs = F.zeros(sys.shape[0], 1)
        rhs[-1, 0] = F.scalar(1)
        return F.solve(sys, rhs).T

    @cached_property
    def max_ideal_powers(self) -> list[np.ndarray]:
        """``[m, m^2, ..., m^N]`` with ``m^N = 0``."""
        F = self.field
        out = [self.max_ideal]
        while out[-1].shape[1]:
            prods = [F.matmul(self.mul_matrix(g), out[-1]) for g in self.gens.T]
            nxt = F.column_basis(np.concatenate(prods, axis=1)) if prods else F.zeros(self.dim, 0)
            if nxt.shape[1] == out[-1].shape[1]:
                raise NotNilpotent("powers of the maximal ideal stabilise at a nonzero ideal")
            out.append(nxt)
        return out

    @property
    def loewy_length(self) -> int:
        return len(self.max_ideal_powers)

    @cached_property
    def gen_mult(self) -> list[np.ndarray]:
        return [self.mul_matrix(g) for g in self.gens.T]

    def annihilator(self, elems: np.ndarray) -> np.ndarray:
        """Basis of ``(0 : I)`` for the ideal generated by columns of ``elems``."""
        F = self.field
        if elems.shape[1] == 0:
            return F.eye(self.dim)
        stacked = np.concatenate([self.mul_matrix(e) for e in elems.T], axis=0)
        return F.kernel(stacked)

    def socle(self) -> np.ndarray:
        return self.annihilator(self.gens)

    @property
    def is_gorenstein(self) -> bool:
        return self.socle().shape[1] == 1

    def same_as(self, other: "LocalAlgebra") -> bool:
        return other is self or (
            other.field == self.field
            and other.dim == self.dim
            and np.array_equal(other.table, self.table)
            and other.unit == self.unit
        )

    def to_json(self) -> dict:
        F = self.field
        return {
            "name": self.name,
            "field": F.tag,
            "dim": self.dim,
            "basis": self.labels,
            "socle_dim": int(self.socle().shape[1]),
            "gorenstein": self.is_gorenstein,
            "loewy_length": self.loewy_length,
        }


def build_from_structure_constants(table, unit: int, generators, field: Field,
                                   labels: Sequence[str] | None = None, name: str = "R",
                                   variables: Sequence[str] | None = None) -> LocalAlgebra:
    """Validate a structure-constant table and return the algebra.

    ``generators`` is a list of basis indices or a matrix whose columns are
    elements; they must generate the maximal ideal.
    """
    F = field
    t = F.asarray(table)
    n = t.shape[0]
    if t.shape != (n, n, n):
        raise ValueError("structure constants must have shape (dim, dim, dim)")
    if not np.array_equal(t, np.transpose(t, (1, 0, 2))):
        raise NotCommutative("e_i * e_j != e_j * e_i for some basis pair")
    # unit acts as identity
    if not (0 <= unit < n) or not np.array_equal(t[unit], F.eye(n)):
        raise NoUnit(f"basis element {unit} is not a multiplicative identity")
    # (e_i e_j) e_l = e_i (e_j e_l)
    lhs = F.reduce(np.einsum("ijm,mlq->ijlq", t.astype(object) if F.dtype is object else t, t))
    rhs = F.reduce(np.einsum("jlm,imq->ijlq", t.astype(object) if F.dtype is object else t, t))
    if not np.array_equal(lhs, rhs):
        raise NotAssociative("multiplication is not associative")

    gens = np.asarray(generators)
    if gens.ndim == 1 or (gens.ndim == 2 and gens.shape[0] != n) or gens.size == 0:
        idx = [int(i) for i in np.asarray(generators).ravel()]
        gens = F.zeros(n, len(idx))
        for j, i in enumerate(idx):
            gens[i, j] = F.scalar(1)
    else:
        gens = F.asarray(gens)

    alg = LocalAlgebra(F, t, unit, gens, labels=labels, name=name, variables=variables)
    for j, g in enumerate(gens.T):
        lm = alg.mul_matrix(g)
        power = F.eye(n)
        for _ in range(n):
            power = F.matmul(power, lm)
        if F.is_zero(power):
            continue
        if F.rank(lm) < n:
            # neither nilpotent nor a unit: Fitting's lemma gives an idempotent != 0, 1
            raise NotLocal(f"generator {j} is a zero divisor that is not nilpotent")
        raise NotNilpotent(f"generator {j} is a unit, so it cannot lie in the maximal ideal")
    m = alg.max_ideal
    if m.shape[1] != n - 1:
        raise NotLocal(f"ideal generated by the generators has codimension {n - m.shape[1]}, expected 1")
    alg.max_ideal_powers  # raises NotNilpotent if m is not nilpotent
    _check_idempotents(alg)
    return alg


def _check_idempotents(alg: LocalAlgebra) -> None:
    # with m nilpotent of codim 1, every e = c + n (n in m) with e^2 = e forces c in {0,1}
    # and then n = 0; we still sample a few non-m elements for invertibility
    F = alg.field
    rng = np.random.default_rng(0)
    for _ in range(4):
        a = F.random(alg.dim, 1, rng)[:, 0]
        if alg.is_unit(a) and F.rank(alg.mul_matrix(a)) < alg.dim:
            raise NotLocal("an element outside the maximal ideal is not invertible")


# -- quotients of polynomial rings ----------------------------------------------


def _coerce_coeff(c, F: Field):
    try:
        if hasattr(c, "p") and hasattr(c, "q"):
            return F.scalar(Fraction(int(c.p), int(c.q)))
        return F.scalar(int(c))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FieldMismatch(f"coefficient {c!r} is not in {F}") from exc


def build_quotient(variables: Sequence[str], relations, field: Field, name: str = "R") -> LocalAlgebra:
    """``k[variables] / (relations)`` as a :class:`LocalAlgebra`.

    ``relations`` are strings or sympy expressions.  The ideal must contain a
    power of each variable (otherwise :class:`NotArtinianDetected`).
    Basis labels are the standard monomials of a degree-lex Groebner basis.
    """
    import sympy

    F = field
    variables = list(variables)
    syms = sympy.symbols(variables) if variables else []
    if isinstance(syms, sympy.Symbol):
        syms = [syms]
    local = {str(s): s for s in syms}
    rels = []
    for r in relations:
        expr = sympy.sympify(r, locals=local) if isinstance(r, str) else sympy.sympify(r)
        stray = expr.free_symbols - set(syms)
        if stray:
            raise FieldMismatch(f"relation {r!r} uses unknown symbols {sorted(map(str, stray))}")
        for c in sympy.Poly(expr, *syms).coeffs() if syms else [expr]:
            if not c.is_Rational:
                raise FieldMismatch(f"coefficient {c} of {r!r} is not rational")
        rels.append(sympy.expand(expr))
    rels = [r for r in rels if r != 0]

    if not syms:
        if rels:
            raise NotLocal("nonzero constant relation kills the field")
        return build_from_structure_constants([[[1]]], 0, [], F, labels=["1"], name=name, variables=[])

    opts = {"order": "grlex"}
    if F.p is not None:
        opts["modulus"] = F.p
    else:
        opts["domain"] = "QQ"
    if rels:
        G = sympy.groebner(rels, *syms, **opts)
        exprs = list(G.exprs)
    else:
        G, exprs = None, []
    if any(e.is_number and e != 0 for e in exprs):
        raise NotLocal("relations generate the unit ideal")
    lead = [sympy.Poly(e, *syms).monoms(order="grlex")[0] for e in exprs]
    bounds = []
    for i, v in enumerate(variables):
        pure = [m[i] for m in lead if all(m[j] == 0 for j in range(len(syms)) if j != i) and m[i] > 0]
        if not pure:
            raise NotArtinianDetected(f"no power of {v} lies in the relation ideal; the quotient is not Artinian")
        bounds.append(min(pure))

    standard = []
    for e in itertools.product(*[range(b) for b in bounds]):
        if not any(all(e[j] >= m[j] for j in range(len(e))) for m in lead):
            standard.append(e)
    # degree first, then x > y > z ...
    standard.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(standard)}
    n = len(standard)

    def reduce(expo):
        mono = sympy.Mul(*[s ** k for s, k in zip(syms, expo)])
        rem = G.reduce(mono)[1] if G is not None else mono
        vec = [F.scalar(0)] * n
        if rem == 0:
            return vec
        for mon, c in sympy.Poly(rem, *syms).terms():
            if mon not in index:
                raise NotArtinianDetected(f"normal form of {mono} leaves the standard monomials")
            vec[index[mon]] = _coerce_coeff(c, F)
        return vec

    table = np.empty((n, n, n), dtype=object)
    cache: dict[tuple, list] = {}
    for i, a in enumerate(standard):
        for j, b in enumerate(standard):
            prod = tuple(x + y for x, y in zip(a, b))
            if prod not in cache:
                cache[prod] = reduce(prod)
            table[i, j, :] = cache[prod]

    gens = F.zeros(n, len(syms))
    for k in range(len(syms)):
        e = tuple(1 if j == k else 0 for j in range(len(syms)))
        gens[:, k] = F.asarray(reduce(e))
    labels = [_monomial_label(variables, e) for e in standard]
    try:
        return build_from_structure_constants(table, index[tuple([0] * len(syms))], gens, F,
                                              labels=labels, name=name, variables=variables)
    except NotNilpotent as exc:
        raise NotLocal(str(exc)) from exc


def _monomial_label(variables: Sequence[str], expo: tuple[int, ...]) -> str:
    parts = []
    for v, k in zip(variables, expo):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) if parts else "1"


def parse_element(R: LocalAlgebra, text: str) -> np.ndarray:
    """Evaluate a polynomial string in the algebra's variables."""
    import sympy

    syms = sympy.symbols(R.variables) if R.variables else []
    if isinstance(syms, sympy.Symbol):
        syms = [syms]
    expr = sympy.expand(sympy.sympify(text, locals={str(s): s for s in syms}))
    F = R.field
    out = R.zero()
    poly = sympy.Poly(expr, *syms) if syms else None
    terms = poly.terms() if poly is not None else [((), expr)]
    for mon, c in terms:
        term = R.one()
        for s_idx, k in enumerate(mon):
            for _ in range(k):
                term = R.mul(term, R.gens[:, s_idx])
        out = F.add(out, F.scale(_coerce_coeff(c, F), term))
    return out
