"""The worked algebras and their standard modules."""

from __future__ import annotations

from .algebra import LocalAlgebra, build_quotient
from .homology import canonical_module
from .linalg import GF101, Field
from .modules import FinModule, cyclic_quotient, regular_module, residue_field


def algebra_A(field: Field = GF101) -> LocalAlgebra:
    """``k[x]/(x^2)``."""
    return build_quotient(["x"], ["x^2"], field, name="A")


def algebra_B(field: Field = GF101) -> LocalAlgebra:
    """``k[x,y,z]/(x^2, y^2, yz, z^2)``: non-Gorenstein, with ``x`` an exact zero-divisor."""
    return build_quotient(["x", "y", "z"], ["x^2", "y^2", "y*z", "z^2"], field, name="B")


# The one-dimensional ring whose reduction by w gives B.
CURVE_VARIABLES = ["x", "y", "z", "w"]
CURVE_RELATIONS = ["x^2", "y^2-y*w", "y*z-y*w", "z^2-y*w"]


def builtin_modules(R: LocalAlgebra) -> list[FinModule]:
    """``R``, ``k``, the canonical module and ``R/(v)`` for each variable ``v``."""
    Rm = regular_module(R)
    Rm.label = R.name or "R"
    out = [Rm, residue_field(R)]
    W = canonical_module(R)
    W.label = f"omega_{R.name}" if R.name else "omega"
    out.append(W)
    for v in R.variables:
        M = cyclic_quotient(R, [R.var(v)], f"{R.name or 'R'}/({v})")
        out.append(M)
    return out


def named_module(R: LocalAlgebra, label: str) -> FinModule:
    for M in builtin_modules(R):
        if M.label == label:
            return M
    raise KeyError(label)
