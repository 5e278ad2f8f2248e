"""Deliberate defects that the verification suite must detect.

Engine code consults :func:`active` at a handful of points; activate a
mutant with ``with inject("skip-p-quotient"): ...``.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar

REGISTRY: dict[str, str] = {
    "skip-p-quotient": "stable Hom returns all of Hom (no quotient by maps through free modules)",
    "nonminimal-cover": "free covers carry one redundant generator",
    "nonminimal-syzygy": "syzygies are padded with a free summand",
    "nonminimal-left-approx": "left free approximations carry a redundant zero component",
    "transpose-no-dual": "transpose is taken without dualising the presentation",
    "tate-no-boundaries": "the complete-resolution route forgets to divide cocycles by coboundaries",
    "approx-skip-padding": "the syzygy-lifting step never pads with free summands",
    "approx-zero-lift": "the extension construction ignores the lifted extension class",
    "gperp-cover-drop-generator": "the free cover approximation drops a generator",
}

_active: ContextVar[frozenset] = ContextVar("totref_mutants", default=frozenset())


def active(name: str) -> bool:
    return name in _active.get()


def any_active() -> bool:
    return bool(_active.get())


@contextmanager
def inject(*names: str):
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise KeyError(f"unknown mutant(s): {unknown}")
    token = _active.set(_active.get() | frozenset(names))
    try:
        yield
    finally:
        _active.reset(token)
