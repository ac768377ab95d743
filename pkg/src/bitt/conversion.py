"""Algorithmic conversion and cumulativity.

Both relations weak-head reduce the two sides, compare heads, then recurse
on components. Cumulativity differs from conversion in exactly two places:
sorts compare by <= instead of =, and Pi codomains stay covariant while
domains are compared by plain conversion. Every other former compares its
components by conversion.
"""

from __future__ import annotations

from enum import Enum

from .reduction import DEFAULT_FUEL, _Budget, _whnf
from .syntax import Pi, Sort, SUBTERM_FIELDS, Term, Var


class RelKind(Enum):
    CONV = "conv"
    CUMUL = "cumul"


def _compare(t: Term, u: Term, rel: RelKind, budget: _Budget) -> bool:
    t = _whnf(t, budget).term
    u = _whnf(u, budget).term
    if t == u:
        return True
    match t, u:
        case Sort(i), Sort(j):
            return i <= j if rel is RelKind.CUMUL else i == j
        case Pi(a, b), Pi(a2, b2):
            return _compare(a, a2, RelKind.CONV, budget) and _compare(
                b, b2, rel, budget
            )
    if type(t) is not type(u):
        return False
    if isinstance(t, Var):
        return t.index == u.index
    spec = SUBTERM_FIELDS[type(t)]
    if not spec:
        return False  # distinct sorts handled above; other atoms are ==
    return all(
        _compare(getattr(t, name), getattr(u, name), RelKind.CONV, budget)
        for name, _ in spec
    )


def compare(t: Term, u: Term, rel: RelKind, fuel: int = DEFAULT_FUEL) -> bool:
    return _compare(t, u, rel, _Budget(fuel))


def convertible(t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> bool:
    """Do t and u have a common reduct? Callers guarantee well-formedness."""
    return compare(t, u, RelKind.CONV, fuel)


def cumul(t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> bool:
    """Is t a subtype of u under cumulativity?"""
    return compare(t, u, RelKind.CUMUL, fuel)
