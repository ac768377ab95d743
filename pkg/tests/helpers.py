"""Shared test utilities: independent brute-force oracles and term strategies.

The brute-force relations below know nothing about the algorithmic
conversion module: they enumerate the one-step reduction relation to a
fixed point and compare reduct sets, so they can serve as an oracle for
the derived conversion/cumulativity examples.
"""

from __future__ import annotations

from hypothesis import strategies as st

from bitt.reduction import reducts
from bitt.syntax import (
    App,
    Eq,
    Lambda,
    Nat,
    Pi,
    Sigma,
    Sort,
    Succ,
    Term,
    Var,
    Zero,
)


def reduction_closure(t: Term, limit: int = 500) -> set[Term]:
    seen = {t}
    frontier = [t]
    while frontier:
        fresh = []
        for s in frontier:
            for r in reducts(s):
                if r not in seen:
                    seen.add(r)
                    fresh.append(r)
        frontier = fresh
        if len(seen) > limit:
            raise AssertionError("reduction closure too large for brute force")
    return seen


def brute_convertible(t: Term, u: Term) -> bool:
    return bool(reduction_closure(t) & reduction_closure(u))


def brute_cumul(t: Term, u: Term) -> bool:
    if brute_convertible(t, u):
        return True
    for a in reduction_closure(t):
        for b in reduction_closure(u):
            if _head_leq(a, b):
                return True
    return False


def _head_leq(a: Term, b: Term) -> bool:
    if isinstance(a, Sort) and isinstance(b, Sort):
        return a.level <= b.level
    if isinstance(a, Pi) and isinstance(b, Pi):
        return brute_convertible(a.domain, b.domain) and brute_cumul(
            a.codomain, b.codomain
        )
    return False


# Raw (not necessarily well-typed) terms for syntax-level properties.
raw_terms = st.recursive(
    st.one_of(
        st.builds(Var, st.integers(0, 3)),
        st.builds(Sort, st.integers(0, 3)),
        st.just(Nat()),
        st.just(Zero()),
    ),
    lambda inner: st.one_of(
        st.builds(Pi, inner, inner),
        st.builds(Lambda, inner, inner),
        st.builds(App, inner, inner),
        st.builds(Sigma, inner, inner),
        st.builds(Succ, inner),
        st.builds(Eq, inner, inner, inner),
    ),
    max_leaves=10,
)
