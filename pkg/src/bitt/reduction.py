"""Beta/iota reduction: one-step relation, weak-head reduction, normalization.

Weak-head reduction is the strategy the checker commits to when it needs to
expose the head constructor of a type. Full normalization exists for the
conversion tests and the CLI, not for the checker's hot path.

Reduction is fuel-limited. Exhausting fuel means the caller handed us a
term we cannot finish reducing within the budget; on well-typed terms this
never happens, so it is reported as an internal error, not a type error.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .syntax import (
    App,
    EqRec,
    Lambda,
    NatRec,
    Pair,
    Refl,
    SigRec,
    Succ,
    SUBTERM_FIELDS,
    Term,
    Zero,
    lift,
    subst,
)

DEFAULT_FUEL = 1_000_000


class FuelExhausted(Exception):
    """Raised when a reduction exceeds its head-step budget."""

    def __init__(self, fuel: int):
        super().__init__(f"reduction did not finish within {fuel} head steps")
        self.fuel = fuel


class _Budget:
    __slots__ = ("left", "total")

    def __init__(self, fuel: int):
        self.left = fuel
        self.total = fuel

    def spend(self):
        if self.left <= 0:
            raise FuelExhausted(self.total)
        self.left -= 1


@dataclass(frozen=True)
class WhnfResult:
    term: Term
    steps: int


def contract(t: Term) -> Term | None:
    """Contract the root redex of t, if t is one."""
    match t:
        case App(Lambda(_, body), arg):
            return subst(body, arg)
        case SigRec(_, branch, Pair(_, _, a, b)):
            return subst(subst(branch, lift(b, 1)), a)
        case NatRec(_, base, _, Zero()):
            return base
        case NatRec(motive, base, step_, Succ(n)):
            rec = NatRec(motive, base, step_, n)
            return subst(subst(step_, lift(rec, 1)), n)
        case EqRec(_, branch, Refl(_, _)):
            return branch
    return None


def head_step(t: Term) -> Term | None:
    """One reduction at head position: the root redex, or whatever blocks it.

    Only descends into an application head or a recursor scrutinee, never
    under binders or into arguments.
    """
    r = contract(t)
    if r is not None:
        return r
    match t:
        case App(head, _):
            h = head_step(head)
            return replace(t, head=h) if h is not None else None
        case SigRec(_, _, s) | NatRec(_, _, _, s) | EqRec(_, _, s):
            s2 = head_step(s)
            return replace(t, scrutinee=s2) if s2 is not None else None
    return None


def step(t: Term) -> Term | None:
    """Leftmost-outermost one-step reduction, or None on normal forms."""
    r = contract(t)
    if r is not None:
        return r
    for name, _ in SUBTERM_FIELDS[type(t)]:
        r = step(getattr(t, name))
        if r is not None:
            return replace(t, **{name: r})
    return None


def reducts(t: Term) -> list[Term]:
    """All one-step reducts of t, outermost first, subterms left to right.

    This enumerates the full reduction relation (congruence closure), so
    reducts(t)[0] coincides with step(t) when t is reducible.
    """
    out = []
    r = contract(t)
    if r is not None:
        out.append(r)
    for name, _ in SUBTERM_FIELDS[type(t)]:
        for r in reducts(getattr(t, name)):
            out.append(replace(t, **{name: r}))
    return out


def _whnf(t: Term, budget: _Budget) -> WhnfResult:
    steps = 0
    while True:
        r = head_step(t)
        if r is None:
            return WhnfResult(t, steps)
        budget.spend()
        steps += 1
        t = r


def whnf(t: Term, fuel: int = DEFAULT_FUEL) -> WhnfResult:
    """Reduce until the outermost constructor is stable."""
    return _whnf(t, _Budget(fuel))


def _normalize(t: Term, budget: _Budget) -> Term:
    # A whnf keeps its head constructor when subterms are normalized, so
    # whnf-then-recurse reaches the normal form in one pass.
    t = _whnf(t, budget).term
    return _normalize_fields(t, budget)


def _normalize_fields(t: Term, budget: _Budget) -> Term:
    spec = SUBTERM_FIELDS[type(t)]
    if not spec:
        return t
    updates = {}
    for name, _ in spec:
        old = getattr(t, name)
        new = _normalize(old, budget)
        if new is not old:
            updates[name] = new
    return replace(t, **updates) if updates else t


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Full beta/iota normal form (unique by confluence on well-typed terms)."""
    return _normalize(t, _Budget(fuel))
