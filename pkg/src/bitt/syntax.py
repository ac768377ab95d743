"""Kernel term syntax: de Bruijn terms, contexts, lifting and substitution.

Terms are immutable dataclasses; structural equality doubles as alpha
equivalence because binders are nameless. Universe levels are plain
non-negative ints.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Term:
    """Base class of all term formers."""


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Sort(Term):
    level: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"negative universe level {self.level}")


@dataclass(frozen=True)
class Pi(Term):
    domain: Term
    codomain: Term  # binds 1


@dataclass(frozen=True)
class Lambda(Term):
    domain: Term
    body: Term  # binds 1


@dataclass(frozen=True)
class App(Term):
    head: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    first: Term
    second: Term  # binds 1


@dataclass(frozen=True)
class Pair(Term):
    # Fully annotated pair: carries the Sigma components it inhabits, so
    # that a pair infers a unique type.
    first_ty: Term
    second_ty: Term  # binds 1
    fst: Term
    snd: Term


@dataclass(frozen=True)
class SigRec(Term):
    motive: Term  # binds 1 (the scrutinee)
    branch: Term  # binds 2 (the two components)
    scrutinee: Term


@dataclass(frozen=True)
class Nat(Term):
    pass


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    pred: Term


@dataclass(frozen=True)
class NatRec(Term):
    motive: Term  # binds 1 (the scrutinee)
    base: Term
    step: Term  # binds 2 (predecessor, recursive result)
    scrutinee: Term


@dataclass(frozen=True)
class Eq(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Refl(Term):
    ty: Term
    val: Term


@dataclass(frozen=True)
class EqRec(Term):
    motive: Term  # binds 2 (endpoint, proof)
    branch: Term
    scrutinee: Term


# Field name -> number of extra binders the field is under, per term former.
# Drives every structural traversal (lift, subst, reduction, printing).
SUBTERM_FIELDS: dict[type, tuple[tuple[str, int], ...]] = {
    Var: (),
    Sort: (),
    Nat: (),
    Zero: (),
    Pi: (("domain", 0), ("codomain", 1)),
    Lambda: (("domain", 0), ("body", 1)),
    App: (("head", 0), ("arg", 0)),
    Sigma: (("first", 0), ("second", 1)),
    Pair: (("first_ty", 0), ("second_ty", 1), ("fst", 0), ("snd", 0)),
    SigRec: (("motive", 1), ("branch", 2), ("scrutinee", 0)),
    Succ: (("pred", 0),),
    NatRec: (("motive", 1), ("base", 0), ("step", 2), ("scrutinee", 0)),
    Eq: (("ty", 0), ("lhs", 0), ("rhs", 0)),
    Refl: (("ty", 0), ("val", 0)),
    EqRec: (("motive", 2), ("branch", 0), ("scrutinee", 0)),
}


def map_subterms(t: Term, f, depth: int = 0) -> Term:
    """Rebuild t with f(subterm, depth + binders) applied to each field."""
    spec = SUBTERM_FIELDS[type(t)]
    if not spec:
        return t
    updates = {}
    for name, binders in spec:
        old = getattr(t, name)
        new = f(old, depth + binders)
        if new is not old:
            updates[name] = new
    return replace(t, **updates) if updates else t


def lift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Shift free indices >= cutoff up by amount."""
    if amount == 0:
        return t

    def go(t: Term, cut: int) -> Term:
        if isinstance(t, Var):
            return Var(t.index + amount) if t.index >= cut else t
        return map_subterms(t, go, cut)

    return go(t, cutoff)


def subst(t: Term, u: Term, index: int = 0) -> Term:
    """Replace variable `index` in t by u; free indices above it drop by one.

    u lives in the context outside the substituted binder, so it is lifted
    by the number of binders crossed on the way in.
    """

    def go(t: Term, j: int) -> Term:
        if isinstance(t, Var):
            if t.index == j:
                return lift(u, j - index)
            if t.index > j:
                return Var(t.index - 1)
            return t
        return map_subterms(t, go, j)

    return go(t, index)


def alpha_eq(t: Term, u: Term) -> bool:
    """Alpha equivalence; plain structural equality on de Bruijn terms."""
    return t == u


def occurs_free(t: Term, index: int) -> bool:
    """Does variable `index` occur free in t?"""
    if isinstance(t, Var):
        return t.index == index
    return any(
        occurs_free(getattr(t, name), index + binders)
        for name, binders in SUBTERM_FIELDS[type(t)]
    )


def term_size(t: Term) -> int:
    return 1 + sum(
        term_size(getattr(t, name)) for name, _ in SUBTERM_FIELDS[type(t)]
    )


@dataclass(frozen=True)
class Context:
    """Telescope of declared variable types, innermost last.

    Var(0) refers to the last declaration; lookups lift the stored type
    into the full context.
    """

    decls: tuple[Term, ...] = ()

    def extend(self, ty: Term) -> Context:
        return Context(self.decls + (ty,))

    def lookup(self, index: int) -> Term:
        """Type of Var(index), valid in this whole context.

        Raises IndexError when the index is out of range.
        """
        if index < 0 or index >= len(self.decls):
            raise IndexError(index)
        ty = self.decls[len(self.decls) - 1 - index]
        return lift(ty, index + 1)

    def __len__(self) -> int:
        return len(self.decls)

    def __iter__(self):
        return iter(self.decls)


EMPTY = Context()


def _check_shape_table():
    for cls, spec in SUBTERM_FIELDS.items():
        declared = {f.name for f in fields(cls)}
        for name, _ in spec:
            assert name in declared, (cls, name)


_check_shape_table()
