"""Undirected derivation trees and their validator.

The undirected system is not syntax-directed (Cumul can fire anywhere), so
the oracle never searches for derivations: it only checks that an explicit
tree instantiates the rule schemas, side conditions included. The expected
types of premises are recomputed here from the schemas rather than taken
from the bidirectional checker, so the two systems stay independent routes
to the same judgments.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..conversion import cumul
from ..reduction import DEFAULT_FUEL
from ..syntax import (
    App,
    Context,
    Eq,
    EqRec,
    Lambda,
    Nat,
    NatRec,
    Pair,
    Pi,
    Refl,
    Sigma,
    SigRec,
    Sort,
    Succ,
    Term,
    Var,
    Zero,
    lift,
    subst,
)

CONTEXT_RULES = ("Empty", "Ext")


@dataclass(frozen=True)
class Derivation:
    """One rule application: conclusion ctx |- term : ty (term/ty None for
    the context well-formedness judgment) over premise sub-derivations."""

    rule: str
    ctx: Context
    term: Term | None
    ty: Term | None
    premises: tuple[Derivation, ...] = ()


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    message: str | None = None
    path: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


class _Invalid(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _need(cond: bool, message: str):
    if not cond:
        raise _Invalid(message)


def _premise_count(d: Derivation, n: int):
    _need(len(d.premises) == n, f"expected {n} premises, got {len(d.premises)}")


def _ctx_premise(p: Derivation, ctx: Context):
    _need(p.rule in CONTEXT_RULES, f"premise must derive context well-formedness, got {p.rule}")
    _need(p.ctx == ctx, "context premise derives a different context")


def _typing(p: Derivation, ctx: Context, term: Term, what: str):
    _need(p.rule not in CONTEXT_RULES, f"{what}: typing premise required")
    _need(p.ctx == ctx, f"{what}: premise context mismatch")
    _need(p.term == term, f"{what}: premise subject mismatch")


def _sort_of(p: Derivation, what: str) -> int:
    _need(isinstance(p.ty, Sort), f"{what}: premise must conclude a sort")
    return p.ty.level


def _check_node(d: Derivation, fuel: int):
    t, ty = d.term, d.ty
    if d.rule in CONTEXT_RULES:
        _need(t is None and ty is None, "context judgment carries no term")
    else:
        _need(t is not None and ty is not None, "typing judgment needs term and type")

    match d.rule:
        case "Empty":
            _premise_count(d, 0)
            _need(len(d.ctx) == 0, "Empty concludes only the empty context")

        case "Ext":
            _premise_count(d, 2)
            _need(len(d.ctx) >= 1, "Ext needs a declaration")
            prefix = Context(d.ctx.decls[:-1])
            decl = d.ctx.decls[-1]
            _ctx_premise(d.premises[0], prefix)
            _typing(d.premises[1], prefix, decl, "Ext")
            _sort_of(d.premises[1], "Ext")

        case "Sort":
            _premise_count(d, 1)
            _ctx_premise(d.premises[0], d.ctx)
            _need(isinstance(t, Sort), "Sort subject must be a sort")
            _need(ty == Sort(t.level + 1), "level mismatch")

        case "Var":
            _premise_count(d, 1)
            _ctx_premise(d.premises[0], d.ctx)
            _need(isinstance(t, Var), "Var subject must be a variable")
            _need(t.index < len(d.ctx), "variable not bound")
            _need(ty == d.ctx.lookup(t.index), "declared type mismatch")

        case "Prod" | "Sig-type":
            _premise_count(d, 2)
            cls = Pi if d.rule == "Prod" else Sigma
            _need(isinstance(t, cls), f"{d.rule} subject mismatch")
            a, b = (t.domain, t.codomain) if d.rule == "Prod" else (t.first, t.second)
            _typing(d.premises[0], d.ctx, a, d.rule)
            i = _sort_of(d.premises[0], d.rule)
            _typing(d.premises[1], d.ctx.extend(a), b, d.rule)
            j = _sort_of(d.premises[1], d.rule)
            _need(ty == Sort(max(i, j)), "level mismatch")

        case "Abs":
            _premise_count(d, 2)
            _need(isinstance(t, Lambda), "Abs subject must be an abstraction")
            p_pi, p_body = d.premises
            _need(
                isinstance(p_pi.term, Pi) and p_pi.term.domain == t.domain,
                "Abs product premise must type the abstraction's product",
            )
            _typing(p_pi, d.ctx, p_pi.term, "Abs")
            _sort_of(p_pi, "Abs")
            _typing(p_body, d.ctx.extend(t.domain), t.body, "Abs")
            _need(p_body.ty == p_pi.term.codomain, "Abs codomain mismatch")
            _need(ty == p_pi.term, "Abs conclusion type mismatch")

        case "App":
            _premise_count(d, 2)
            _need(isinstance(t, App), "App subject must be an application")
            p_head, p_arg = d.premises
            _typing(p_head, d.ctx, t.head, "App")
            _need(isinstance(p_head.ty, Pi), "App head premise must conclude a product")
            _typing(p_arg, d.ctx, t.arg, "App")
            _need(p_arg.ty == p_head.ty.domain, "App argument type mismatch")
            _need(ty == subst(p_head.ty.codomain, t.arg), "App substitution mismatch")

        case "Cumul":
            _premise_count(d, 2)
            p_term, p_ty = d.premises
            _typing(p_term, d.ctx, t, "Cumul")
            _typing(p_ty, d.ctx, ty, "Cumul type premise")
            _sort_of(p_ty, "Cumul")
            _need(cumul(p_term.ty, ty, fuel), "cumulativity does not hold")

        case "Sig-cons":
            _premise_count(d, 4)
            _need(isinstance(t, Pair), "Sig-cons subject must be a pair")
            p_a, p_b, p_fst, p_snd = d.premises
            _typing(p_a, d.ctx, t.first_ty, "Sig-cons")
            _sort_of(p_a, "Sig-cons")
            _typing(p_b, d.ctx.extend(t.first_ty), t.second_ty, "Sig-cons")
            _sort_of(p_b, "Sig-cons")
            _typing(p_fst, d.ctx, t.fst, "Sig-cons")
            _need(p_fst.ty == t.first_ty, "Sig-cons first component type mismatch")
            _typing(p_snd, d.ctx, t.snd, "Sig-cons")
            _need(
                p_snd.ty == subst(t.second_ty, t.fst),
                "Sig-cons second component type mismatch",
            )
            _need(ty == Sigma(t.first_ty, t.second_ty), "Sig-cons conclusion mismatch")

        case "Sig-rec":
            _premise_count(d, 3)
            _need(isinstance(t, SigRec), "Sig-rec subject mismatch")
            p_motive, p_branch, p_scrut = d.premises
            _typing(p_scrut, d.ctx, t.scrutinee, "Sig-rec scrutinee")
            _need(isinstance(p_scrut.ty, Sigma), "Sig-rec scrutinee must have a sum type")
            sig: Sigma = p_scrut.ty
            _typing(p_motive, d.ctx.extend(sig), t.motive, "Sig-rec motive")
            _sort_of(p_motive, "Sig-rec")
            pair = Pair(lift(sig.first, 2), lift(sig.second, 2, 1), Var(1), Var(0))
            branch_ty = subst(lift(t.motive, 2, 1), pair)
            _typing(
                p_branch,
                d.ctx.extend(sig.first).extend(sig.second),
                t.branch,
                "Sig-rec branch",
            )
            _need(p_branch.ty == branch_ty, "Sig-rec branch type mismatch")
            _need(ty == subst(t.motive, t.scrutinee), "Sig-rec conclusion mismatch")

        case "Nat-type":
            _premise_count(d, 1)
            _ctx_premise(d.premises[0], d.ctx)
            _need(isinstance(t, Nat), "Nat-type subject mismatch")
            _need(ty == Sort(0), "Nat lives in the lowest sort")

        case "Nat-zero":
            _premise_count(d, 1)
            _ctx_premise(d.premises[0], d.ctx)
            _need(isinstance(t, Zero), "Nat-zero subject mismatch")
            _need(ty == Nat(), "zero is a natural")

        case "Nat-succ":
            _premise_count(d, 1)
            _need(isinstance(t, Succ), "Nat-succ subject mismatch")
            _typing(d.premises[0], d.ctx, t.pred, "Nat-succ")
            _need(d.premises[0].ty == Nat(), "Nat-succ premise must type a natural")
            _need(ty == Nat(), "successor is a natural")

        case "Nat-rec":
            _premise_count(d, 4)
            _need(isinstance(t, NatRec), "Nat-rec subject mismatch")
            p_motive, p_base, p_step, p_scrut = d.premises
            _typing(p_motive, d.ctx.extend(Nat()), t.motive, "Nat-rec motive")
            _sort_of(p_motive, "Nat-rec")
            _typing(p_base, d.ctx, t.base, "Nat-rec base")
            _need(p_base.ty == subst(t.motive, Zero()), "Nat-rec base type mismatch")
            step_ty = subst(lift(t.motive, 2, 1), Succ(Var(1)))
            _typing(
                p_step, d.ctx.extend(Nat()).extend(t.motive), t.step, "Nat-rec step"
            )
            _need(p_step.ty == step_ty, "Nat-rec step type mismatch")
            _typing(p_scrut, d.ctx, t.scrutinee, "Nat-rec scrutinee")
            _need(p_scrut.ty == Nat(), "Nat-rec scrutinee must be a natural")
            _need(ty == subst(t.motive, t.scrutinee), "Nat-rec conclusion mismatch")

        case "Eq-type":
            _premise_count(d, 3)
            _need(isinstance(t, Eq), "Eq-type subject mismatch")
            p_ty, p_lhs, p_rhs = d.premises
            _typing(p_ty, d.ctx, t.ty, "Eq-type")
            i = _sort_of(p_ty, "Eq-type")
            _typing(p_lhs, d.ctx, t.lhs, "Eq-type lhs")
            _need(p_lhs.ty == t.ty, "Eq-type lhs type mismatch")
            _typing(p_rhs, d.ctx, t.rhs, "Eq-type rhs")
            _need(p_rhs.ty == t.ty, "Eq-type rhs type mismatch")
            _need(ty == Sort(i), "Eq-type conclusion mismatch")

        case "Eq-refl":
            _premise_count(d, 2)
            _need(isinstance(t, Refl), "Eq-refl subject mismatch")
            p_ty, p_val = d.premises
            _typing(p_ty, d.ctx, t.ty, "Eq-refl")
            _sort_of(p_ty, "Eq-refl")
            _typing(p_val, d.ctx, t.val, "Eq-refl value")
            _need(p_val.ty == t.ty, "Eq-refl value type mismatch")
            _need(ty == Eq(t.ty, t.val, t.val), "Eq-refl conclusion mismatch")

        case "Eq-rec":
            _premise_count(d, 3)
            _need(isinstance(t, EqRec), "Eq-rec subject mismatch")
            p_motive, p_branch, p_scrut = d.premises
            _typing(p_scrut, d.ctx, t.scrutinee, "Eq-rec scrutinee")
            _need(isinstance(p_scrut.ty, Eq), "Eq-rec scrutinee must have an equality type")
            eq: Eq = p_scrut.ty
            motive_ctx = d.ctx.extend(eq.ty).extend(
                Eq(lift(eq.ty, 1), lift(eq.lhs, 1), Var(0))
            )
            _typing(p_motive, motive_ctx, t.motive, "Eq-rec motive")
            _sort_of(p_motive, "Eq-rec")
            branch_ty = subst(subst(t.motive, lift(Refl(eq.ty, eq.lhs), 1)), eq.lhs)
            _typing(p_branch, d.ctx, t.branch, "Eq-rec branch")
            _need(p_branch.ty == branch_ty, "Eq-rec branch type mismatch")
            result = subst(subst(t.motive, lift(t.scrutinee, 1)), eq.rhs)
            _need(ty == result, "Eq-rec conclusion mismatch")

        case _:
            raise _Invalid(f"unknown rule {d.rule!r}")


def validate(d: Derivation, fuel: int = DEFAULT_FUEL) -> ValidationResult:
    """Check every node against its rule schema; first failure wins.

    Elaborated derivations share subtrees (they are DAGs), so nodes already
    found valid are not rewalked.
    """
    seen: set[int] = set()

    def walk(node: Derivation, path: tuple[int, ...]) -> ValidationResult:
        if id(node) in seen:
            return ValidationResult(True)
        try:
            _check_node(node, fuel)
        except _Invalid as e:
            return ValidationResult(False, f"{node.rule}: {e.message}", path)
        for i, p in enumerate(node.premises):
            r = walk(p, path + (i,))
            if not r.ok:
                return r
        seen.add(id(node))
        return ValidationResult(True)

    return walk(d, ())
