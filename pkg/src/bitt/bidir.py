"""The bidirectional checker: inference, checking, constrained inference.

Inference is syntax-directed (one clause per term former). Checking infers
and then compares with cumulativity; it is the only place cumulativity is
consulted. Constrained inference infers and then weak-head reduces the
type until the requested head is exposed, returning the reduced type
unchanged, never an enlarged one.

Context well-formedness is the caller's invariant, established once at the
boundary by check_wf_context and never re-checked at Var or Sort leaves.

Every successful judgment records a trace node (rule name, context,
subject, output, premise traces); the oracle's elaborator replays traces
into undirected derivations.

Extension point, not implemented here: richer inductive families
(parameters, indices, general match/fix) would add one HeadKind per
family, one constrained-inference clause exposing the family's head, and
one recursor clause following the same scrutinee-first shape as SigRec,
NatRec and EqRec below. Universe-polymorphic, cumulative families would
additionally need a subtyping check between the scrutinee's inferred type
and the instance rebuilt from stored levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .conversion import cumul
from .reduction import DEFAULT_FUEL, FuelExhausted, whnf
from .syntax import (
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


class HeadKind(Enum):
    SORT = "Sort"
    PI = "Pi"
    SIGMA = "Sigma"
    NAT = "Nat"
    EQ = "Eq"


class ErrorKind(Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    NOT_A_SORT = "NotASort"
    NOT_A_PRODUCT = "NotAProduct"
    NOT_A_SIGMA = "NotASigma"
    NOT_A_NAT = "NotANat"
    NOT_AN_EQ = "NotAnEq"
    CUMUL_FAILED = "CumulFailed"
    FUEL_EXHAUSTED = "FuelExhausted"


_MISMATCH = {
    HeadKind.SORT: ErrorKind.NOT_A_SORT,
    HeadKind.PI: ErrorKind.NOT_A_PRODUCT,
    HeadKind.SIGMA: ErrorKind.NOT_A_SIGMA,
    HeadKind.NAT: ErrorKind.NOT_A_NAT,
    HeadKind.EQ: ErrorKind.NOT_AN_EQ,
}

_HEAD_CLASS = {
    HeadKind.SORT: Sort,
    HeadKind.PI: Pi,
    HeadKind.SIGMA: Sigma,
    HeadKind.NAT: Nat,
    HeadKind.EQ: Eq,
}


class TypeCheckError(Exception):
    """Structured typing failure: what went wrong, and where in the subject."""

    def __init__(
        self,
        kind: ErrorKind,
        message: str,
        location: tuple[str, ...] = (),
        expected: Term | None = None,
        inferred: Term | None = None,
    ):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.location = location
        self.expected = expected
        self.inferred = inferred


@dataclass(frozen=True)
class Trace:
    """One fired rule: its judgment and the traces of its premises."""

    rule: str
    ctx: Context
    subject: Term | None
    output: Term | None
    premises: tuple[Trace, ...] = ()

    def iter_prefix(self):
        yield self.rule, self.subject, self.output
        for p in self.premises:
            yield from p.iter_prefix()


@dataclass(frozen=True)
class InferOutcome:
    ty: Term
    trace: Trace | None = None


@dataclass
class _Checker:
    fuel: int = DEFAULT_FUEL
    path: tuple[str, ...] = field(default_factory=tuple)

    def fail(self, kind, message, **kw):
        raise TypeCheckError(kind, message, location=self.path, **kw)

    def at(self, *steps: str) -> "_Checker":
        return _Checker(self.fuel, self.path + steps)

    def whnf(self, t: Term) -> Term:
        try:
            return whnf(t, self.fuel).term
        except FuelExhausted as e:
            raise TypeCheckError(
                ErrorKind.FUEL_EXHAUSTED, str(e), location=self.path
            ) from e

    def cumul(self, lo: Term, hi: Term) -> bool:
        try:
            return cumul(lo, hi, self.fuel)
        except FuelExhausted as e:
            raise TypeCheckError(
                ErrorKind.FUEL_EXHAUSTED, str(e), location=self.path
            ) from e

    # --- the three judgments -------------------------------------------

    def infer(self, ctx: Context, t: Term) -> Trace:
        match t:
            case Sort(i):
                return Trace("Sort", ctx, t, Sort(i + 1))

            case Var(k):
                try:
                    ty = ctx.lookup(k)
                except IndexError:
                    self.fail(
                        ErrorKind.UNBOUND_VARIABLE,
                        f"variable {k} not bound (context has {len(ctx)})",
                    )
                return Trace("Var", ctx, t, ty)

            case Pi(dom, cod):
                td = self.at("domain").infer_head(ctx, dom, HeadKind.SORT)
                tc = self.at("codomain").infer_head(
                    ctx.extend(dom), cod, HeadKind.SORT
                )
                out = Sort(max(td.output.level, tc.output.level))
                return Trace("Prod", ctx, t, out, (td, tc))

            case Lambda(dom, body):
                td = self.at("domain").infer_head(ctx, dom, HeadKind.SORT)
                tb = self.at("body").infer(ctx.extend(dom), body)
                return Trace("Abs", ctx, t, Pi(dom, tb.output), (td, tb))

            case App(head, arg):
                th = self.at("head").infer_head(ctx, head, HeadKind.PI)
                pi: Pi = th.output
                ta = self.at("arg").check(ctx, arg, pi.domain)
                return Trace("App", ctx, t, subst(pi.codomain, arg), (th, ta))

            case Sigma(first, second):
                t1 = self.at("first").infer_head(ctx, first, HeadKind.SORT)
                t2 = self.at("second").infer_head(
                    ctx.extend(first), second, HeadKind.SORT
                )
                out = Sort(max(t1.output.level, t2.output.level))
                return Trace("Sig-type", ctx, t, out, (t1, t2))

            case Pair(first_ty, second_ty, fst, snd):
                t1 = self.at("first_ty").infer_head(ctx, first_ty, HeadKind.SORT)
                t2 = self.at("second_ty").infer_head(
                    ctx.extend(first_ty), second_ty, HeadKind.SORT
                )
                tf = self.at("fst").check(ctx, fst, first_ty)
                ts = self.at("snd").check(ctx, snd, subst(second_ty, fst))
                out = Sigma(first_ty, second_ty)
                return Trace("Sig-cons", ctx, t, out, (t1, t2, tf, ts))

            case SigRec(motive, branch, scrutinee):
                tsc = self.at("scrutinee").infer_head(ctx, scrutinee, HeadKind.SIGMA)
                sig: Sigma = tsc.output
                tm = self.at("motive").infer_head(
                    ctx.extend(sig), motive, HeadKind.SORT
                )
                branch_ctx = ctx.extend(sig.first).extend(sig.second)
                branch_ty = subst(lift(motive, 2, 1), _pair_of_vars(sig))
                tb = self.at("branch").check(branch_ctx, branch, branch_ty)
                return Trace(
                    "Sig-rec", ctx, t, subst(motive, scrutinee), (tsc, tm, tb)
                )

            case Nat():
                return Trace("Nat-type", ctx, t, Sort(0))

            case Zero():
                return Trace("Nat-zero", ctx, t, Nat())

            case Succ(pred):
                tp = self.at("pred").check(ctx, pred, Nat())
                return Trace("Nat-succ", ctx, t, Nat(), (tp,))

            case NatRec(motive, base, step_, scrutinee):
                tsc = self.at("scrutinee").infer_head(ctx, scrutinee, HeadKind.NAT)
                tm = self.at("motive").infer_head(
                    ctx.extend(Nat()), motive, HeadKind.SORT
                )
                tb = self.at("base").check(ctx, base, subst(motive, Zero()))
                step_ctx = ctx.extend(Nat()).extend(motive)
                step_ty = subst(lift(motive, 2, 1), Succ(Var(1)))
                ts = self.at("step").check(step_ctx, step_, step_ty)
                return Trace(
                    "Nat-rec", ctx, t, subst(motive, scrutinee), (tsc, tm, tb, ts)
                )

            case Eq(ty, lhs, rhs):
                ta = self.at("ty").infer_head(ctx, ty, HeadKind.SORT)
                tl = self.at("lhs").check(ctx, lhs, ty)
                tr = self.at("rhs").check(ctx, rhs, ty)
                return Trace("Eq-type", ctx, t, ta.output, (ta, tl, tr))

            case Refl(ty, val):
                ta = self.at("ty").infer_head(ctx, ty, HeadKind.SORT)
                tv = self.at("val").check(ctx, val, ty)
                return Trace("Eq-refl", ctx, t, Eq(ty, val, val), (ta, tv))

            case EqRec(motive, branch, scrutinee):
                tsc = self.at("scrutinee").infer_head(ctx, scrutinee, HeadKind.EQ)
                eq: Eq = tsc.output
                motive_ctx = ctx.extend(eq.ty).extend(
                    Eq(lift(eq.ty, 1), lift(eq.lhs, 1), Var(0))
                )
                tm = self.at("motive").infer_head(motive_ctx, motive, HeadKind.SORT)
                branch_ty = subst(
                    subst(motive, lift(Refl(eq.ty, eq.lhs), 1)), eq.lhs
                )
                tb = self.at("branch").check(ctx, branch, branch_ty)
                out = subst(subst(motive, lift(scrutinee, 1)), eq.rhs)
                return Trace("Eq-rec", ctx, t, out, (tsc, tm, tb))

        raise AssertionError(f"no inference clause for {type(t).__name__}")

    def check(self, ctx: Context, t: Term, expected: Term) -> Trace:
        ti = self.infer(ctx, t)
        if not self.cumul(ti.output, expected):
            self.fail(
                ErrorKind.CUMUL_FAILED,
                "inferred type is not included in the expected one",
                expected=expected,
                inferred=ti.output,
            )
        return Trace("Check", ctx, t, expected, (ti,))

    def infer_head(self, ctx: Context, t: Term, head: HeadKind) -> Trace:
        ti = self.infer(ctx, t)
        reduced = self.whnf(ti.output)
        if not isinstance(reduced, _HEAD_CLASS[head]):
            self.fail(
                _MISMATCH[head],
                f"type of head {type(reduced).__name__} where {head.value} "
                "was required",
                inferred=reduced,
            )
        return Trace(f"{head.value}-Inf", ctx, t, reduced, (ti,))


def _pair_of_vars(sig: Sigma) -> Pair:
    # The pair (x, y) of the two branch variables, typed at sig lifted into
    # the branch context.
    return Pair(lift(sig.first, 2), lift(sig.second, 2, 1), Var(1), Var(0))


# --- public operations ---------------------------------------------------


def infer(ctx: Context, t: Term, fuel: int = DEFAULT_FUEL) -> InferOutcome:
    """Infer the principal type of t. Raises TypeCheckError on failure."""
    tr = _Checker(fuel).infer(ctx, t)
    return InferOutcome(tr.output, tr)


def check(ctx: Context, t: Term, expected: Term, fuel: int = DEFAULT_FUEL) -> Trace:
    """Check t against expected (assumed well-formed in ctx)."""
    return _Checker(fuel).check(ctx, t, expected)


def infer_constrained(
    ctx: Context, t: Term, head: HeadKind, fuel: int = DEFAULT_FUEL
) -> InferOutcome:
    """Infer, then weak-head reduce until `head` is exposed."""
    tr = _Checker(fuel).infer_head(ctx, t, head)
    return InferOutcome(tr.output, tr)


def check_wf_context(ctx: Context, fuel: int = DEFAULT_FUEL) -> Trace:
    """Validate every declaration in its prefix; the API-boundary entry point."""
    prefix = Context()
    tr = Trace("Empty", prefix, None, None)
    for pos, decl in enumerate(ctx):
        checker = _Checker(fuel, (f"decl[{pos}]",))
        td = checker.infer_head(prefix, decl, HeadKind.SORT)
        prefix = prefix.extend(decl)
        tr = Trace("Ext", prefix, decl, td.output, (tr, td))
    return tr


def principal_type(ctx: Context, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """The least type of t under cumulativity; alias of infer."""
    return infer(ctx, t, fuel).ty
