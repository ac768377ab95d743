"""Replay a bidirectional trace as an undirected derivation.

Each trace node maps to the corresponding undirected rule; the three
computation judgments (Check and the constrained inferences) all become
Cumul nodes. Premises the bidirectional run never built (context
well-formedness at leaves, the type premise of Cumul, the codomain premise
of Abs) are reconstructed by running bidirectional inference on the type in
question and elaborating that trace in turn, which is exactly what validity
guarantees possible. A reconstruction failure is therefore not a user
error: it falsifies the correctness theorem and raises ElaborationError.
"""

from __future__ import annotations

from .. import bidir
from ..bidir import HeadKind, Trace, TypeCheckError
from ..reduction import DEFAULT_FUEL
from ..syntax import Context, Eq, Nat, Pi, Sigma, Sort, Term, Var, lift
from .derivation import Derivation


class ElaborationError(Exception):
    """The correctness theorem failed to materialize; strongest test failure."""


def _ext(prev: Derivation, decl_wf: Derivation) -> Derivation:
    return Derivation(
        "Ext", decl_wf.ctx.extend(decl_wf.term), None, None, (prev, decl_wf)
    )


class _Elaborator:
    def __init__(self, fuel: int):
        self.fuel = fuel
        self._wf_cache: dict[tuple, Derivation] = {}

    def wf(self, ctx: Context, ty: Term, ctxd: Derivation) -> Derivation:
        """A derivation of ctx |- ty : Sort(_), rebuilt through the checker."""
        if isinstance(ty, Sort):
            return Derivation("Sort", ctx, ty, Sort(ty.level + 1), (ctxd,))
        if isinstance(ty, Nat):
            return Derivation("Nat-type", ctx, ty, Sort(0), (ctxd,))
        key = (ctx.decls, ty)
        hit = self._wf_cache.get(key)
        if hit is not None:
            return hit
        try:
            trace = bidir.infer_constrained(ctx, ty, HeadKind.SORT, self.fuel).trace
        except TypeCheckError as e:
            raise ElaborationError(
                f"validity reconstruction failed for a type output: {e}"
            ) from e
        out = self.elab(trace, ctxd)
        self._wf_cache[key] = out
        return out

    def elab(self, tr: Trace, ctxd: Derivation) -> Derivation:
        ctx, t, ty = tr.ctx, tr.subject, tr.output
        match tr.rule:
            case "Sort" | "Var":
                return Derivation(tr.rule, ctx, t, ty, (ctxd,))

            case "Nat-type" | "Nat-zero":
                return Derivation(tr.rule, ctx, t, ty, (ctxd,))

            case "Prod" | "Sig-type":
                p_a = self.elab(tr.premises[0], ctxd)
                p_b = self.elab(tr.premises[1], _ext(ctxd, p_a))
                return Derivation(tr.rule, ctx, t, ty, (p_a, p_b))

            case "Abs":
                p_a = self.elab(tr.premises[0], ctxd)
                ext = _ext(ctxd, p_a)
                p_body = self.elab(tr.premises[1], ext)
                cod = p_body.ty
                p_cod = self.wf(ctx.extend(t.domain), cod, ext)
                level = max(p_a.ty.level, p_cod.ty.level)
                prod = Derivation(
                    "Prod", ctx, Pi(t.domain, cod), Sort(level), (p_a, p_cod)
                )
                return Derivation("Abs", ctx, t, ty, (prod, p_body))

            case "App":
                p_head = self.elab(tr.premises[0], ctxd)
                p_arg = self.elab(tr.premises[1], ctxd)
                return Derivation("App", ctx, t, ty, (p_head, p_arg))

            case "Check":
                p_term = self.elab(tr.premises[0], ctxd)
                p_ty = self.wf(ctx, ty, ctxd)
                return Derivation("Cumul", ctx, t, ty, (p_term, p_ty))

            case "Sort-Inf":
                p_term = self.elab(tr.premises[0], ctxd)
                p_ty = Derivation("Sort", ctx, ty, Sort(ty.level + 1), (ctxd,))
                return Derivation("Cumul", ctx, t, ty, (p_term, p_ty))

            case "Nat-Inf":
                p_term = self.elab(tr.premises[0], ctxd)
                p_ty = Derivation("Nat-type", ctx, ty, Sort(0), (ctxd,))
                return Derivation("Cumul", ctx, t, ty, (p_term, p_ty))

            case "Pi-Inf" | "Sigma-Inf" | "Eq-Inf":
                p_term = self.elab(tr.premises[0], ctxd)
                p_ty = self.wf(ctx, ty, ctxd)
                return Derivation("Cumul", ctx, t, ty, (p_term, p_ty))

            case "Sig-cons":
                p_a = self.elab(tr.premises[0], ctxd)
                p_b = self.elab(tr.premises[1], _ext(ctxd, p_a))
                p_fst = self.elab(tr.premises[2], ctxd)
                p_snd = self.elab(tr.premises[3], ctxd)
                return Derivation(tr.rule, ctx, t, ty, (p_a, p_b, p_fst, p_snd))

            case "Sig-rec":
                p_scrut = self.elab(tr.premises[0], ctxd)
                sig: Sigma = p_scrut.ty
                ext_sig = _ext(ctxd, self.wf(ctx, sig, ctxd))
                p_motive = self.elab(tr.premises[1], ext_sig)
                wf_a = self.wf(ctx, sig.first, ctxd)
                ext_a = _ext(ctxd, wf_a)
                wf_b = self.wf(ctx.extend(sig.first), sig.second, ext_a)
                ext_ab = _ext(ext_a, wf_b)
                p_branch = self.elab(tr.premises[2], ext_ab)
                return Derivation(tr.rule, ctx, t, ty, (p_motive, p_branch, p_scrut))

            case "Nat-succ":
                p = self.elab(tr.premises[0], ctxd)
                return Derivation(tr.rule, ctx, t, ty, (p,))

            case "Nat-rec":
                p_scrut = self.elab(tr.premises[0], ctxd)
                nat_wf = Derivation("Nat-type", ctx, Nat(), Sort(0), (ctxd,))
                ext_n = _ext(ctxd, nat_wf)
                p_motive = self.elab(tr.premises[1], ext_n)
                p_base = self.elab(tr.premises[2], ctxd)
                p_step = self.elab(tr.premises[3], _ext(ext_n, p_motive))
                return Derivation(
                    tr.rule, ctx, t, ty, (p_motive, p_base, p_step, p_scrut)
                )

            case "Eq-type":
                ps = tuple(self.elab(p, ctxd) for p in tr.premises)
                return Derivation(tr.rule, ctx, t, ty, ps)

            case "Eq-refl":
                ps = tuple(self.elab(p, ctxd) for p in tr.premises)
                return Derivation(tr.rule, ctx, t, ty, ps)

            case "Eq-rec":
                p_scrut = self.elab(tr.premises[0], ctxd)
                eq: Eq = p_scrut.ty
                wf_a = self.wf(ctx, eq.ty, ctxd)
                ext_a = _ext(ctxd, wf_a)
                fam = Eq(lift(eq.ty, 1), lift(eq.lhs, 1), Var(0))
                wf_fam = self.wf(ctx.extend(eq.ty), fam, ext_a)
                p_motive = self.elab(tr.premises[1], _ext(ext_a, wf_fam))
                p_branch = self.elab(tr.premises[2], ctxd)
                return Derivation(tr.rule, ctx, t, ty, (p_motive, p_branch, p_scrut))

        raise ElaborationError(f"trace rule {tr.rule!r} has no undirected image")


def elaborate(
    trace: Trace, ctx_derivation: Derivation, fuel: int = DEFAULT_FUEL
) -> Derivation:
    """Turn the trace of a successful run into a validating derivation.

    ctx_derivation must derive well-formedness of the trace's root context.
    """
    return _Elaborator(fuel).elab(trace, ctx_derivation)


def context_derivation(ctx: Context, fuel: int = DEFAULT_FUEL) -> Derivation:
    """Derive |- ctx by checking each declaration in its prefix."""
    el = _Elaborator(fuel)
    d = Derivation("Empty", Context(), None, None)
    prefix = Context()
    for decl in ctx:
        d = _ext(d, el.wf(prefix, decl, d))
        prefix = prefix.extend(decl)
    return d
