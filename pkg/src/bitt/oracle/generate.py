"""Seeded generator of valid undirected derivations.

Derivations are built bottom-up by weighted random rule selection; every
term is created together with the derivation that justifies it, so the
result validates by construction. Generation works in two modes mirroring
the rules' demands: synthesize a judgment (gen_infer) or inhabit a given
type exactly (gen_check). A final Cumul node may enlarge the conclusion
type, so generated types are generally not principal.

Types used where a derivation must later be rebuilt are kept inside a
"simple" fragment (sorts, naturals, sort-typed variables, products, sums
and equalities over simple terms) for which _wf_type can always produce a
well-formedness derivation. Context declarations may be wilder (beta-redex
types, equalities with convertible-but-distinct sides); their derivations
are assembled inline where they are created.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

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
from .derivation import Derivation, validate


@dataclass(frozen=True)
class GenConfig:
    max_depth: int = 4
    universe_cap: int = 2
    seed: int = 0
    cumul_insert_prob: float = 0.25

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.universe_cap < 0:
            raise ValueError("universe_cap must be non-negative")
        if not 0.0 <= self.cumul_insert_prob <= 1.0:
            raise ValueError("cumul_insert_prob must lie in [0, 1]")


@dataclass(frozen=True)
class GeneratedJudgment:
    derivation: Derivation
    ctx: Context
    term: Term
    ty: Term
    ctx_derivation: Derivation


class _DeadEnd(Exception):
    pass


@dataclass(frozen=True)
class _Env:
    ctx: Context
    ctxd: Derivation

    def extend(self, decl: Term, decl_wf: Derivation) -> "_Env":
        new_ctx = self.ctx.extend(decl)
        return _Env(new_ctx, Derivation("Ext", new_ctx, None, None, (self.ctxd, decl_wf)))


_EMPTY_ENV = _Env(Context(), Derivation("Empty", Context(), None, None))


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    # --- derivation rebuilding for the simple fragment -------------------

    def _wf_type(self, env: _Env, ty: Term) -> tuple[Derivation, int] | None:
        """Derivation of env.ctx |- ty : Sort(level), or None outside the
        simple fragment."""
        ctx = env.ctx
        match ty:
            case Sort(i):
                return Derivation("Sort", ctx, ty, Sort(i + 1), (env.ctxd,)), i + 1
            case Nat():
                return Derivation("Nat-type", ctx, ty, Sort(0), (env.ctxd,)), 0
            case Var(k):
                if k < len(ctx) and isinstance(ctx.lookup(k), Sort):
                    level = ctx.lookup(k).level
                    return Derivation("Var", ctx, ty, ctx.lookup(k), (env.ctxd,)), level
                return None
            case Pi(a, b) | Sigma(a, b):
                ra = self._wf_type(env, a)
                if ra is None:
                    return None
                da, i = ra
                rb = self._wf_type(env.extend(a, da), b)
                if rb is None:
                    return None
                db, j = rb
                rule = "Prod" if isinstance(ty, Pi) else "Sig-type"
                return (
                    Derivation(rule, ctx, ty, Sort(max(i, j)), (da, db)),
                    max(i, j),
                )
            case Eq(a, l, r):
                ra = self._wf_type(env, a)
                if ra is None:
                    return None
                da, i = ra
                dl = self._simple_term(env, l, a)
                dr = self._simple_term(env, r, a)
                if dl is None or dr is None:
                    return None
                return Derivation("Eq-type", ctx, ty, Sort(i), (da, dl, dr)), i
        return None

    def _simple_term(self, env: _Env, t: Term, ty: Term) -> Derivation | None:
        """Derivation of env.ctx |- t : ty for leaf-level terms only."""
        ctx = env.ctx
        match t:
            case Var(k):
                if k < len(ctx) and ctx.lookup(k) == ty:
                    return Derivation("Var", ctx, t, ty, (env.ctxd,))
            case Zero():
                if ty == Nat():
                    return Derivation("Nat-zero", ctx, t, ty, (env.ctxd,))
            case Succ(n):
                if ty == Nat():
                    dn = self._simple_term(env, n, Nat())
                    if dn is not None:
                        return Derivation("Nat-succ", ctx, t, ty, (dn,))
            case Sort(i):
                if ty == Sort(i + 1):
                    return Derivation("Sort", ctx, t, ty, (env.ctxd,))
            case Nat():
                if ty == Sort(0):
                    return Derivation("Nat-type", ctx, t, ty, (env.ctxd,))
        return None

    # --- random pieces ----------------------------------------------------

    def _sort_vars(self, env: _Env) -> list[int]:
        return [
            k
            for k in range(len(env.ctx))
            if isinstance(env.ctx.lookup(k), Sort)
        ]

    def _vars_of(self, env: _Env, ty: Term) -> list[int]:
        return [k for k in range(len(env.ctx)) if env.ctx.lookup(k) == ty]

    def _numeral(self) -> Term:
        t: Term = Zero()
        for _ in range(self.rng.randrange(4)):
            t = Succ(t)
        return t

    def _simple_inhabitant(self, env: _Env, ty: Term) -> Term | None:
        """A leaf term of the given type, or None."""
        options: list[Term] = []
        if ty == Nat():
            options.append(self._numeral())
        if isinstance(ty, Sort) and ty.level >= 1:
            options.append(Sort(ty.level - 1))
        if ty == Sort(0):
            options.append(Nat())
        options.extend(Var(k) for k in self._vars_of(env, ty))
        if not options:
            return None
        return self.rng.choice(options)

    def gen_type(self, env: _Env, depth: int, need_inhabit: bool = True) -> Term:
        """A type inside the simple fragment; when need_inhabit, one that
        gen_check can always try to inhabit."""
        rng = self.rng
        cap = self.cfg.universe_cap
        forms = ["sort", "sort", "nat", "nat"]
        if depth > 0:
            forms += ["pi", "pi", "sigma", "eq"]
        if not need_inhabit and self._sort_vars(env):
            forms.append("var")
        match rng.choice(forms):
            case "sort":
                return Sort(rng.randint(0, cap))
            case "nat":
                return Nat()
            case "var":
                return Var(rng.choice(self._sort_vars(env)))
            case "pi":
                dom = self.gen_type(env, depth - 1, need_inhabit=False)
                wf = self._wf_type(env, dom)
                if wf is None:
                    return Nat()
                cod = self.gen_type(env.extend(dom, wf[0]), depth - 1, need_inhabit)
                return Pi(dom, cod)
            case "sigma":
                first = self.gen_type(env, depth - 1, need_inhabit)
                wf = self._wf_type(env, first)
                if wf is None:
                    return Nat()
                second = self.gen_type(env.extend(first, wf[0]), depth - 1, need_inhabit)
                return Sigma(first, second)
            case "eq":
                base = rng.choice([Nat(), Sort(rng.randint(0, cap))])
                side = self._simple_inhabitant(env, base)
                if side is None:
                    return Nat()
                return Eq(base, side, side)
        raise AssertionError

    def gen_ctx_type(self, env: _Env, depth: int) -> tuple[Term, Derivation]:
        """A declaration type with its well-formedness derivation; may fall
        outside the simple fragment (redex types, asymmetric equalities)."""
        rng = self.rng
        roll = rng.random()
        if roll < 0.2:
            # Type hidden behind a beta redex: (\\X : Sort j. X) T.
            base = self.gen_type(env, depth - 1)
            wf = self._wf_type(env, base)
            if wf is not None:
                d_base, level = wf
                return self._type_redex(env, base, d_base, level)
        elif roll < 0.35:
            # Equality whose right side reduces to the left one.
            base = rng.choice([Nat(), Sort(rng.randint(0, self.cfg.universe_cap))])
            side = self._simple_inhabitant(env, base)
            d_side = (
                self._simple_term(env, side, base) if side is not None else None
            )
            if d_side is not None:
                d_base = self._wf_type(env, base)[0]
                d_red, red = self._term_redex(env, side, d_side, base, d_base)
                ty = Eq(base, side, red)
                return ty, Derivation(
                    "Eq-type", env.ctx, ty, d_base.ty, (d_base, d_side, d_red)
                )
        ty = self.gen_type(env, depth, need_inhabit=rng.random() < 0.7)
        wf = self._wf_type(env, ty)
        if wf is None:
            ty = Nat()
            wf = self._wf_type(env, ty)
        return ty, wf[0]

    def _type_redex(
        self, env: _Env, base: Term, d_base: Derivation, level: int
    ) -> tuple[Term, Derivation]:
        """(\\X : Sort level. X) base, with its App derivation."""
        ctx = env.ctx
        sort = Sort(level)
        d_sort = Derivation("Sort", ctx, sort, Sort(level + 1), (env.ctxd,))
        inner = env.extend(sort, d_sort)
        d_sort_in = Derivation("Sort", inner.ctx, sort, Sort(level + 1), (inner.ctxd,))
        d_var = Derivation("Var", inner.ctx, Var(0), sort, (inner.ctxd,))
        pi = Pi(sort, sort)
        d_pi = Derivation("Prod", ctx, pi, Sort(level + 1), (d_sort, d_sort_in))
        lam = Lambda(sort, Var(0))
        d_lam = Derivation("Abs", ctx, lam, pi, (d_pi, d_var))
        term = App(lam, base)
        return term, Derivation("App", ctx, term, sort, (d_lam, d_base))

    def _term_redex(
        self, env: _Env, val: Term, d_val: Derivation, ty: Term, d_ty: Derivation
    ) -> tuple[Derivation, Term]:
        """(\\x : ty. x) val, a redex convertible to val, with derivation."""
        ctx = env.ctx
        inner = env.extend(ty, d_ty)
        lifted = lift(ty, 1)
        d_lift = self._wf_type(inner, lifted)
        if d_lift is None:
            return d_val, val
        d_var = Derivation("Var", inner.ctx, Var(0), lifted, (inner.ctxd,))
        pi = Pi(ty, lifted)
        d_pi = Derivation(
            "Prod", ctx, pi, Sort(max(d_ty.ty.level, d_lift[1])), (d_ty, d_lift[0])
        )
        lam = Lambda(ty, Var(0))
        d_lam = Derivation("Abs", ctx, lam, pi, (d_pi, d_var))
        term = App(lam, val)
        return Derivation("App", ctx, term, ty, (d_lam, d_val)), term

    # --- checking mode: inhabit a type exactly ----------------------------

    def gen_check(
        self,
        env: _Env,
        ty: Term,
        depth: int,
        wf: Derivation | None = None,
    ) -> tuple[Derivation, Term]:
        """A derivation of env.ctx |- t : ty for a fresh random t.

        The conclusion type is exactly ty; Cumul only appears inside
        strategies that can rebuild the type premise themselves.
        """
        rng = self.rng
        ctx = env.ctx
        exact_vars = self._vars_of(env, ty)
        if depth <= 0:
            return self._check_leaf(env, ty, exact_vars)
        if exact_vars and rng.random() < 0.25:
            k = rng.choice(exact_vars)
            return Derivation("Var", ctx, Var(k), ty, (env.ctxd,)), Var(k)

        strategies = self._check_strategies(env, ty, depth, wf)
        rng.shuffle(strategies)
        for strat in strategies:
            try:
                return strat()
            except _DeadEnd:
                continue
        return self._check_leaf(env, ty, exact_vars)

    def _check_leaf(self, env, ty, exact_vars) -> tuple[Derivation, Term]:
        ctx = env.ctx
        if exact_vars:
            k = self.rng.choice(exact_vars)
            return Derivation("Var", ctx, Var(k), ty, (env.ctxd,)), Var(k)
        t = self._simple_inhabitant(env, ty)
        if t is None:
            raise _DeadEnd
        d = self._simple_term(env, t, ty)
        if d is None:
            raise _DeadEnd
        return d, t

    def _check_strategies(self, env, ty, depth, wf):
        strategies = []
        match ty:
            case Sort(i):
                strategies += [
                    lambda: self._check_sort_leafy(env, i),
                    lambda: self._check_sort_former(env, i, depth, Pi),
                    lambda: self._check_sort_former(env, i, depth, Sigma),
                    lambda: self._check_sort_eq(env, i, depth),
                ]
                if i >= 1:
                    strategies.append(lambda: self._check_sort_cumul(env, i, depth))
            case Nat():
                strategies += [
                    lambda: self._check_leaf(env, ty, self._vars_of(env, ty)),
                    lambda: self._check_nat_succ(env, depth),
                    lambda: self._check_redex(env, Nat(), depth),
                    lambda: self._check_natrec_nat(env, depth),
                ]
            case Pi(_, _):
                strategies.append(lambda: self._check_lambda(env, ty, depth, wf))
            case Sigma(_, _):
                strategies.append(lambda: self._check_pair(env, ty, depth, wf))
            case Eq(_, _, _):
                strategies.append(lambda: self._check_refl(env, ty, wf))
        return strategies

    def _check_sort_leafy(self, env, level) -> tuple[Derivation, Term]:
        ctx = env.ctx
        choices = []
        if level >= 1:
            choices.append(
                lambda: (
                    Derivation("Sort", ctx, Sort(level - 1), Sort(level), (env.ctxd,)),
                    Sort(level - 1),
                )
            )
        if level == 0:
            choices.append(
                lambda: (Derivation("Nat-type", ctx, Nat(), Sort(0), (env.ctxd,)), Nat())
            )
        if not choices:
            raise _DeadEnd
        return self.rng.choice(choices)()

    def _check_sort_cumul(self, env, level, depth) -> tuple[Derivation, Term]:
        # Inhabit a strictly lower sort, then lift with an explicit Cumul.
        lower = self.rng.randint(0, level - 1)
        d, t = self.gen_check(env, Sort(lower), depth - 1)
        d_sort = Derivation("Sort", env.ctx, Sort(level), Sort(level + 1), (env.ctxd,))
        return Derivation("Cumul", env.ctx, t, Sort(level), (d, d_sort)), t

    def _check_sort_former(self, env, level, depth, cls) -> tuple[Derivation, Term]:
        d_first, first = self.gen_check(env, Sort(level), depth - 1)
        inner = env.extend(first, d_first)
        d_second, second = self.gen_check(inner, Sort(level), depth - 1)
        rule = "Prod" if cls is Pi else "Sig-type"
        ty = cls(first, second)
        return (
            Derivation(rule, env.ctx, ty, Sort(level), (d_first, d_second)),
            ty,
        )

    def _check_sort_eq(self, env, level, depth) -> tuple[Derivation, Term]:
        d_base, base = self.gen_check(env, Sort(level), depth - 1)
        d_side, side = self.gen_check(env, base, depth - 1, wf=d_base)
        ty = Eq(base, side, side)
        return (
            Derivation("Eq-type", env.ctx, ty, Sort(level), (d_base, d_side, d_side)),
            ty,
        )

    def _check_nat_succ(self, env, depth) -> tuple[Derivation, Term]:
        d, n = self.gen_check(env, Nat(), depth - 1)
        return Derivation("Nat-succ", env.ctx, Succ(n), Nat(), (d,)), Succ(n)

    def _check_redex(self, env, ty, depth) -> tuple[Derivation, Term]:
        """A beta redex (\\x : A. body) u whose type is exactly ty; ty must
        not mention the bound variable, which holds for closed heads like
        Nat."""
        dom = self.gen_type(env, depth - 1)
        wf_dom = self._wf_type(env, dom)
        if wf_dom is None:
            raise _DeadEnd
        d_dom, _ = wf_dom
        d_arg, arg = self.gen_check(env, dom, depth - 1, wf=d_dom)
        inner = env.extend(dom, d_dom)
        lifted_ty = lift(ty, 1)
        wf_cod = self._wf_type(inner, lifted_ty)
        if wf_cod is None:
            raise _DeadEnd
        d_body, body = self.gen_check(inner, lifted_ty, depth - 1, wf=wf_cod[0])
        pi = Pi(dom, lifted_ty)
        d_pi = Derivation(
            "Prod",
            env.ctx,
            pi,
            Sort(max(d_dom.ty.level, wf_cod[1])),
            (d_dom, wf_cod[0]),
        )
        lam = Lambda(dom, body)
        d_lam = Derivation("Abs", env.ctx, lam, pi, (d_pi, d_body))
        term = App(lam, arg)
        # subst(lift(ty,1), arg) == ty because the bound variable is fresh.
        return Derivation("App", env.ctx, term, ty, (d_lam, d_arg)), term

    def _check_natrec_nat(self, env, depth) -> tuple[Derivation, Term]:
        # natrec with constant motive Nat; numeral scrutinees make iota redexes.
        ctx = env.ctx
        nat_wf = Derivation("Nat-type", ctx, Nat(), Sort(0), (env.ctxd,))
        env_n = env.extend(Nat(), nat_wf)
        d_motive = Derivation("Nat-type", env_n.ctx, Nat(), Sort(0), (env_n.ctxd,))
        d_base, base = self.gen_check(env, Nat(), depth - 1)
        nat_wf_n = Derivation("Nat-type", env_n.ctx, Nat(), Sort(0), (env_n.ctxd,))
        env_np = env_n.extend(Nat(), nat_wf_n)
        d_step, step_ = self.gen_check(env_np, Nat(), depth - 1)
        d_scrut, scrut = self.gen_check(env, Nat(), depth - 1)
        term = NatRec(Nat(), base, step_, scrut)
        return (
            Derivation(
                "Nat-rec", ctx, term, Nat(), (d_motive, d_base, d_step, d_scrut)
            ),
            term,
        )

    def _check_lambda(self, env, ty: Pi, depth, wf) -> tuple[Derivation, Term]:
        if wf is None:
            wf_r = self._wf_type(env, ty)
            if wf_r is None:
                raise _DeadEnd
            wf = wf_r[0]
        wf_dom = self._wf_type(env, ty.domain)
        if wf_dom is None:
            raise _DeadEnd
        inner = env.extend(ty.domain, wf_dom[0])
        d_body, body = self.gen_check(inner, ty.codomain, depth - 1)
        term = Lambda(ty.domain, body)
        return Derivation("Abs", env.ctx, term, ty, (wf, d_body)), term

    def _check_pair(self, env, ty: Sigma, depth, wf) -> tuple[Derivation, Term]:
        d_first = self._component_wf(env, ty, wf, 0)
        inner_wf = self._component_wf(env, ty, wf, 1)
        d_fst, fst = self.gen_check(env, ty.first, depth - 1, wf=d_first)
        snd_ty = subst(ty.second, fst)
        wf_snd = self._wf_type(env, snd_ty)
        d_snd, snd = self.gen_check(
            env, snd_ty, depth - 1, wf=wf_snd[0] if wf_snd else None
        )
        term = Pair(ty.first, ty.second, fst, snd)
        return (
            Derivation(
                "Sig-cons", env.ctx, term, ty, (d_first, inner_wf, d_fst, d_snd)
            ),
            term,
        )

    def _component_wf(self, env, ty: Sigma, wf, which: int) -> Derivation:
        # Component well-formedness premises for Sig-cons: reuse a structural
        # Sig-type premise when available, else rebuild in the fragment.
        if wf is not None and wf.rule == "Sig-type":
            return wf.premises[which]
        if which == 0:
            r = self._wf_type(env, ty.first)
            if r is None:
                raise _DeadEnd
            return r[0]
        r0 = self._wf_type(env, ty.first)
        if r0 is None:
            raise _DeadEnd
        r1 = self._wf_type(env.extend(ty.first, r0[0]), ty.second)
        if r1 is None:
            raise _DeadEnd
        return r1[0]

    def _check_refl(self, env, ty: Eq, wf) -> tuple[Derivation, Term]:
        if ty.lhs != ty.rhs:
            raise _DeadEnd
        if wf is not None and wf.rule == "Eq-type":
            d_base, d_val = wf.premises[0], wf.premises[1]
        else:
            r = self._wf_type(env, ty.ty)
            d_val = self._simple_term(env, ty.lhs, ty.ty)
            if r is None or d_val is None:
                raise _DeadEnd
            d_base = r[0]
        term = Refl(ty.ty, ty.lhs)
        return Derivation("Eq-refl", env.ctx, term, ty, (d_base, d_val)), term

    # --- inference mode: synthesize a judgment -----------------------------

    def gen_infer(self, env: _Env, depth: int) -> tuple[Derivation, Term, Term]:
        rng = self.rng
        if depth <= 0:
            return self._infer_leaf(env)
        roll = rng.random()
        if roll < 0.5:
            return self._infer_leaf(env)
        if roll < 0.75:
            makers = [self._infer_lambda, self._infer_former]
            rng.shuffle(makers)
        else:
            # Preference order drawn by weight; the rest stay as fallbacks so
            # a dead end still yields an application-family term.
            pool = [
                (self._infer_beta_redex, 4),
                (self._infer_natrec, 3),
                (self._infer_sigrec, 2),
                (self._infer_eqrec, 2),
                (self._infer_app_var, 2),
            ]
            makers = []
            while pool:
                pick = rng.choices(range(len(pool)), [w for _, w in pool])[0]
                makers.append(pool.pop(pick)[0])
        for make in makers:
            try:
                return make(env, depth)
            except _DeadEnd:
                continue
        return self._infer_leaf(env)

    def _infer_leaf(self, env: _Env) -> tuple[Derivation, Term, Term]:
        rng = self.rng
        ctx = env.ctx
        choices = ["sort", "nat", "numeral"]
        if len(ctx):
            choices += ["var", "var"]
        match rng.choice(choices):
            case "sort":
                i = rng.randint(0, self.cfg.universe_cap)
                return (
                    Derivation("Sort", ctx, Sort(i), Sort(i + 1), (env.ctxd,)),
                    Sort(i),
                    Sort(i + 1),
                )
            case "nat":
                return (
                    Derivation("Nat-type", ctx, Nat(), Sort(0), (env.ctxd,)),
                    Nat(),
                    Sort(0),
                )
            case "numeral":
                n = self._numeral()
                d = self._simple_term(env, n, Nat())
                return d, n, Nat()
            case "var":
                k = rng.randrange(len(ctx))
                ty = ctx.lookup(k)
                return Derivation("Var", ctx, Var(k), ty, (env.ctxd,)), Var(k), ty
        raise AssertionError

    def _infer_lambda(self, env: _Env, depth: int):
        # gen_ctx_type may hand back a redex-shaped domain; its derivation
        # serves both the context extension and the Prod premise.
        dom, d_dom = self.gen_ctx_type(env, depth - 1)
        inner = env.extend(dom, d_dom)
        cod = self.gen_type(inner, depth - 1)
        wf_cod = self._wf_type(inner, cod)
        if wf_cod is None:
            raise _DeadEnd
        d_body, body = self.gen_check(inner, cod, depth - 1, wf=wf_cod[0])
        pi = Pi(dom, cod)
        d_pi = Derivation(
            "Prod",
            env.ctx,
            pi,
            Sort(max(d_dom.ty.level, wf_cod[1])),
            (d_dom, wf_cod[0]),
        )
        term = Lambda(dom, body)
        return Derivation("Abs", env.ctx, term, pi, (d_pi, d_body)), term, pi

    def _infer_former(self, env: _Env, depth: int):
        level = self.rng.randint(0, self.cfg.universe_cap)
        d, t = self.gen_check(env, Sort(level), depth - 1)
        return d, t, Sort(level)

    def _infer_beta_redex(self, env: _Env, depth: int):
        dom = self.gen_type(env, depth - 1)
        wf_dom = self._wf_type(env, dom)
        if wf_dom is None:
            raise _DeadEnd
        d_dom, _ = wf_dom
        d_arg, arg = self.gen_check(env, dom, depth - 1, wf=d_dom)
        inner = env.extend(dom, d_dom)
        cod = self.gen_type(inner, depth - 1)
        wf_cod = self._wf_type(inner, cod)
        if wf_cod is None:
            raise _DeadEnd
        d_body, body = self.gen_check(inner, cod, depth - 1, wf=wf_cod[0])
        pi = Pi(dom, cod)
        d_pi = Derivation(
            "Prod",
            env.ctx,
            pi,
            Sort(max(d_dom.ty.level, wf_cod[1])),
            (d_dom, wf_cod[0]),
        )
        lam = Lambda(dom, body)
        d_lam = Derivation("Abs", env.ctx, lam, pi, (d_pi, d_body))
        term = App(lam, arg)
        ty = subst(cod, arg)
        return Derivation("App", env.ctx, term, ty, (d_lam, d_arg)), term, ty

    def _infer_app_var(self, env: _Env, depth: int):
        heads = [
            k
            for k in range(len(env.ctx))
            if isinstance(env.ctx.lookup(k), Pi)
        ]
        if not heads:
            raise _DeadEnd
        k = self.rng.choice(heads)
        pi: Pi = env.ctx.lookup(k)
        wf_dom = self._wf_type(env, pi.domain)
        d_arg, arg = self.gen_check(
            env, pi.domain, depth - 1, wf=wf_dom[0] if wf_dom else None
        )
        d_head = Derivation("Var", env.ctx, Var(k), pi, (env.ctxd,))
        term = App(Var(k), arg)
        ty = subst(pi.codomain, arg)
        return Derivation("App", env.ctx, term, ty, (d_head, d_arg)), term, ty

    def _infer_natrec(self, env: _Env, depth: int):
        # The one recursor generated with a possibly dependent motive: both
        # branch targets substitute only simple terms (zero, succ x) into it.
        nat_wf = Derivation("Nat-type", env.ctx, Nat(), Sort(0), (env.ctxd,))
        env_n = env.extend(Nat(), nat_wf)
        motive = self.gen_type(env_n, depth - 1)
        wf_motive = self._wf_type(env_n, motive)
        if wf_motive is None:
            raise _DeadEnd
        base_ty = subst(motive, Zero())
        wf_base = self._wf_type(env, base_ty)
        d_base, base = self.gen_check(
            env, base_ty, depth - 1, wf=wf_base[0] if wf_base else None
        )
        env_np = env_n.extend(motive, wf_motive[0])
        step_ty = subst(lift(motive, 2, 1), Succ(Var(1)))
        wf_step = self._wf_type(env_np, step_ty)
        d_step, step_ = self.gen_check(
            env_np, step_ty, depth - 1, wf=wf_step[0] if wf_step else None
        )
        d_scrut, scrut = self.gen_check(env, Nat(), depth - 1)
        term = NatRec(motive, base, step_, scrut)
        ty = subst(motive, scrut)
        return (
            Derivation(
                "Nat-rec",
                env.ctx,
                term,
                ty,
                (wf_motive[0], d_base, d_step, d_scrut),
            ),
            term,
            ty,
        )

    def _infer_sigrec(self, env: _Env, depth: int):
        # Constant motive: the branch target stays inside the fragment.
        first = self.gen_type(env, depth - 1)
        wf_first = self._wf_type(env, first)
        if wf_first is None:
            raise _DeadEnd
        env_f = env.extend(first, wf_first[0])
        second = self.gen_type(env_f, depth - 1)
        wf_second = self._wf_type(env_f, second)
        if wf_second is None:
            raise _DeadEnd
        sig = Sigma(first, second)
        d_sig = Derivation(
            "Sig-type",
            env.ctx,
            sig,
            Sort(max(wf_first[1], wf_second[1])),
            (wf_first[0], wf_second[0]),
        )
        d_scrut, scrut = self.gen_check(env, sig, depth - 1, wf=d_sig)
        motive0 = self.gen_type(env, depth - 1)
        motive = lift(motive0, 1)
        env_sig = env.extend(sig, d_sig)
        wf_motive = self._wf_type(env_sig, motive)
        if wf_motive is None:
            raise _DeadEnd
        env_ab = env_f.extend(second, wf_second[0])
        branch_ty = lift(motive0, 2)
        wf_branch_ty = self._wf_type(env_ab, branch_ty)
        d_branch, branch = self.gen_check(
            env_ab,
            branch_ty,
            depth - 1,
            wf=wf_branch_ty[0] if wf_branch_ty else None,
        )
        term = SigRec(motive, branch, scrut)
        ty = motive0
        return (
            Derivation(
                "Sig-rec", env.ctx, term, ty, (wf_motive[0], d_branch, d_scrut)
            ),
            term,
            ty,
        )

    def _infer_eqrec(self, env: _Env, depth: int):
        d_scrut, scrut, eq = self._eqrec_scrutinee(env, depth)
        wf_base = self._wf_type(env, eq.ty)
        if wf_base is None:
            raise _DeadEnd
        env_a = env.extend(eq.ty, wf_base[0])
        fam = Eq(lift(eq.ty, 1), lift(eq.lhs, 1), Var(0))
        wf_fam = self._wf_type(env_a, fam)
        if wf_fam is None:
            raise _DeadEnd
        env_az = env_a.extend(fam, wf_fam[0])
        motive0 = self.gen_type(env, depth - 1)
        motive = lift(motive0, 2)
        wf_motive = self._wf_type(env_az, motive)
        if wf_motive is None:
            raise _DeadEnd
        wf_b = self._wf_type(env, motive0)
        d_branch, branch = self.gen_check(
            env, motive0, depth - 1, wf=wf_b[0] if wf_b else None
        )
        term = EqRec(motive, branch, scrut)
        ty = motive0
        return (
            Derivation(
                "Eq-rec", env.ctx, term, ty, (wf_motive[0], d_branch, d_scrut)
            ),
            term,
            ty,
        )

    def _eqrec_scrutinee(self, env: _Env, depth: int):
        """Either a variable of equality type with fragment components, or a
        fresh refl redexing the recursor."""
        candidates = []
        for k in range(len(env.ctx)):
            ty = env.ctx.lookup(k)
            if (
                isinstance(ty, Eq)
                and self._wf_type(env, ty.ty) is not None
                and self._simple_term(env, ty.lhs, ty.ty) is not None
            ):
                candidates.append(k)
        if candidates and self.rng.random() < 0.6:
            k = self.rng.choice(candidates)
            eq: Eq = env.ctx.lookup(k)
            return Derivation("Var", env.ctx, Var(k), eq, (env.ctxd,)), Var(k), eq
        base = self.gen_type(env, depth - 1)
        wf = self._wf_type(env, base)
        if wf is None:
            raise _DeadEnd
        d_val, val = self.gen_check(env, base, depth - 1, wf=wf[0])
        eq = Eq(base, val, val)
        term = Refl(base, val)
        return (
            Derivation("Eq-refl", env.ctx, term, eq, (wf[0], d_val)),
            term,
            eq,
        )

    # --- enlargement --------------------------------------------------------

    def enlarge(self, env: _Env, ty: Term) -> tuple[Term, Derivation] | None:
        """A strictly or weakly larger type under cumulativity, with its
        well-formedness derivation; None when no lift exists."""

        def grow(t: Term) -> Term | None:
            match t:
                case Sort(i):
                    if i >= self.cfg.universe_cap + 1:
                        return None
                    return Sort(self.rng.randint(i + 1, self.cfg.universe_cap + 1))
                case Pi(a, b):
                    b2 = grow(b)
                    return Pi(a, b2) if b2 is not None else None
            return None

        if self._wf_type(env, ty) is None:
            return None
        bigger = grow(ty)
        if bigger is None:
            return None
        wf = self._wf_type(env, bigger)
        if wf is None:
            return None
        return bigger, wf[0]

    # --- entry point --------------------------------------------------------

    def gen_context(self, depth: int) -> _Env:
        env = _EMPTY_ENV
        for _ in range(self.rng.randint(0, 3)):
            ty, wf = self.gen_ctx_type(env, min(depth, 2))
            env = env.extend(ty, wf)
        return env

    def run(self) -> GeneratedJudgment:
        # max_depth counts judgment nesting: 1 generates only axioms.
        budget = self.cfg.max_depth - 1
        for _ in range(64):
            try:
                env = self.gen_context(budget)
                d, term, ty = self.gen_infer(env, budget)
                break
            except _DeadEnd:
                continue
        else:
            env = _EMPTY_ENV
            d, term, ty = self._infer_leaf(env)
        if self.rng.random() < self.cfg.cumul_insert_prob:
            grown = self.enlarge(env, ty)
            if grown is not None:
                ty2, wf2 = grown
                d = Derivation("Cumul", env.ctx, term, ty2, (d, wf2))
                ty = ty2
        return GeneratedJudgment(d, env.ctx, term, ty, env.ctxd)


def generate(config: GenConfig) -> GeneratedJudgment:
    """A validate-accepted undirected judgment, deterministic per seed."""
    result = _Gen(config).run()
    check = validate(result.derivation)
    if not check.ok:
        raise AssertionError(
            f"generator produced an invalid derivation: {check.message} at {check.path}"
        )
    return result
