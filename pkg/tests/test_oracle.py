from dataclasses import replace

import pytest

from bitt.bidir import check, infer
from bitt.conversion import convertible, cumul
from bitt.oracle import (
    Derivation,
    ElaborationError,
    GenConfig,
    context_derivation,
    elaborate,
    generate,
    validate,
)
from bitt.serialize import derivation_from_data, derivation_to_data
from bitt.syntax import (
    App,
    Context,
    Lambda,
    Nat,
    Pi,
    Sort,
    Var,
    Zero,
)

EMPTY = Context()
EMPTY_DERIV = Derivation("Empty", EMPTY, None, None)


def _sort_node(ctx, ctxd, level):
    return Derivation("Sort", ctx, Sort(level), Sort(level + 1), (ctxd,))


def test_validate_sort_axiom():
    d = _sort_node(EMPTY, EMPTY_DERIV, 0)
    assert validate(d).ok


def test_validate_rejects_level_mismatch():
    d = Derivation("Sort", EMPTY, Sort(0), Sort(5), (EMPTY_DERIV,))
    v = validate(d)
    assert not v.ok
    assert "level mismatch" in v.message


def test_validate_cumul_lift_sort1_to_sort3():
    # hand-built: Sort 1 : Sort 2, lifted to Sort 3 via Cumul whose type
    # premise derives Sort 3 : Sort 4
    d = Derivation(
        "Cumul",
        EMPTY,
        Sort(1),
        Sort(3),
        (_sort_node(EMPTY, EMPTY_DERIV, 1), _sort_node(EMPTY, EMPTY_DERIV, 3)),
    )
    assert validate(d).ok
    # and the reverse direction is not cumulative
    bad = Derivation(
        "Cumul",
        EMPTY,
        Sort(3),
        Sort(1),
        (_sort_node(EMPTY, EMPTY_DERIV, 3), _sort_node(EMPTY, EMPTY_DERIV, 1)),
    )
    v = validate(bad)
    assert not v.ok and "cumulativity" in v.message


def test_validate_rejects_unknown_rule():
    v = validate(Derivation("Frobnicate", EMPTY, Sort(0), Sort(1), ()))
    assert not v.ok


def test_validate_checks_app_substitution():
    # (\x : Nat. x) zero : Nat, but claim the wrong conclusion type
    lam = Lambda(Nat(), Var(0))
    nat_wf = Derivation("Nat-type", EMPTY, Nat(), Sort(0), (EMPTY_DERIV,))
    inner = EMPTY.extend(Nat())
    ext = Derivation("Ext", inner, None, None, (EMPTY_DERIV, nat_wf))
    nat_wf_in = Derivation("Nat-type", inner, Nat(), Sort(0), (ext,))
    var = Derivation("Var", inner, Var(0), Nat(), (ext,))
    pi = Pi(Nat(), Nat())
    prod = Derivation("Prod", EMPTY, pi, Sort(0), (nat_wf, nat_wf_in))
    abs_ = Derivation("Abs", EMPTY, lam, pi, (prod, var))
    zero = Derivation("Nat-zero", EMPTY, Zero(), Nat(), (EMPTY_DERIV,))
    good = Derivation("App", EMPTY, App(lam, Zero()), Nat(), (abs_, zero))
    assert validate(good).ok
    bad = replace(good, ty=Sort(0))
    v = validate(bad)
    assert not v.ok and "substitution" in v.message


def test_negative_soundness_mutations(judgments):
    # bumping a conclusion type without a Cumul node must be rejected, as
    # must breaking a Var lookup
    mutated = 0
    for g in judgments[:80]:
        d = g.derivation
        bad_ty = Pi(Nat(), Sort(0)) if d.ty != Pi(Nat(), Sort(0)) else Sort(7)
        v = validate(replace(d, ty=bad_ty))
        assert not v.ok
        mutated += 1
    assert mutated


def test_negative_soundness_var_index(judgments):
    for g in judgments:
        if isinstance(g.term, Var):
            bad = replace(g.derivation, term=Var(g.term.index + 17))
            assert not validate(bad).ok
            break
    else:
        pytest.skip("no variable conclusion in corpus")


def test_elaborate_sort_trace_is_sort_rule():
    out = infer(EMPTY, Sort(0))
    d = elaborate(out.trace, EMPTY_DERIV)
    assert d.rule == "Sort" and d.ty == Sort(1)
    assert validate(d).ok


def test_elaborate_abs_reconstructs_prod_premise():
    out = infer(EMPTY, Lambda(Sort(0), Var(0)))
    d = elaborate(out.trace, EMPTY_DERIV)
    assert d.rule == "Abs"
    assert d.premises[0].rule == "Prod"
    assert validate(d).ok


def test_elaborate_check_trace_is_reflexive_cumul():
    tr = check(EMPTY, Zero(), Nat())
    d = elaborate(tr, EMPTY_DERIV)
    assert d.rule == "Cumul"
    assert d.premises[0].rule == "Nat-zero"
    assert validate(d).ok


def test_elaborate_rejects_foreign_rule():
    from bitt.bidir import Trace

    with pytest.raises(ElaborationError):
        elaborate(Trace("Bogus", EMPTY, Sort(0), Sort(1)), EMPTY_DERIV)


def test_context_derivation_validates():
    ctx = EMPTY.extend(Sort(0)).extend(Var(0))
    d = context_derivation(ctx)
    assert validate(d).ok
    assert d.rule == "Ext" and d.ctx == ctx


def test_generate_depth_one_is_leafish():
    from bitt.syntax import term_size

    for seed in range(30):
        g = generate(GenConfig(max_depth=1, seed=seed))
        assert term_size(g.term) <= 4
        assert len(g.ctx) == 0 or g.ctx  # context may still carry decls


def test_generate_always_validates():
    for seed in range(60):
        g = generate(GenConfig(max_depth=5, seed=seed, cumul_insert_prob=0.4))
        assert validate(g.derivation).ok
        assert validate(g.ctx_derivation).ok


def test_generate_deterministic_per_seed():
    a = generate(GenConfig(max_depth=5, seed=11, cumul_insert_prob=0.4))
    b = generate(GenConfig(max_depth=5, seed=11, cumul_insert_prob=0.4))
    assert a.term == b.term and a.ty == b.ty and a.ctx == b.ctx


def test_generate_full_lift_probability():
    lifted = 0
    for seed in range(80):
        base = generate(GenConfig(max_depth=5, seed=seed, cumul_insert_prob=0.0))
        lift = generate(GenConfig(max_depth=5, seed=seed, cumul_insert_prob=1.0))
        assert base.term == lift.term and base.ctx == lift.ctx
        assert base.derivation.rule != "Cumul" or base.derivation is not None
        if lift.derivation.rule == "Cumul" and lift.derivation.premises[0] is not None:
            if lift.ty != base.ty:
                lifted += 1
                # strict lift: above the principal type but not convertible
                assert cumul(base.ty, lift.ty)
                assert not convertible(base.ty, lift.ty)
                inferred = infer(base.ctx, base.term).ty
                assert cumul(inferred, lift.ty)
    assert lifted >= 10


def test_derivation_json_round_trip(judgments):
    for g in judgments[:20]:
        data = derivation_to_data(g.derivation)
        back = derivation_from_data(data)
        assert back == g.derivation
        assert validate(back).ok


def test_elaborate_reports_reconstruction_failure():
    # a Check trace against an ill-formed expected type cannot rebuild the
    # type's well-formedness premise: the declared internal-error contract
    from bitt.bidir import Trace

    inner = infer(EMPTY, Zero()).trace
    bogus = Trace("Check", EMPTY, Zero(), App(Zero(), Zero()), (inner,))
    with pytest.raises(ElaborationError):
        elaborate(bogus, EMPTY_DERIV)


def _nat_wf(ctx, ctxd):
    from bitt.syntax import Nat, Sort

    return Derivation("Nat-type", ctx, Nat(), Sort(0), (ctxd,))


def test_completeness_through_mid_derivation_pi_lift():
    # an application whose head is typed by a covariantly lifted product:
    # the undirected tree uses Cumul inside the App premise, while the
    # checker must land cumulativity-below the concluded type
    from bitt.bidir import infer as binfer
    from bitt.syntax import Nat, Sort

    nat_wf = _nat_wf(EMPTY, EMPTY_DERIV)
    inner = EMPTY.extend(Nat())
    ext = Derivation("Ext", inner, None, None, (EMPTY_DERIV, nat_wf))
    sort0_in = Derivation("Sort", inner, Sort(0), Sort(1), (ext,))
    sort1_in = Derivation("Sort", inner, Sort(1), Sort(2), (ext,))
    sort2_in = Derivation("Sort", inner, Sort(2), Sort(3), (ext,))

    lam = Lambda(Nat(), Sort(0))
    pi_small = Pi(Nat(), Sort(1))
    pi_big = Pi(Nat(), Sort(2))
    prod_small = Derivation("Prod", EMPTY, pi_small, Sort(2), (nat_wf, sort1_in))
    prod_big = Derivation("Prod", EMPTY, pi_big, Sort(3), (nat_wf, sort2_in))
    d_abs = Derivation("Abs", EMPTY, lam, pi_small, (prod_small, sort0_in))
    d_lift = Derivation("Cumul", EMPTY, lam, pi_big, (d_abs, prod_big))
    d_zero = Derivation("Nat-zero", EMPTY, Zero(), Nat(), (EMPTY_DERIV,))
    term = App(lam, Zero())
    d_app = Derivation("App", EMPTY, term, Sort(2), (d_lift, d_zero))
    assert validate(d_app).ok, validate(d_app).message

    inferred = binfer(EMPTY, term).ty
    assert inferred == Sort(1)
    assert cumul(inferred, Sort(2))
    # and the lifted derivation is strictly above the principal type
    assert not convertible(inferred, Sort(2))


def test_stacked_cumul_chain_validates_and_stays_above_inference():
    from bitt.bidir import infer as binfer
    from bitt.syntax import Sort

    d = Derivation("Sort", EMPTY, Sort(0), Sort(1), (EMPTY_DERIV,))
    for target in (2, 4):
        wf = Derivation("Sort", EMPTY, Sort(target), Sort(target + 1), (EMPTY_DERIV,))
        d = Derivation("Cumul", EMPTY, Sort(0), Sort(target), (d, wf))
    assert validate(d).ok
    assert cumul(binfer(EMPTY, Sort(0)).ty, Sort(4))
