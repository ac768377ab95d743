import pytest

from bitt.surface import (
    Definition,
    ParseError,
    UnboundName,
    parse,
    parse_expr,
    print_term,
)
from bitt.syntax import (
    App,
    Eq,
    Lambda,
    Nat,
    NatRec,
    Pair,
    Pi,
    Refl,
    Sigma,
    Sort,
    Succ,
    Var,
    Zero,
    alpha_eq,
)


def test_parse_atoms():
    assert parse_expr("Type0") == Sort(0)
    assert parse_expr("Type12") == Sort(12)
    assert parse_expr("Nat") == Nat()
    assert parse_expr("zero") == Zero()


def test_parse_lambda_and_pi():
    assert parse_expr("fun (x : Nat) => x") == Lambda(Nat(), Var(0))
    assert parse_expr("(A : Type0) -> A -> A") == Pi(Sort(0), Pi(Var(0), Var(1)))
    assert parse_expr("Nat -> Nat") == Pi(Nat(), Nat())
    # arrows associate right
    assert parse_expr("Nat -> Nat -> Nat") == Pi(Nat(), Pi(Nat(), Nat()))


def test_parse_application_spine():
    f = parse_expr("fun (f : Nat -> Nat -> Nat) => f zero (succ zero)")
    assert f == Lambda(
        Pi(Nat(), Pi(Nat(), Nat())),
        App(App(Var(0), Zero()), Succ(Zero())),
    )


def test_parse_keyword_forms():
    assert parse_expr("succ zero") == Succ(Zero())
    assert parse_expr("Eq Nat zero zero") == Eq(Nat(), Zero(), Zero())
    assert parse_expr("refl Nat zero") == Refl(Nat(), Zero())
    assert parse_expr("Sig (x : Nat) . Nat") == Sigma(Nat(), Nat())
    assert parse_expr("pair (x : Nat => Nat) zero zero") == Pair(
        Nat(), Nat(), Zero(), Zero()
    )
    assert parse_expr(
        "natrec (z => Nat) zero (x p => succ p) (succ zero)"
    ) == NatRec(Nat(), Zero(), Succ(Var(0)), Succ(Zero()))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_expr("fun (x : Nat => x")
    assert e.value.line == 1 and e.value.col > 1
    with pytest.raises(UnboundName) as e:
        parse_expr("fun (x : Nat) => y")
    assert e.value.name == "y"


def test_parse_rejects_bare_type_keyword():
    with pytest.raises(ParseError):
        parse_expr("Type")


def test_parse_comments_and_unicode():
    t = parse_expr("fun (α : Nat) => α -- a comment\n")
    assert t == Lambda(Nat(), Var(0))


def test_print_examples():
    assert print_term(Sort(2)) == "Type2"
    assert print_term(Pi(Nat(), Nat())) == "Nat -> Nat"
    assert print_term(Lambda(Sort(0), Var(0))) == "fun (x0 : Type0) => x0"


def test_print_arrow_sugar_only_when_non_dependent():
    assert "->" in print_term(Pi(Sort(0), Nat()))
    dependent = print_term(Pi(Sort(0), Var(0)))
    assert dependent.startswith("(x0 : Type0) ->")


def test_print_free_names():
    assert print_term(Var(0), names=("n",)) == "n"
    assert print_term(App(Var(1), Var(0)), names=("x", "f")) == "f x"


def test_parse_print_round_trip_on_generated_terms(judgments):
    for g in judgments:
        if len(g.ctx) != 0:
            continue
        s = print_term(g.term)
        assert alpha_eq(parse_expr(s), g.term), s
        ts = print_term(g.ty)
        assert alpha_eq(parse_expr(ts), g.ty), ts


def test_parse_source_file():
    src = """
    -- the polymorphic identity
    def id : (A : Type0) -> A -> A := fun (A : Type0) => fun (x : A) => x .
    def idnat := id Nat .
    """
    f = parse(src)
    assert [d.name for d in f.definitions] == ["id", "idnat"]
    assert f.definitions[0].annotation == Pi(Sort(0), Pi(Var(0), Var(1)))
    assert f.definitions[1] == Definition("idnat", None, App(Var(0), Nat()))


def test_parse_source_rejects_duplicates_and_forward_refs():
    with pytest.raises(ParseError):
        parse("def a := zero . def a := zero .")
    with pytest.raises(UnboundName):
        parse("def a := b . def b := zero .")


def test_keywords_cannot_start_atomic_arguments():
    with pytest.raises(ParseError):
        parse_expr("succ fun")
    with pytest.raises(ParseError):
        parse_expr("fun (f : Nat -> Nat) => f Sig")
    with pytest.raises(ParseError):
        parse_expr("succ def")
