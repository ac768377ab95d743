from fastapi.testclient import TestClient

from bitt.service.app import create_app

client = TestClient(create_app())


def test_health():
    r = client.get("/v1/health")
    assert r.status_code == 200
    body = r.json()
    assert body["format"] == 1 and body["ok"]


def test_check_source_ok():
    src = "def two : Nat := succ (succ zero) ."
    r = client.post("/v1/check", json={"source": src})
    body = r.json()
    assert body["ok"] and body["format"] == 1
    assert body["definitions"] == [{"name": "two", "type": "Nat"}]
    assert body["error"] is None


def test_check_source_type_error():
    r = client.post("/v1/check", json={"source": "def bad : Type0 := zero ."})
    body = r.json()
    assert not body["ok"]
    err = body["error"]
    assert err["category"] == "type" and err["kind"] == "CumulFailed"
    assert err["expected"] == "Type0" and err["inferred"] == "Nat"


def test_check_source_parse_error_position():
    r = client.post("/v1/check", json={"source": "def broken := ) ."})
    err = r.json()["error"]
    assert err["category"] == "parse"
    assert err["line"] == 1 and err["col"] == 15


def test_infer_endpoint():
    r = client.post(
        "/v1/infer", json={"expr": "fun (A : Type0) => fun (x : A) => x"}
    )
    body = r.json()
    assert body["ok"]
    assert body["type"] == "(x0 : Type0) -> x0 -> x0"


def test_check_expr_endpoint():
    r = client.post(
        "/v1/check_expr",
        json={"expr": "(fun (x : Nat) => x) zero", "type": "Nat"},
    )
    assert r.json()["ok"]


def test_normalize_endpoint():
    r = client.post(
        "/v1/normalize",
        json={"expr": "natrec (z => Nat) (succ (succ zero)) (x p => succ p) (succ (succ zero))"},
    )
    body = r.json()
    assert body["ok"]
    assert body["normal_form"] == "succ (succ (succ (succ zero)))"
    assert body["type"] == "Nat"


def test_equiv_endpoint():
    r = client.post("/v1/equiv", json={"lhs": "Type0", "rhs": "Type1", "cumul": True})
    assert r.json()["equivalent"] is True
    r = client.post("/v1/equiv", json={"lhs": "Type0", "rhs": "Type1"})
    assert r.json()["equivalent"] is False


def test_equiv_rejects_ill_typed_inputs():
    r = client.post("/v1/equiv", json={"lhs": "zero zero", "rhs": "Nat"})
    body = r.json()
    assert not body["ok"] and body["error"]["kind"] == "NotAProduct"


def test_trace_endpoint_shapes():
    r = client.post("/v1/trace", json={"expr": "succ zero"})
    body = r.json()
    assert body["ok"]
    assert body["trace"]["rule"] == "Nat-succ"
    assert body["derivation"]["rule"] == "Nat-succ"
    for node in (body["trace"], body["derivation"]):
        assert set(node) == {"rule", "ctx", "term", "type", "premises"}


def test_fuel_error_category():
    r = client.post(
        "/v1/normalize",
        json={
            "expr": "natrec (z => Nat) zero (x p => succ p) (succ (succ zero))",
            "fuel": 1,
        },
    )
    body = r.json()
    assert not body["ok"] and body["error"]["category"] == "fuel"


def test_fuzz_endpoint_deterministic():
    a = client.post("/v1/fuzz", json={"count": 20, "seed": 3}).json()
    b = client.post("/v1/fuzz", json={"count": 20, "seed": 3}).json()
    assert a == b
    assert a["ok"] and a["report"]["completed"] == 20


def test_fuzz_failure_paths_report_and_shrink():
    from dataclasses import replace

    from bitt.oracle import GenConfig, generate
    from bitt.service.ops import _judgment_holds, _shrink
    from bitt.syntax import Nat, Pi, Sort

    g = generate(GenConfig(max_depth=5, seed=14))
    ok, why = _judgment_holds(g.ctx, g.term, g.ty, 10_000)
    assert ok and why == ""
    # a type the subject cannot have makes the battery fail and shrink
    wrong = Pi(Nat(), Pi(Nat(), Sort(3)))
    ok, why = _judgment_holds(g.ctx, g.term, wrong, 10_000)
    assert not ok and why.startswith("completeness")
    bad = replace(g.derivation, ty=wrong)
    shrunk = _shrink(bad, 10_000)
    assert shrunk.term is not None


def test_empty_source_checks_clean():
    r = client.post("/v1/check", json={"source": "-- nothing here\n"})
    body = r.json()
    assert body["ok"] and body["definitions"] == []
