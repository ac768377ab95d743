"""Application-layer operations behind the service endpoints.

Everything here speaks in plain data (strings, dicts) so the FastAPI app
and any other front end stay thin. Errors are normalized into an
ErrorInfo whose category drives the CLI exit code: parse -> 2, type -> 1,
fuel -> 3, internal -> 1.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .. import bidir
from ..bidir import ErrorKind, HeadKind, TypeCheckError
from ..conversion import convertible, cumul
from ..oracle import GenConfig, context_derivation, elaborate, generate, validate
from ..oracle.derivation import Derivation
from ..oracle.elaborate import ElaborationError
from ..reduction import DEFAULT_FUEL, FuelExhausted, normalize
from ..serialize import derivation_to_data, term_to_data, trace_to_data
from ..surface import ParseError, parse, parse_expr, print_term
from ..syntax import Context


@dataclass
class ErrorInfo:
    category: str  # 'parse' | 'type' | 'fuel' | 'internal'
    message: str
    kind: str | None = None
    line: int | None = None
    col: int | None = None
    location: list[str] | None = None
    expected: str | None = None
    inferred: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


class OpFailed(Exception):
    def __init__(self, info: ErrorInfo):
        super().__init__(info.message)
        self.info = info


def _fail_parse(e: ParseError):
    raise OpFailed(
        ErrorInfo("parse", e.reason, kind=type(e).__name__, line=e.line, col=e.col)
    ) from e


def _fail_type(e: TypeCheckError):
    category = "fuel" if e.kind is ErrorKind.FUEL_EXHAUSTED else "type"
    raise OpFailed(
        ErrorInfo(
            category,
            e.message,
            kind=e.kind.value,
            location=list(e.location),
            expected=print_term(e.expected) if e.expected is not None else None,
            inferred=print_term(e.inferred) if e.inferred is not None else None,
        )
    ) from e


def _fail_fuel(e: FuelExhausted):
    raise OpFailed(
        ErrorInfo("fuel", str(e), kind=ErrorKind.FUEL_EXHAUSTED.value)
    ) from e


def _guard(fn):
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except OpFailed:
            raise
        except ParseError as e:
            _fail_parse(e)
        except TypeCheckError as e:
            _fail_type(e)
        except FuelExhausted as e:
            _fail_fuel(e)
        except ElaborationError as e:
            raise OpFailed(ErrorInfo("internal", str(e))) from e

    return run


@_guard
def check_source(source: str, fuel: int = DEFAULT_FUEL) -> list[dict]:
    """Check every definition; earlier definitions are in scope as opaque
    context variables. Returns name/printed-type pairs in order."""
    src = parse(source)
    ctx = Context()
    names: list[str] = []
    out = []
    for d in src.definitions:
        try:
            if d.annotation is not None:
                bidir.infer_constrained(ctx, d.annotation, HeadKind.SORT, fuel)
                bidir.check(ctx, d.body, d.annotation, fuel)
                ty = d.annotation
            else:
                ty = bidir.infer(ctx, d.body, fuel).ty
        except TypeCheckError as e:
            raise TypeCheckError(
                e.kind,
                e.message,
                (f"def {d.name}",) + e.location,
                expected=e.expected,
                inferred=e.inferred,
            ) from e
        out.append({"name": d.name, "type": print_term(ty, tuple(reversed(names)))})
        ctx = ctx.extend(ty)
        names.append(d.name)
    return out


@_guard
def infer_expr(expr: str, fuel: int = DEFAULT_FUEL) -> dict:
    t = parse_expr(expr)
    ty = bidir.principal_type(Context(), t, fuel)
    return {"term": print_term(t), "type": print_term(ty)}


@_guard
def check_expr(expr: str, expected: str | None, fuel: int = DEFAULT_FUEL) -> dict:
    t = parse_expr(expr)
    if expected is None:
        ty = bidir.principal_type(Context(), t, fuel)
        return {"term": print_term(t), "type": print_term(ty)}
    ty = parse_expr(expected)
    bidir.infer_constrained(Context(), ty, HeadKind.SORT, fuel)
    bidir.check(Context(), t, ty, fuel)
    return {"term": print_term(t), "type": print_term(ty)}


@_guard
def normalize_expr(expr: str, fuel: int = DEFAULT_FUEL) -> dict:
    t = parse_expr(expr)
    ty = bidir.principal_type(Context(), t, fuel)
    nf = normalize(t, fuel)
    return {"normal_form": print_term(nf), "type": print_term(ty)}


@_guard
def equiv_exprs(
    lhs: str, rhs: str, use_cumul: bool = False, fuel: int = DEFAULT_FUEL
) -> dict:
    t = parse_expr(lhs)
    u = parse_expr(rhs)
    bidir.infer(Context(), t, fuel)
    bidir.infer(Context(), u, fuel)
    rel = cumul if use_cumul else convertible
    return {"equivalent": rel(t, u, fuel), "relation": "cumul" if use_cumul else "conv"}


@_guard
def trace_expr(expr: str, fuel: int = DEFAULT_FUEL) -> dict:
    t = parse_expr(expr)
    out = bidir.infer(Context(), t, fuel)
    empty = Derivation("Empty", Context(), None, None)
    deriv = elaborate(out.trace, empty, fuel)
    verdict = validate(deriv, fuel)
    if not verdict.ok:
        # Fail closed: an invalid elaborated derivation is a kernel bug.
        raise OpFailed(
            ErrorInfo(
                "internal",
                f"elaborated derivation failed validation: {verdict.message}",
            )
        )
    return {
        "type": print_term(out.ty),
        "trace": trace_to_data(out.trace),
        "derivation": derivation_to_data(deriv),
    }


# --- fuzzing ---------------------------------------------------------------


def _judgment_holds(ctx, term, ty, fuel: int) -> tuple[bool, str]:
    """The correctness/completeness/principality battery on one judgment."""
    try:
        out = bidir.infer(ctx, term, fuel)
    except TypeCheckError as e:
        return False, f"completeness: infer failed with {e.kind.value}"
    if not cumul(out.ty, ty, fuel):
        return False, "completeness: inferred type not below the derived type"
    rerun = bidir.infer(ctx, term, fuel)
    if rerun.ty != out.ty:
        return False, "uniqueness: re-inference disagreed"
    try:
        ctxd = context_derivation(ctx, fuel)
        deriv = elaborate(out.trace, ctxd, fuel)
    except ElaborationError as e:
        return False, f"correctness: elaboration failed: {e}"
    verdict = validate(deriv, fuel)
    if not verdict.ok:
        return False, f"correctness: elaborated derivation invalid: {verdict.message}"
    return True, ""


def _shrink(d: Derivation, fuel: int) -> Derivation:
    """Replace the failing derivation by a smaller failing premise subtree."""

    def fails(node: Derivation) -> bool:
        if node.term is None:
            return False
        return not _judgment_holds(node.ctx, node.term, node.ty, fuel)[0]

    current = d
    while True:
        for p in current.premises:
            if p.term is not None and fails(p):
                current = p
                break
        else:
            return current


def fuzz(
    count: int = 500,
    seed: int = 0,
    max_depth: int = 4,
    fuel: int = DEFAULT_FUEL,
) -> dict:
    """Run the correctness/completeness/principality suites; stop at the
    first counterexample. Same seed and inputs give a byte-identical report."""
    failures = []
    completed = 0
    for i in range(count):
        iter_seed = seed + i
        cfg = GenConfig(max_depth=max_depth, seed=iter_seed, cumul_insert_prob=0.3)
        g = generate(cfg)
        ok, why = _judgment_holds(g.ctx, g.term, g.ty, fuel)
        if ok:
            lifted = generate(
                GenConfig(max_depth=max_depth, seed=iter_seed, cumul_insert_prob=1.0)
            )
            inferred = bidir.infer(g.ctx, g.term, fuel).ty
            if lifted.term == g.term and lifted.ctx == g.ctx:
                if not cumul(inferred, lifted.ty, fuel):
                    ok, why = False, "principality: inferred type not minimal"
        if not ok:
            shrunk = _shrink(g.derivation, fuel)
            failures.append(
                {
                    "iteration": i,
                    "seed": iter_seed,
                    "reason": why,
                    "term": term_to_data(g.term),
                    "shrunk_derivation": derivation_to_data(shrunk),
                }
            )
            break
        completed += 1
    return {
        "count": count,
        "seed": seed,
        "max_depth": max_depth,
        "completed": completed,
        "ok": not failures,
        "failures": failures,
    }
