"""JSON-friendly encoding of terms, contexts, traces and derivations.

Schema (format 1): a term is {"k": <former>, ...fields}, a judgment node is
{"rule", "ctx", "term", "type", "premises"} with null term/type on context
well-formedness nodes. The same node shape serves bidirectional traces and
undirected derivations.
"""

from __future__ import annotations

from dataclasses import fields

from . import syntax
from .bidir import Trace
from .syntax import Context, Term

FORMAT_VERSION = 1

_TERM_CLASSES = {cls.__name__: cls for cls in syntax.SUBTERM_FIELDS}


def term_to_data(t: Term) -> dict:
    data = {"k": type(t).__name__}
    for f in fields(t):
        v = getattr(t, f.name)
        data[f.name] = term_to_data(v) if isinstance(v, Term) else v
    return data


def term_from_data(data: dict) -> Term:
    cls = _TERM_CLASSES.get(data.get("k"))
    if cls is None:
        raise ValueError(f"unknown term former {data.get('k')!r}")
    kwargs = {}
    for f in fields(cls):
        v = data[f.name]
        kwargs[f.name] = term_from_data(v) if isinstance(v, dict) else v
    return cls(**kwargs)


def context_to_data(ctx: Context) -> list[dict]:
    return [term_to_data(t) for t in ctx]


def context_from_data(data: list[dict]) -> Context:
    return Context(tuple(term_from_data(d) for d in data))


def _node_to_data(rule, ctx, term, ty, premises) -> dict:
    return {
        "rule": rule,
        "ctx": context_to_data(ctx),
        "term": term_to_data(term) if term is not None else None,
        "type": term_to_data(ty) if ty is not None else None,
        "premises": premises,
    }


def trace_to_data(tr: Trace) -> dict:
    return _node_to_data(
        tr.rule,
        tr.ctx,
        tr.subject,
        tr.output,
        [trace_to_data(p) for p in tr.premises],
    )


def derivation_to_data(d) -> dict:
    return _node_to_data(
        d.rule, d.ctx, d.term, d.ty, [derivation_to_data(p) for p in d.premises]
    )


def derivation_from_data(data: dict):
    from .oracle.derivation import Derivation

    return Derivation(
        rule=data["rule"],
        ctx=context_from_data(data["ctx"]),
        term=term_from_data(data["term"]) if data["term"] is not None else None,
        ty=term_from_data(data["type"]) if data["type"] is not None else None,
        premises=tuple(derivation_from_data(p) for p in data["premises"]),
    )
