"""bitt: a bidirectional type-checking kernel for a cumulative CComega
with dependent sums, naturals and propositional equality, together with an
undirected-derivation oracle, a concrete syntax, a FastAPI service and a
thin CLI client.
"""

from .bidir import (
    ErrorKind,
    HeadKind,
    InferOutcome,
    Trace,
    TypeCheckError,
    check,
    check_wf_context,
    infer,
    infer_constrained,
    principal_type,
)
from .conversion import RelKind, convertible, cumul
from .reduction import (
    DEFAULT_FUEL,
    FuelExhausted,
    WhnfResult,
    normalize,
    reducts,
    step,
    whnf,
)
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
    alpha_eq,
    lift,
    subst,
)

__version__ = "0.1.0"
