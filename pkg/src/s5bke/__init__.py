"""Workbench for the modal-epistemic logic S5BKE.

S5BKE combines an S5-style evidence modality ``[]`` with knowledge ``K``
and belief ``B`` operators.  This package provides the formula language,
a Hilbert-style proof checker for the ten axiom schemes with modus ponens
and axiom necessitation, finite algebraic and frame-based model checkers,
the translation from algebraic to frame-based models, and bounded
countermodel search.
"""

from .algebra import (
    AlgebraicModel,
    algebra_to_frame,
    eval_algebra,
    satisfies_algebra,
    ultrafilters,
    validate_algebra,
)
from .errors import (
    AtomLimitExceeded,
    DuplicatePropositions,
    GuardViolation,
    MalformedTable,
    ParseError,
    S5BKEError,
    SizeLimitExceeded,
    SourceSpan,
    UnboundVariable,
    Violation,
)
from .frames import Frame, FrameModel, denote, models, satisfies_at, validate_frame
from .kernel import (
    AN,
    Axiom,
    CheckVerdict,
    Derivation,
    MP,
    Premise,
    ProofLine,
    SchemeId,
    check,
    match_axiom,
    parse_derivation,
    scheme_examples,
    scheme_instance,
    verify_theorem,
)
from .search import (
    CountermodelReport,
    Found,
    SearchBounds,
    UnknownWithinBounds,
    enumerate_frames,
    find_countermodel,
    random_algebra,
    random_formula,
    random_model,
)
from .syntax import (
    B,
    Bot,
    Box,
    Formula,
    Impl,
    K,
    Neg,
    Var,
    conj,
    diamond,
    disj,
    equiv,
    format_formula,
    iff,
    is_classical_tautology,
    parse,
    substitute,
    top,
    variables,
)

__version__ = "0.1.0"
