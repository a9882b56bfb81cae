"""Assurance tooling for EU AI Act duties and adversarial robustness.

The package keeps a registry of provider duties distilled from the EU AI
Act, represents safety arguments in Goal Structuring Notation, links both
into a small triple store, trains character statistics filters against
prompt injection, and reports duty coverage and causal traces. The
``euaia-assure`` command exposes the same operations on files.
"""

from __future__ import annotations

from .coverage import (
    CausalTrace,
    CoverageError,
    CoverageStatus,
    DutyStatus,
    causal_trace,
    coverage_report,
    coverage_to_tsv,
)
from .duties import (
    ArticleRef,
    Duty,
    DutyRegistry,
    RegistryError,
    StakeholderCode,
    load_registry,
    registry_to_jsonl,
    registry_to_triples,
)
from .exemplar import (
    dynamic_filter_links,
    exemplar_argument,
    exemplar_links,
)
from .factsheet import FactsheetError, render_factsheet, render_html
from .gsn import (
    Diagnostic,
    GsnArgument,
    GsnEdge,
    GsnError,
    GsnNode,
    GsnNodeKind,
    GsnParseError,
    GsnRelation,
    Severity,
    argument_to_triples,
    parse_gsn,
    render_dot,
    serialize_gsn,
    validate,
)
from .prompt_filter import (
    CorpusFormatError,
    FilterMetrics,
    FilterModel,
    ModelProvenance,
    ScriptClass,
    Verdict,
    classify_dynamic,
    classify_static,
    evaluate,
    filter_to_triples,
    load_model,
    parse_corpus,
    parse_labeled_corpus,
    save_model,
    score,
    script_of,
    train_dynamic,
)
from .triples import (
    Iri,
    Literal,
    NamespaceError,
    Store,
    Triple,
    TripleParseError,
    TriplePattern,
    Variable,
    export_triples,
    import_triples,
    parse_pattern,
    serialize_triple,
)

__version__ = "0.1.0"

__all__ = [
    "ArticleRef",
    "CausalTrace",
    "CorpusFormatError",
    "CoverageError",
    "CoverageStatus",
    "Diagnostic",
    "Duty",
    "DutyRegistry",
    "DutyStatus",
    "FactsheetError",
    "FilterMetrics",
    "FilterModel",
    "GsnArgument",
    "GsnEdge",
    "GsnError",
    "GsnNode",
    "GsnNodeKind",
    "GsnParseError",
    "GsnRelation",
    "Iri",
    "Literal",
    "ModelProvenance",
    "NamespaceError",
    "RegistryError",
    "ScriptClass",
    "Severity",
    "StakeholderCode",
    "Store",
    "Triple",
    "TripleParseError",
    "TriplePattern",
    "Variable",
    "Verdict",
    "argument_to_triples",
    "causal_trace",
    "classify_dynamic",
    "classify_static",
    "coverage_report",
    "coverage_to_tsv",
    "dynamic_filter_links",
    "evaluate",
    "exemplar_argument",
    "exemplar_links",
    "export_triples",
    "filter_to_triples",
    "import_triples",
    "load_model",
    "load_registry",
    "parse_corpus",
    "parse_gsn",
    "parse_labeled_corpus",
    "parse_pattern",
    "registry_to_jsonl",
    "registry_to_triples",
    "render_dot",
    "render_factsheet",
    "render_html",
    "save_model",
    "score",
    "script_of",
    "serialize_gsn",
    "serialize_triple",
    "train_dynamic",
    "validate",
]
