"""Command line interface.

One executable, ``euaia-assure``, with subcommands for the duty registry,
GSN arguments, the triple store, the prompt filters, coverage reporting and
factsheet rendering. All output is deterministic; domain failures print
``error: ...`` to stderr and exit 1, usage mistakes exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .duties import (
    STAKEHOLDER_A_COUNT_NOTE,
    RegistryError,
    StakeholderCode,
    load_registry,
    registry_to_jsonl,
    registry_to_triples,
)
from .factsheet import FactsheetError, render_factsheet, render_html
from .gsn import (
    GsnArgument,
    GsnError,
    Severity,
    argument_to_triples,
    parse_gsn,
    render_dot,
    serialize_gsn,
    validate,
)
from .prompt_filter import (
    CorpusFormatError,
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
    train_dynamic,
)
from .coverage import CoverageError, causal_trace, coverage_report, coverage_to_tsv
from .triples import (
    Iri,
    NamespaceError,
    Store,
    TripleParseError,
    export_triples,
    import_triples,
    parse_pattern,
    serialize_term,
    serialize_triple,
)

NAMESPACES_ENV = "EUAIA_ASSURE_NAMESPACES"

_DOMAIN_ERRORS = (
    RegistryError,
    GsnError,
    TripleParseError,
    NamespaceError,
    CorpusFormatError,
    CoverageError,
    FactsheetError,
    OSError,
    ValueError,
)


def _extra_namespaces() -> dict[str, str]:
    path = os.environ.get(NAMESPACES_ENV)
    if not path:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise NamespaceError(f"{NAMESPACES_ENV} must point to a JSON object of prefix -> IRI")
    return data


def _read_store(paths: list[str]) -> Store:
    namespaces = _extra_namespaces()
    store = Store(frozenset(), namespaces)
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        imported = import_triples(text, namespaces=namespaces)
        store = store.assert_all(imported.triples)
        for prefix, expansion in imported.namespaces.items():
            store = store.with_namespace(prefix, expansion)
    return store


def _read_prompts(args: argparse.Namespace, parser: argparse.ArgumentParser) -> list[str]:
    prompts = list(args.prompts)
    if args.prompts_file:
        prompts.extend(parse_corpus(Path(args.prompts_file).read_text(encoding="utf-8")))
    if not prompts:
        parser.error("no prompts given (positional arguments or --prompts-file)")
    return prompts


# ----------------------------------------------------------------------
# subcommand handlers


def _cmd_duties_list(args: argparse.Namespace) -> int:
    registry = load_registry()
    if args.stakeholder:
        code = StakeholderCode[args.stakeholder]
        duties = registry.duties_for_stakeholder(code)
        if code is StakeholderCode.A:
            print(STAKEHOLDER_A_COUNT_NOTE, file=sys.stderr)
    else:
        duties = registry.duties
    if args.format == "jsonl":
        sys.stdout.write(registry_to_jsonl(registry, duties))
        return 0
    for duty in duties:
        stakeholders = ",".join(code.name for code in duty.stakeholders)
        qualifiers = ",".join(duty.qualifiers) if duty.qualifiers else "-"
        print(f"{duty.id}\t{duty.citation}\t{stakeholders}\t{qualifiers}\t{duty.text}")
    return 0


def _parse_gsn_file(path: str) -> GsnArgument:
    return parse_gsn(Path(path).read_text(encoding="utf-8"))


def _cmd_gsn_validate(args: argparse.Namespace) -> int:
    argument = _parse_gsn_file(args.file)
    diagnostics = validate(argument)
    for diagnostic in diagnostics:
        print(f"{diagnostic.severity.value}: {diagnostic.subject}: {diagnostic.message}")
    if any(d.severity is Severity.ERROR for d in diagnostics):
        return 1
    if not diagnostics:
        print(f"ok: {len(argument.nodes)} nodes, {len(argument.edges)} edges")
    return 0


def _cmd_gsn_dot(args: argparse.Namespace) -> int:
    sys.stdout.write(render_dot(_parse_gsn_file(args.file)))
    return 0


def _cmd_gsn_triples(args: argparse.Namespace) -> int:
    argument = _parse_gsn_file(args.file)
    store = Store(frozenset(), _extra_namespaces()).assert_all(argument_to_triples(argument))
    sys.stdout.write(export_triples(store))
    return 0


def _cmd_gsn_format(args: argparse.Namespace) -> int:
    sys.stdout.write(serialize_gsn(_parse_gsn_file(args.file)))
    return 0


def _cmd_triples_import(args: argparse.Namespace) -> int:
    store = _read_store(args.files)
    if args.with_registry:
        store = store.assert_all(registry_to_triples(load_registry()))
    text = export_triples(store)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_triples_export(args: argparse.Namespace) -> int:
    sys.stdout.write(export_triples(_read_store([args.file])))
    return 0


def _cmd_triples_query(args: argparse.Namespace) -> int:
    store = _read_store([args.file])
    patterns = [parse_pattern(text) for text in args.patterns]
    for binding in store.query(patterns):
        if not binding:
            print("true")
            continue
        print(" ".join(f"?{name}={serialize_term(binding[name])}" for name in sorted(binding)))
    return 0


def _cmd_filter_train(args: argparse.Namespace) -> int:
    adversarial = parse_corpus(Path(args.adversarial).read_text(encoding="utf-8"))
    benign = parse_corpus(Path(args.benign).read_text(encoding="utf-8"))
    model = train_dynamic(
        adversarial,
        benign,
        alpha=args.alpha,
        bigrams=args.bigrams,
        corpus_ids=(Path(args.adversarial).stem, Path(args.benign).stem),
    )
    Path(args.output).write_text(save_model(model), encoding="utf-8")
    print(
        f"trained on {len(adversarial)} adversarial and {len(benign)} benign prompts; "
        f"threshold {model.threshold:.6f}"
    )
    return 0


def _cmd_filter_score(args: argparse.Namespace) -> int:
    model = load_model(Path(args.model).read_text(encoding="utf-8"))
    for prompt in _read_prompts(args, args.parser):
        print(f"{score(model, prompt):.6f}\t{prompt}")
    return 0


def _cmd_filter_classify(args: argparse.Namespace) -> int:
    if args.model and (args.blocklist or args.block_script):
        args.parser.error("use either --model or a static blocklist, not both")
    if args.model:
        model = load_model(Path(args.model).read_text(encoding="utf-8"))
        verdict_of = lambda prompt: classify_dynamic(model, prompt)
    elif args.blocklist or args.block_script:
        entries: list = list(args.blocklist or "")
        entries.extend(ScriptClass(name) for name in args.block_script)
        verdict_of = lambda prompt: classify_static(entries, prompt)[0]
    else:
        args.parser.error("one of --model or --blocklist/--block-script is required")
        return 2
    for prompt in _read_prompts(args, args.parser):
        letter = "A" if verdict_of(prompt) is Verdict.ADVERSARIAL else "B"
        print(f"{letter}\t{prompt}")
    return 0


def _cmd_filter_eval(args: argparse.Namespace) -> int:
    model = load_model(Path(args.model).read_text(encoding="utf-8"))
    labeled = parse_labeled_corpus(Path(args.corpus).read_text(encoding="utf-8"))
    metrics = evaluate(model, labeled)
    print(f"tpr={metrics.true_positive_rate:.4f}")
    print(f"fpr={metrics.false_positive_rate:.4f}")
    print(f"precision={metrics.precision:.4f}")
    print("auc=none" if metrics.auc is None else f"auc={metrics.auc:.4f}")
    print(f"adversarial={metrics.corpus_sizes[0]} benign={metrics.corpus_sizes[1]}")
    return 0


def _cmd_coverage_report(args: argparse.Namespace) -> int:
    store = _read_store(args.stores)
    report = coverage_report(store, load_registry())
    sys.stdout.write(coverage_to_tsv(report))
    return 0


def _cmd_coverage_trace(args: argparse.Namespace) -> int:
    store = _read_store(args.stores)
    traces = causal_trace(store, Iri.parse(args.attack))
    for index, trace in enumerate(traces, start=1):
        print(f"trace {index}:")
        for hop in trace.hops:
            print(f"  {serialize_triple(hop)}")
    if not traces:
        print(f"no traces from {args.attack} to an operationalized duty")
    return 0


def _cmd_factsheet_render(args: argparse.Namespace) -> int:
    registry = load_registry()
    store = _read_store(args.store) if args.store else Store(frozenset(), _extra_namespaces())
    store = store.assert_all(registry_to_triples(registry))
    argument = _parse_gsn_file(args.gsn) if args.gsn else GsnArgument()
    if argument.nodes:
        store = store.assert_all(argument_to_triples(argument))
    metrics = None
    if args.model:
        if not args.eval_corpus:
            args.parser.error("--model requires --eval-corpus")
        model = load_model(Path(args.model).read_text(encoding="utf-8"))
        labeled = parse_labeled_corpus(Path(args.eval_corpus).read_text(encoding="utf-8"))
        metrics = evaluate(model, labeled)
        store = store.assert_all(filter_to_triples(model, metrics))
    markdown = render_factsheet(registry, argument, store, metrics, system_name=args.system)
    text = render_html(markdown) if args.format == "html" else markdown
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return 0


# ----------------------------------------------------------------------
# parser wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="euaia-assure",
        description="EU AI Act duty registry, assurance arguments and prompt filters.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    duties = subparsers.add_parser("duties", help="duty registry").add_subparsers(
        dest="subcommand", required=True
    )
    duties_list = duties.add_parser("list", help="list registry duties")
    duties_list.add_argument("--stakeholder", choices=[c.name for c in StakeholderCode])
    duties_list.add_argument("--format", choices=["table", "jsonl"], default="table")
    duties_list.set_defaults(func=_cmd_duties_list)

    gsn = subparsers.add_parser("gsn", help="assurance arguments").add_subparsers(
        dest="subcommand", required=True
    )
    for name, func, help_text in (
        ("validate", _cmd_gsn_validate, "check structural rules, print diagnostics"),
        ("dot", _cmd_gsn_dot, "render as Graphviz DOT"),
        ("triples", _cmd_gsn_triples, "export the argument as triples"),
        ("format", _cmd_gsn_format, "reprint in canonical form"),
    ):
        sub = gsn.add_parser(name, help=help_text)
        sub.add_argument("file")
        sub.set_defaults(func=func)

    triples = subparsers.add_parser("triples", help="triple store").add_subparsers(
        dest="subcommand", required=True
    )
    triples_import = triples.add_parser("import", help="merge files into one store")
    triples_import.add_argument("files", nargs="+")
    triples_import.add_argument("--with-registry", action="store_true")
    triples_import.add_argument("-o", "--output")
    triples_import.set_defaults(func=_cmd_triples_import)
    triples_export = triples.add_parser("export", help="reprint one file in canonical form")
    triples_export.add_argument("file")
    triples_export.set_defaults(func=_cmd_triples_export)
    triples_query = triples.add_parser("query", help="conjunctive pattern query")
    triples_query.add_argument("file")
    triples_query.add_argument("patterns", nargs="+")
    triples_query.set_defaults(func=_cmd_triples_query)

    filter_parser = subparsers.add_parser("filter", help="prompt filters")
    filter_sub = filter_parser.add_subparsers(dest="subcommand", required=True)
    train = filter_sub.add_parser("train", help="fit the character statistics filter")
    train.add_argument("--adversarial", required=True)
    train.add_argument("--benign", required=True)
    train.add_argument("-o", "--output", required=True)
    train.add_argument("--alpha", type=float, default=1.0)
    train.add_argument("--bigrams", action="store_true")
    train.set_defaults(func=_cmd_filter_train)
    score_parser = filter_sub.add_parser("score", help="log likelihood ratio scores")
    score_parser.add_argument("--model", required=True)
    score_parser.add_argument("--prompts-file")
    score_parser.add_argument("prompts", nargs="*")
    score_parser.set_defaults(func=_cmd_filter_score)
    classify = filter_sub.add_parser("classify", help="A/B verdicts per prompt")
    classify.add_argument("--model")
    classify.add_argument("--blocklist", help="characters to block, as one string")
    classify.add_argument(
        "--block-script",
        action="append",
        default=[],
        choices=sorted(s.value for s in ScriptClass),
        help="block every character of a script",
    )
    classify.add_argument("--prompts-file")
    classify.add_argument("prompts", nargs="*")
    classify.set_defaults(func=_cmd_filter_classify)
    eval_parser = filter_sub.add_parser("eval", help="metrics on a labeled corpus")
    eval_parser.add_argument("--model", required=True)
    eval_parser.add_argument("--corpus", required=True)
    eval_parser.set_defaults(func=_cmd_filter_eval)

    coverage = subparsers.add_parser("coverage", help="duty coverage").add_subparsers(
        dest="subcommand", required=True
    )
    report = coverage.add_parser("report", help="coverage status per duty, as TSV")
    report.add_argument("stores", nargs="+")
    report.set_defaults(func=_cmd_coverage_report)
    trace = coverage.add_parser("trace", help="attack to duty causal chains")
    trace.add_argument("stores", nargs="+")
    trace.add_argument("--attack", required=True)
    trace.set_defaults(func=_cmd_coverage_trace)

    factsheet = subparsers.add_parser("factsheet", help="factsheet rendering").add_subparsers(
        dest="subcommand", required=True
    )
    render = factsheet.add_parser("render", help="assemble inputs and render")
    render.add_argument("--store", action="append", default=[])
    render.add_argument("--gsn")
    render.add_argument("--model")
    render.add_argument("--eval-corpus")
    render.add_argument("--system", default="LLM-based system")
    render.add_argument("--format", choices=["md", "html"], default="md")
    render.add_argument("-o", "--output")
    render.set_defaults(func=_cmd_factsheet_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.parser = parser
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
