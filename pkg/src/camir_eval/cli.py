"""``camir-eval`` command line.

Exit codes: 0 success, 1 schema violations or unpairable corpora,
2 usage error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .agreement import AGREEMENT_HEADER, pairwise_agreement
from .errors import (
    CamirError,
    PairingError,
    ParameterError,
    SchemaError,
    StandoffParseError,
    StructureError,
    ValidationFailed,
)
from .event_graph import document_from_json, document_to_json
from .schema import default_schema, load_schema, validate_corpus
from .scoring import LINK_EQUIVALENT, LINK_MATCHED, score_corpus
from .significance import DEFAULT_REPLICATES, DEFAULT_SEED, paired_bootstrap
from .standoff import MANIFEST_NAME, read_corpus, read_manifest, write_corpus
from .stats import corpus_summary, make_splits
from .synthetic import generate_synthetic_corpus

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _schema(args):
    if args.schema is None:
        return default_schema()
    return load_schema(Path(args.schema).read_text(encoding="utf-8"))


def _ratios(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"ratios must be comma-separated numbers, got {text!r}") from None


# ---------------------------------------------------------------------------


def cmd_validate(args, out) -> int:
    schema = _schema(args)
    docs = read_corpus(args.dir)
    violations = validate_corpus(schema, docs)
    if args.json:
        out.write(_dump({"tool_version": __version__, "documents": len(docs),
                         "violations": [v.__dict__ for v in violations]}))
    else:
        for v in violations:
            out.write(f"{v}\n")
    print(f"{len(docs)} document(s), {len(violations)} violation(s)", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def _emit_report(args, out, report, header=None) -> None:
    if args.json:
        out.write(_dump(report.to_dict(include_errors=args.errors, header=header)))
    else:
        if header:
            out.write(" ".join(f"{k}={v}" for k, v in header.items()) + "\n")
        out.write(report.to_table(include_errors=args.errors))


def cmd_score(args, out) -> int:
    report = score_corpus(read_corpus(args.ref), read_corpus(args.pred), _schema(args), args.mode,
                          validate=not args.no_validate, linking=args.linking)
    _emit_report(args, out, report)
    return EXIT_OK


def cmd_agree(args, out) -> int:
    report = pairwise_agreement(read_corpus(args.a), read_corpus(args.b), _schema(args), args.mode,
                                validate=not args.no_validate, linking=args.linking)
    _emit_report(args, out, report, header=AGREEMENT_HEADER)
    return EXIT_OK


def cmd_stats(args, out) -> int:
    report = corpus_summary(read_corpus(args.dir), _schema(args), args.group)
    out.write(_dump(report.to_dict()) if args.json else report.to_table())
    return EXIT_OK


def cmd_sigtest(args, out) -> int:
    result = paired_bootstrap(read_corpus(args.ref), read_corpus(args.a), read_corpus(args.b), _schema(args),
                              args.mode, args.metric, args.replicates, args.seed, exhaustive=args.exhaustive,
                              workers=args.workers, validate=not args.no_validate, linking=args.linking)
    if args.json:
        out.write(_dump({**result.to_dict(), "verdict": result.verdict()}))
    else:
        out.write(f"metric: {result.metric}\nF1(A): {result.f1_a:.4f}\nF1(B): {result.f1_b:.4f}\n"
                  f"observed_delta: {result.observed_delta:+.4f}\nreplicates: {result.replicates}\n"
                  f"seed: {result.seed}\n{result.verdict()}\n")
    return EXIT_OK


def _load_json_docs(path: Path):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    items = data["documents"] if isinstance(data, dict) else data
    return [document_from_json(item) for item in items]


def cmd_convert(args, out) -> int:
    src, dst = Path(args.input), Path(args.output)
    docs = read_corpus(src) if args.from_format == "brat" else _load_json_docs(src)
    if args.to_format == "brat":
        write_corpus(dst, docs)
    else:
        payload = {"tool_version": __version__, "documents": [document_to_json(d) for d in docs]}
        dst.parent.mkdir(parents=True, exist_ok=True)
        dst.write_text(_dump(payload), encoding="utf-8")
    print(f"converted {len(docs)} document(s) to {dst}", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args, out) -> int:
    docs = generate_synthetic_corpus(_schema(args), args.n, args.seed)
    manifest = make_splits([d.id for d in docs], args.ratios, args.seed)
    for d in docs:
        d.metadata["split"] = manifest.assignments[d.id]
    write_corpus(args.outdir, docs)
    print(f"wrote {len(docs)} synthetic document(s) to {args.outdir}", file=sys.stderr)
    return EXIT_OK


def cmd_split(args, out) -> int:
    directory = Path(args.dir)
    ids = sorted(p.stem for p in directory.glob("*.txt"))
    manifest = make_splits(ids, args.ratios, args.seed)
    payload = manifest.to_dict()
    if args.write:
        existing = read_manifest(directory)
        for doc_id, tag in manifest.assignments.items():
            existing.setdefault(doc_id, {})["split"] = tag
        merged = {"tool_version": __version__, "documents": {k: dict(sorted(v.items()))
                                                             for k, v in sorted(existing.items())}}
        (directory / MANIFEST_NAME).write_text(_dump(merged), encoding="utf-8")
    out.write(_dump(payload))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schema", help="schema config JSON (default: shipped CAMIR schema)")

    scoring = argparse.ArgumentParser(add_help=False)
    scoring.add_argument("--mode", choices=["overlap", "strict"], default="overlap")
    scoring.add_argument("--linking", choices=[LINK_EQUIVALENT, LINK_MATCHED], default=LINK_EQUIVALENT,
                         help="how argument triggers must correspond (default: equivalent)")
    scoring.add_argument("--no-validate", action="store_true", help="score without schema validation")

    report = argparse.ArgumentParser(add_help=False)
    fmt = report.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--table", dest="json", action="store_false", help="aligned table (default)")
    report.add_argument("--errors", action="store_true", help="include the span error breakdown")

    parser = argparse.ArgumentParser(prog="camir-eval", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="lint a corpus against the schema")
    p.add_argument("dir")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("score", parents=[common, scoring, report], help="score predictions against references")
    p.add_argument("--ref", required=True)
    p.add_argument("--pred", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("agree", parents=[common, scoring, report], help="inter-annotator agreement (pairwise F1)")
    p.add_argument("--a", required=True, help="annotator A corpus (treated as reference)")
    p.add_argument("--b", required=True, help="annotator B corpus")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("stats", parents=[common], help="corpus distribution summary")
    p.add_argument("dir")
    p.add_argument("--group", choices=["all", "modality", "split"], default="all")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sigtest", parents=[common, scoring], help="paired bootstrap test between two systems")
    p.add_argument("--ref", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", default="overall", help="'overall' or 'Event Type/Role', e.g. 'Lesion/TRIGGER'")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exhaustive", action="store_true", help="enumerate every resample (tiny corpora only)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sigtest)

    p = sub.add_parser("convert", help="convert between standoff directories and JSON")
    p.add_argument("--from", dest="from_format", choices=["brat", "json"], required=True)
    p.add_argument("--to", dest="to_format", choices=["brat", "json"], required=True)
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratios", type=_ratios, default=(0.7, 0.1, 0.2))
    p.add_argument("outdir")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("split", help="make a train/validation/test manifest")
    p.add_argument("dir")
    p.add_argument("--ratios", type=_ratios, default=(0.7, 0.1, 0.2))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--write", action="store_true", help=f"merge the splits into {MANIFEST_NAME}")
    p.set_defaults(func=cmd_split)
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ValidationFailed as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    except PairingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, StandoffParseError, SchemaError, StructureError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CamirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
