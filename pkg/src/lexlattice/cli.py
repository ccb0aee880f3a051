"""Command-line interface.

Subcommands: ``ingest`` (text to document stats/dump), ``conditional``
(single conditional query), ``lattice`` (full topic-lattice run with table,
JSON, anomaly report and resolved DOT output), ``compare`` (cross-language
lattice diff) and ``qcheck`` (reference-model validation).

Exit codes: 0 success, 1 failed check, 2 usage or input error, 3 data
coverage error.  All outputs are deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from .conditional import Convention, SmoothingConfig, smoothed_subjunctive, topic_subjunctive
from .corpus import Corpus, CorpusAverages, TokenizerConfig, strip_gutenberg, tokenize
from .crosslingual import KeywordAlignment, align_compare, morphism_check
from .errors import CoverageError, EmptyDocumentError
from .eraser import SelectiveEraser
from .order_core import build_polarisation_lattice, run_reference_checks
from .topic_lattice import (
    TopicConfig,
    build_lattice,
    export_dot,
    export_json,
    import_json,
    render_table,
    resolve,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_COVERAGE = 3

CONFIG_SCHEMA = {
    "tokenizer": {
        "lowercase": bool,
        "token_pattern": str,
        "keep_diacritics": bool,
        "min_token_length": int,
    },
    "topic": {
        "keywords": list,
        "topic_width": int,
        "max_width": int,
        "threshold": (int, float),
    },
    "smoothing": {"mu": (int, float)},
    "convention": str,
    "language": str,
    "seed": int,
    "input": str,
    "output_dir": str,
}


def load_config(path: str | None) -> dict:
    """Load and schema-validate a YAML run configuration; unknown keys are rejected."""
    if path is None:
        return {}
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a key-value mapping")
    problems: list[str] = []
    for key, value in raw.items():
        if key not in CONFIG_SCHEMA:
            problems.append(f"unknown key {key!r}")
            continue
        expected = CONFIG_SCHEMA[key]
        if isinstance(expected, dict):
            if not isinstance(value, dict):
                problems.append(f"{key!r} must be a mapping")
                continue
            for sub, sub_value in value.items():
                if sub not in expected:
                    problems.append(f"unknown key {key}.{sub!r}")
                elif not isinstance(sub_value, expected[sub]) or (
                    expected[sub] is int and isinstance(sub_value, bool)
                ):
                    problems.append(f"{key}.{sub!r} has the wrong type")
        elif not isinstance(value, expected):
            problems.append(f"{key!r} has the wrong type")
    if problems:
        raise ValueError("invalid config: " + "; ".join(sorted(problems)))
    return raw


def _tokenizer_config(config: dict) -> TokenizerConfig:
    return TokenizerConfig(**config.get("tokenizer", {}))


def _topic_config(config: dict, keywords_override: list[str] | None = None) -> TopicConfig:
    section = dict(config.get("topic", {}))
    config_keywords = section.pop("keywords", None)
    keywords = keywords_override or config_keywords
    if not keywords:
        raise ValueError("topic keywords are required (config topic.keywords or --keywords)")
    return TopicConfig(
        keywords=tuple(keywords),
        mu=float(config.get("smoothing", {}).get("mu", 1.0)),
        convention=Convention(config.get("convention", "written")),
        **section,
    )


def _resolve_input(path: str | None, config: dict) -> str:
    resolved = path or config.get("input")
    if not resolved:
        raise ValueError("an input path is required (positional argument or config 'input')")
    return resolved


def _read_document(path: str, config: dict, language: str | None = None):
    raw = Path(path).read_text(encoding="utf-8")
    body, markers_found = strip_gutenberg(raw)
    if not markers_found and body is not raw:
        print("note: incomplete Gutenberg markers; using text after the start marker", file=sys.stderr)
    doc = tokenize(
        body,
        _tokenizer_config(config),
        doc_id=Path(path).stem,
        language=language or config.get("language", "und"),
    )
    return doc


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _parse_eraser(text: str) -> SelectiveEraser:
    term, sep, width = text.rpartition(",")
    if not sep or not term:
        raise argparse.ArgumentTypeError("expected TERM,WIDTH")
    try:
        return SelectiveEraser(term.strip(), int(width))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def cmd_ingest(args) -> int:
    config = load_config(args.config)
    doc = _read_document(_resolve_input(args.path, config), config, language=args.language)
    payload = _dump_json(doc.to_summary(include_tokens=args.include_tokens))
    stats = f"tokens={doc.token_count} terms={doc.term_count}"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(stats)
    else:
        print(stats, file=sys.stderr)
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_conditional(args) -> int:
    config = load_config(args.config)
    doc = _read_document(_resolve_input(args.doc, config), config)
    averages = CorpusAverages(Corpus([doc]))
    mu = args.mu if args.mu is not None else float(config.get("smoothing", {}).get("mu", 1.0))
    smoothing = SmoothingConfig(mu, averages) if mu > 0 else None
    convention = Convention(args.convention or config.get("convention", "written"))
    if args.topic_width is not None:
        result = topic_subjunctive(
            doc, args.ante, args.cons, args.topic_width, smoothing, convention
        )
    else:
        result = smoothed_subjunctive(
            doc, args.ante, args.cons, smoothing or SmoothingConfig(0.0, None), convention
        )
    sys.stdout.write(_dump_json(result.to_json()))
    return EXIT_OK


def cmd_lattice(args) -> int:
    config = load_config(args.config)
    doc = _read_document(_resolve_input(args.doc, config), config)
    topic = _topic_config(config, args.keywords.split(",") if args.keywords else None)
    if not any(k in doc.vocabulary for k in topic.keywords):
        raise CoverageError("no keyword present in the text")
    lattice = build_lattice(doc, topic)
    table = render_table(lattice)
    out_dir = Path(args.out_dir or config.get("output_dir", "out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "table.txt").write_text(table, encoding="utf-8")
    (out_dir / "lattice.json").write_text(export_json(lattice), encoding="utf-8")
    for strategy in ("prune-min", "collapse"):
        resolved = resolve(lattice, strategy)
        slug = strategy.replace("-", "_")
        (out_dir / f"resolved_{slug}.json").write_text(export_json(resolved), encoding="utf-8")
        (out_dir / f"resolved_{slug}.dot").write_text(export_dot(resolved), encoding="utf-8")
    sys.stdout.write(table)
    if lattice.anomalies:
        print(f"anomalies: {len(lattice.anomalies)}")
        for anomaly in lattice.anomalies:
            members = ", ".join(str(m) for m in anomaly.members)
            print(f"  cycle [{members}] weakest {anomaly.weakest_edge.antecedent}"
                  f"->{anomaly.weakest_edge.consequent} p={anomaly.weakest_edge.probability:.2f}")
    else:
        print("anomalies: none")
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        l1 = import_json(Path(args.lattice1).read_text(encoding="utf-8"))
        l2 = import_json(Path(args.lattice2).read_text(encoding="utf-8"))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(f"lattice file does not match the expected schema: {exc}")
    mapping = json.loads(Path(args.alignment).read_text(encoding="utf-8"))
    if not isinstance(mapping, dict):
        raise ValueError("alignment file must hold a term-to-term JSON object")
    alignment = KeywordAlignment.from_dict(mapping)
    diff = align_compare(l1, l2, alignment)
    morphism = morphism_check(l1, l2, alignment)
    payload = diff.to_json()
    payload["morphism"] = morphism.to_json()
    rendered = _dump_json(payload)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    print(f"similarity={diff.similarity:.3f} shared={len(diff.shared)} "
          f"only_l1={len(diff.only_l1)} only_l2={len(diff.only_l2)} "
          f"morphism={'holds' if morphism.holds else 'violated'}", file=sys.stderr)
    return EXIT_OK


def cmd_qcheck(args) -> int:
    results = run_reference_checks()
    failed = [r for r in results if not r.passed]
    if args.json:
        payload = {
            "lattice": build_polarisation_lattice().to_json(),
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
        }
        sys.stdout.write(_dump_json(payload))
    else:
        for result in results:
            status = "ok" if result.passed else "FAIL"
            print(f"{status:4s} {result.name}: {result.detail}")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexlattice",
        description="Selective-eraser lexical measurements and topic lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="tokenize a text file and report statistics")
    p_ingest.add_argument("path", nargs="?")
    p_ingest.add_argument("--config")
    p_ingest.add_argument("--language")
    p_ingest.add_argument("--out", help="write the document JSON to this file")
    p_ingest.add_argument("--include-tokens", action="store_true")
    p_ingest.set_defaults(func=cmd_ingest)

    p_cond = sub.add_parser("conditional", help="evaluate one conditional")
    p_cond.add_argument("doc", nargs="?")
    p_cond.add_argument("--ante", type=_parse_eraser, required=True, metavar="TERM,WIDTH")
    p_cond.add_argument("--cons", type=_parse_eraser, required=True, metavar="TERM,WIDTH")
    p_cond.add_argument("--topic-width", type=int, default=None)
    p_cond.add_argument("--mu", type=float, default=None)
    p_cond.add_argument("--convention", choices=[c.value for c in Convention], default=None)
    p_cond.add_argument("--config")
    p_cond.set_defaults(func=cmd_conditional)

    p_lattice = sub.add_parser("lattice", help="run the topic-lattice scan")
    p_lattice.add_argument("doc", nargs="?")
    p_lattice.add_argument("--config")
    p_lattice.add_argument("--keywords", help="comma-separated keyword list")
    p_lattice.add_argument("--out-dir", default=None, help="default: config output_dir, else ./out")
    p_lattice.set_defaults(func=cmd_lattice)

    p_compare = sub.add_parser("compare", help="diff two lattice JSON files")
    p_compare.add_argument("lattice1")
    p_compare.add_argument("lattice2")
    p_compare.add_argument("--alignment", required=True, help="JSON object mapping L1 to L2 terms")
    p_compare.add_argument("--out")
    p_compare.set_defaults(func=cmd_compare)

    p_qcheck = sub.add_parser("qcheck", help="run the reference-model checks")
    p_qcheck.add_argument("--json", action="store_true", help="emit a JSON report with the lattice")
    p_qcheck.set_defaults(func=cmd_qcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CoverageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except (EmptyDocumentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
