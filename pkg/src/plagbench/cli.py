"""Command-line pipeline: detect, gen-cases, select-pairs, serve, analyze, export.

The subcommands mirror the evaluation workflow end to end: generate
artificial cases, select contradicting pairs from a corpus, run the survey
service for live respondents, then analyze the exported responses into an
effectiveness report. ``detect`` runs both detectors on an ad-hoc file
pair.

Shared knobs can come from a JSON config file (--config); explicit flags
override it, and every artifact-producing run writes an effective-config
snapshot next to its outputs so campaigns stay reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, casegen, pairsel
from .attribute import aba_similarity
from .lexer import Abstraction, LexerConfig, dump_tokens, tokenize_file
from .structure import DEFAULT_MIN_MATCH, dump_tiles, rkr_gst_tiles, sba_similarity
from .survey.service import PairItem, SurveyService
from .survey.store import EventLog

CONFIG_DEFAULTS = {
    "abstraction": "CATEGORY",
    "minMatch": DEFAULT_MIN_MATCH,
    "alpha": 0.05,
    "minDelta": 0.0,
    "quota": {str(k): v for k, v in pairsel.DEFAULT_LEVEL_QUOTAS.items()},
    "groups": 3,
    "seed": 0,
}


class UsageError(ValueError):
    pass


def _load_config(path: str | None, overrides: dict) -> dict:
    config = dict(CONFIG_DEFAULTS)
    if path:
        config.update(json.loads(Path(path).read_text(encoding="utf-8")))
    config.update({k: v for k, v in overrides.items() if v is not None})
    if not 0.0 < float(config["alpha"]) < 1.0:
        raise UsageError(f"alpha must be in (0, 1), got {config['alpha']}")
    if int(config["minMatch"]) < 1:
        raise UsageError(f"minMatch must be >= 1, got {config['minMatch']}")
    if int(config["groups"]) < 1:
        raise UsageError(f"groups must be >= 1, got {config['groups']}")
    return config


def _lexer_config(config: dict) -> LexerConfig:
    return LexerConfig(abstraction=Abstraction(config["abstraction"]))


def _write_snapshot(config: dict, target_dir: Path, name="effective-config.json") -> None:
    target_dir.mkdir(parents=True, exist_ok=True)
    (target_dir / name).write_text(
        json.dumps(config, indent=2, sort_keys=True), encoding="utf-8"
    )


def _parse_quota(text: str | None) -> dict[str, int] | None:
    if text is None:
        return None
    quota = {}
    for chunk in text.split(","):
        level, _, count = chunk.partition("=")
        if not count:
            raise UsageError(f"bad quota entry {chunk!r}, expected LEVEL=COUNT")
        quota[level.strip()] = int(count)
    return quota


# -- subcommands ------------------------------------------------------------

def cmd_detect(args) -> int:
    config = _load_config(args.config, {
        "abstraction": args.abstraction, "minMatch": args.min_match,
    })
    lexer_config = _lexer_config(config)
    seq_a = tokenize_file(args.file_a, lexer_config)
    seq_b = tokenize_file(args.file_b, lexer_config)
    min_match = int(config["minMatch"])
    aba = aba_similarity(seq_a, seq_b).value
    sba = sba_similarity(seq_a, seq_b, min_match).value
    if args.dump_tokens:
        print(dump_tokens(seq_a), file=sys.stderr)
        print(dump_tokens(seq_b), file=sys.stderr)
    if args.dump_tiles:
        print(dump_tiles(rkr_gst_tiles(seq_a, seq_b, min_match)), file=sys.stderr)
    if args.json:
        print(json.dumps({
            "fileA": str(args.file_a), "fileB": str(args.file_b),
            "ABA": aba, "SBA": sba,
            "abstraction": config["abstraction"], "minMatch": min_match,
        }, sort_keys=True))
    else:
        print(f"ABA {aba:.4f}")
        print(f"SBA {sba:.4f}")
    return 0


def cmd_gen_cases(args) -> int:
    config = _load_config(args.config, {"seed": args.seed})
    spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    if spec.get("schemaVersion") != 1:
        raise UsageError(f"unsupported case spec schema: {spec.get('schemaVersion')}")
    base = Path(args.spec).parent
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cases = []
    for entry in spec["cases"]:
        source = (base / entry["source"]).read_text(encoding="utf-8")
        scope = casegen.CaseScope(entry["scope"])
        if scope is casegen.CaseScope.SINGLE_INSTRUCTION:
            case = casegen.generate_swap_variants(
                source,
                [tuple(span) for span in entry["statements"]],
                tuple(entry.get("swapCounts", casegen.DEFAULT_SWAP_COUNTS)),
                case_id=entry["id"],
                seed=int(config["seed"]),
            )
        else:
            case = casegen.generate_block_permutations(
                source,
                [tuple(block) for block in entry["blocks"]],
                scope,
                case_id=entry["id"],
            )
        cases.append(case)
        casegen.save_case_bundle(case, out_dir / f"{case.case_id}.case.json")
        print(f"{case.case_id}: {len(case.variants)} variants ({scope.value})")
    validation = casegen.validate_case_set(
        cases, _lexer_config(config), int(config["minMatch"]), float(config["alpha"])
    )
    (out_dir / "validation.json").write_text(json.dumps({
        "valid": validation.valid,
        "reason": validation.reason,
        "tTest": None if validation.t_test is None else {
            "t": validation.t_test.t, "df": validation.t_test.df, "p": validation.t_test.p,
        },
        "perVariantABA": validation.per_variant_aba,
        "perVariantSBA": validation.per_variant_sba,
    }, indent=2, sort_keys=True), encoding="utf-8")
    _write_snapshot(config, out_dir)
    print(f"validation: valid={validation.valid}"
          + (f" p={validation.t_test.p:.4g}" if validation.t_test else
             f" reason={validation.reason}"))
    return 0


def cmd_select_pairs(args) -> int:
    config = _load_config(args.config, {
        "abstraction": args.abstraction, "minMatch": args.min_match,
        "minDelta": args.min_delta, "quota": _parse_quota(args.quota),
    })
    lexer_config = _lexer_config(config)
    min_match = int(config["minMatch"])
    dataset = pairsel.ingest_dataset(args.manifest, lexer_config)
    candidates = []
    for cluster in dataset.clusters:
        sims_aba = pairsel.cluster_similarities(
            cluster, lambda a, b: aba_similarity(a, b).value)
        sims_sba = pairsel.cluster_similarities(
            cluster, lambda a, b: sba_similarity(a, b, min_match).value)
        candidates.extend(pairsel.contradicting_pairs(cluster, sims_aba, sims_sba))
    quota = {int(k): int(v) for k, v in config["quota"].items()}
    report = pairsel.select_survey_pairs(
        candidates, quota, float(config["minDelta"]), float(config["alpha"])
    )
    out = Path(args.out)
    pairsel.save_report(report, out, args.csv)
    _write_snapshot(config, out.parent)
    print(f"clusters: {len(dataset.clusters)}, candidates: {len(candidates)}, "
          f"selected: {len(report.selected)}, gate: {report.gate_passed}")
    for level, missing in sorted(report.shortfalls.items()):
        print(f"shortfall at level {level}: {missing} pair(s) short")
    return 0


def _load_cases(cases_path: str) -> list[casegen.ArtificialCase]:
    path = Path(cases_path)
    if path.is_dir():
        files = sorted(path.glob("*.case.json"))
    else:
        files = [path]
    if not files:
        raise UsageError(f"no case bundles found under {cases_path}")
    return [casegen.load_case_bundle(f) for f in files]


def _build_pair_items(report: pairsel.SelectionReport,
                      dataset: pairsel.PlagiarismDataset) -> list[PairItem]:
    clusters = {cluster.cluster_id: cluster for cluster in dataset.clusters}
    items = []
    for pair in report.selected:
        cluster = clusters.get(pair.cluster_id)
        if cluster is None:
            raise UsageError(f"pair {pair.pair_id} references unknown cluster "
                             f"{pair.cluster_id}; wrong manifest?")
        items.append(PairItem(
            pair_id=pair.pair_id,
            original_source=Path(cluster.original_path).read_text(encoding="utf-8"),
            member_ids=(pair.code_a, pair.code_b),
            member_sources=(
                Path(pair.path_a).read_text(encoding="utf-8"),
                Path(pair.path_b).read_text(encoding="utf-8"),
            ),
        ))
    return items


def cmd_serve(args) -> int:
    import uvicorn

    from .survey.http import create_app

    config = _load_config(args.config, {"groups": args.groups, "seed": args.seed})
    store_path = args.store or os.environ.get("PLAGBENCH_STORE")
    if not store_path:
        raise UsageError("--store or PLAGBENCH_STORE is required")
    admin_token = args.admin_token or os.environ.get("PLAGBENCH_ADMIN_TOKEN")
    if not admin_token:
        raise UsageError("--admin-token or PLAGBENCH_ADMIN_TOKEN is required")
    bind = args.bind or os.environ.get("PLAGBENCH_BIND", "127.0.0.1:8000")
    host, _, port = bind.partition(":")

    cases = _load_cases(args.cases) if args.cases else []
    pair_items: list[PairItem] = []
    if args.pairs:
        if not args.manifest:
            raise UsageError("--pairs requires --manifest to resolve source files")
        report = pairsel.load_report(args.pairs)
        dataset = pairsel.ingest_dataset(args.manifest, _lexer_config(config))
        pair_items = _build_pair_items(report, dataset)

    service = SurveyService(
        EventLog(store_path),
        cases=cases,
        pairs=pair_items,
        group_count=int(config["groups"]),
        seed=int(config["seed"]),
    )
    _write_snapshot(config, Path(store_path).parent)
    app = create_app(service, admin_token, ui_dir=args.ui)
    print(f"serving {len(cases)} case(s), {len(pair_items)} pair(s) "
          f"in {config['groups']} group(s) on {host}:{port or 8000}")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000),
                log_level="warning")
    return 0


def cmd_analyze(args) -> int:
    config = _load_config(args.config, {
        "abstraction": args.abstraction, "minMatch": args.min_match,
    })
    cases = _load_cases(args.cases)
    report = pairsel.load_report(args.pairs) if args.pairs else None

    if args.responses:
        bundle = json.loads(Path(args.responses).read_text(encoding="utf-8"))
    elif args.store:
        log = EventLog(args.store)
        responses = [
            {k: v for k, v in record.items() if k != "event"}
            for record in log.replay() if record.get("event") == "response"
        ]
        bundle = {"schemaVersion": 1, "responses": responses}
    else:
        raise UsageError("--responses or --store is required")

    detectors = analysis.default_detectors(min_match=int(config["minMatch"]))
    case_rankings = analysis.case_rankings_from_export(bundle)
    aspect = analysis.aspect_report(cases, case_rankings, detectors,
                                    _lexer_config(config))

    pairs = report.selected if report else []
    preferences = analysis.pair_preferences_from_export(bundle)
    empirical = analysis.empirical_report(pairs, preferences)

    if args.coding:
        coding = json.loads(Path(args.coding).read_text(encoding="utf-8"))
        tally = analysis.aspect_tally(coding.get("annotations", {}),
                                      coding.get("codebook", {}))
    else:
        tally = analysis.AspectTally([])

    effectiveness = analysis.build_effectiveness_report(aspect, empirical, tally)
    out_dir = Path(args.out)
    paths = analysis.write_report_artifacts(effectiveness, out_dir)
    _write_snapshot(config, out_dir)
    print(f"verdict: {effectiveness.verdict}")
    for mechanism, winner in effectiveness.mechanism_winners.items():
        print(f"  {mechanism}: {winner or 'tie'}")
    print(f"report: {paths['report']}")
    return 0


def cmd_export(args) -> int:
    log = EventLog(args.store)
    responses = [
        {k: v for k, v in record.items() if k != "event"}
        for record in log.replay() if record.get("event") == "response"
    ]
    if args.kind:
        responses = [r for r in responses if r["kind"] == args.kind]
    if args.session:
        responses = [r for r in responses if r["sessionId"] == args.session]
    bundle = {"schemaVersion": 1, "responses": responses}
    text = json.dumps(bundle, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"{len(responses)} response(s) -> {args.out}")
    else:
        print(text)
    return 0


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plagbench",
        description="Plagiarism detectors and the human-oriented evaluation pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="compare two source files with both detectors")
    detect.add_argument("file_a")
    detect.add_argument("file_b")
    detect.add_argument("--json", action="store_true", help="machine-readable stdout")
    detect.add_argument("--dump-tokens", action="store_true")
    detect.add_argument("--dump-tiles", action="store_true")
    detect.add_argument("--abstraction", choices=["CATEGORY", "LEXEME"])
    detect.add_argument("--min-match", type=int)
    detect.add_argument("--config")
    detect.set_defaults(func=cmd_detect)

    gen = sub.add_parser("gen-cases", help="generate artificial survey cases")
    gen.add_argument("--spec", required=True, help="case spec JSON")
    gen.add_argument("--out", required=True, help="output directory for bundles")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--config")
    gen.set_defaults(func=cmd_gen_cases)

    select = sub.add_parser("select-pairs", help="select contradicting pairs from a corpus")
    select.add_argument("--manifest", required=True)
    select.add_argument("--out", required=True, help="selection report JSON path")
    select.add_argument("--csv", help="optional flat table path")
    select.add_argument("--min-delta", type=float)
    select.add_argument("--quota", help="per-level quota, e.g. 2=5,3=9,4=11,5=10,6=10")
    select.add_argument("--abstraction", choices=["CATEGORY", "LEXEME"])
    select.add_argument("--min-match", type=int)
    select.add_argument("--config")
    select.set_defaults(func=cmd_select_pairs)

    serve = sub.add_parser("serve", help="run the survey HTTP service")
    serve.add_argument("--store", help="record log path (env PLAGBENCH_STORE)")
    serve.add_argument("--cases", help="case bundle directory or file")
    serve.add_argument("--pairs", help="selection report JSON")
    serve.add_argument("--manifest", help="dataset manifest for pair sources")
    serve.add_argument("--groups", type=int)
    serve.add_argument("--seed", type=int)
    serve.add_argument("--bind", help="host:port (env PLAGBENCH_BIND)")
    serve.add_argument("--admin-token", help="env PLAGBENCH_ADMIN_TOKEN")
    serve.add_argument("--ui", help="directory with the built survey UI")
    serve.add_argument("--config")
    serve.set_defaults(func=cmd_serve)

    an = sub.add_parser("analyze", help="compute the effectiveness report")
    an.add_argument("--cases", required=True)
    an.add_argument("--pairs")
    an.add_argument("--responses", help="export bundle JSON")
    an.add_argument("--store", help="read responses straight from a record log")
    an.add_argument("--coding", help="think-aloud coding JSON")
    an.add_argument("--out", required=True)
    an.add_argument("--abstraction", choices=["CATEGORY", "LEXEME"])
    an.add_argument("--min-match", type=int)
    an.add_argument("--config")
    an.set_defaults(func=cmd_analyze)

    export = sub.add_parser("export", help="export responses from a record log")
    export.add_argument("--store", required=True)
    export.add_argument("--kind", choices=["CASE_RANKING", "PAIR_PREFERENCE", "THINK_ALOUD"])
    export.add_argument("--session")
    export.add_argument("--out")
    export.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(json.dumps({"error": {"type": "UsageError", "message": str(exc)}}),
              file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - single CLI error boundary
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
