"""Command-line entry point.

Subcommands:
    run              execute pipeline stages from a config file
    validate-config  check a config file without running anything
    review-queue     export low-confidence dyads for human curation
    export           write per-period networks in graphml/dot/edge_csv form

Exit codes: 0 success, 1 validation/input error, 2 missing predecessor
output, 3 provider transport failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import config_from_dict, load_raw_config, set_override
from .errors import ClaimnetError, ConfigError, InputError, MissingStageInput, TransportError
from .network import EXPORT_FORMATS
from .pipeline import STAGES, export_networks, export_review_queue, run

logger = logging.getLogger(__name__)


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any config field by dotted path, e.g. "
        "--set categorizer.tau=0.6 or --set 'stance.overrides.130=gegen {phrase}'",
    )
    parser.add_argument("--corpus", help="override corpus JSONL path")
    parser.add_argument("--conllu-dir", help="override annotation directory")
    parser.add_argument("--gold", help="override gold dyad CSV path")
    parser.add_argument("--gold-sentences", help="override gold sentence CSV path")
    parser.add_argument("--seeds", help="override seed TSV path")
    parser.add_argument("--codebook", help="override codebook TSV path")
    parser.add_argument("--periods", help="override periods CSV path")
    parser.add_argument("--output-dir", help="override output directory")
    parser.add_argument("--query", help="override the keyword query")
    parser.add_argument("--claim-threshold", type=float, help="override claim score threshold")
    parser.add_argument("--tau", type=float, help="override categorizer similarity threshold")
    parser.add_argument("--pooling", choices=("max", "mean"), help="override seed pooling")
    parser.add_argument(
        "--degree-mode",
        choices=("distinct_actors", "mention_count"),
        help="override concept degree mode",
    )


def _apply_overrides(cfg, args) -> None:
    cwd = Path.cwd()
    for attr, key in (
        ("corpus", "corpus"),
        ("conllu_dir", "conllu_dir"),
        ("gold", "gold"),
        ("gold_sentences", "gold_sentences"),
        ("seeds", "seeds"),
        ("codebook", "codebook"),
        ("periods", "periods"),
        ("output_dir", "output_dir"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            p = Path(value)
            setattr(cfg, key, p if p.is_absolute() else cwd / p)
    if getattr(args, "query", None) is not None:
        cfg.query = args.query
    if getattr(args, "claim_threshold", None) is not None:
        cfg.claims.threshold = args.claim_threshold
    if getattr(args, "tau", None) is not None:
        cfg.categorizer.tau = args.tau
    if getattr(args, "pooling", None) is not None:
        cfg.categorizer.pooling = args.pooling
    if getattr(args, "degree_mode", None) is not None:
        cfg.core.degree_mode = args.degree_mode


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="claimnet",
        description="Annotate newspaper corpora into actor-claim dyads and discourse networks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run pipeline stages")
    p_run.add_argument("--config", required=True, help="JSON config file")
    p_run.add_argument(
        "--stages",
        help=f"comma-separated subset of {','.join(STAGES)} (default: all)",
    )
    p_run.add_argument("--force", action="store_true", help="rerun stages even if outputs exist")
    _add_overrides(p_run)

    p_val = sub.add_parser("validate-config", help="validate a config file")
    p_val.add_argument("--config", required=True)
    _add_overrides(p_val)

    p_queue = sub.add_parser("review-queue", help="export low-confidence dyads as TSV")
    p_queue.add_argument("--config", required=True)
    p_queue.add_argument("--output", help="TSV output path (default: <output_dir>/review_queue.tsv)")
    _add_overrides(p_queue)

    p_exp = sub.add_parser("export", help="export per-period networks")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("--format", choices=EXPORT_FORMATS, default="graphml")
    p_exp.add_argument("--export-dir", help="directory for exports (default: output_dir)")
    _add_overrides(p_exp)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        raw, base = load_raw_config(args.config)
        for assignment in args.overrides:
            set_override(raw, assignment)
        cfg = config_from_dict(raw, base=base)
        _apply_overrides(cfg, args)
        if args.command == "run":
            stages = tuple(s.strip() for s in args.stages.split(",")) if args.stages else None
            results = run(cfg, stages=stages, force=args.force)
            for stage, counters in results.items():
                logger.info("%s: %s", stage, json.dumps(counters, ensure_ascii=False))
            return 0
        if args.command == "validate-config":
            cfg.validate(need_gold=False)
            print("config ok")
            return 0
        if args.command == "review-queue":
            out = export_review_queue(cfg, Path(args.output) if args.output else None)
            print(str(out))
            return 0
        if args.command == "export":
            written = export_networks(
                cfg, args.format, Path(args.export_dir) if args.export_dir else None
            )
            for p in written:
                print(str(p))
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except MissingStageInput as exc:
        logger.error("missing stage input: %s", exc)
        return 2
    except TransportError as exc:
        logger.error("transport failure: %s", exc)
        return 3
    except (ConfigError, InputError) as exc:
        logger.error("invalid input: %s", exc)
        return 1
    except ClaimnetError as exc:
        logger.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
