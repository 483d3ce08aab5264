"""Command line interface: ``run``, ``label``, ``link`` and ``evaluate``.

Exit codes: 0 on success, 1 for unreadable or malformed inputs, 2 for
invalid configuration or usage.
"""

import argparse
import logging
import os
import sys

from threadpoolctl import threadpool_limits

from . import __version__
from .dense import load_embeddings
from .evaluation import evaluate
from .labeling import dump_labels, label_synsets, load_labels
from .lexicon import InputError, load_gold, load_isa, load_synsets, open_output, write_taxonomy
from .linker import ConfigError, PipelineConfig, RunSummary, generate_pairs, link, load_config
from .sparse_wsd import dump_trace

logger = logging.getLogger("sensehyper")


def _output(path):
    return sys.stdout if path in (None, "-") else path


def _add_linking_options(p):
    p.add_argument("--mode", choices=("sparse", "full"), help="pipeline configuration (default: sparse)")
    p.add_argument("--k", type=int, help="nearest neighbours per label vector (default: 1)")
    p.add_argument("--m", type=int, help="largest synset size accepted as a dense match (default: 15)")
    p.add_argument("--embeddings", help="word2vec-format vectors, required in full mode")
    p.add_argument("--binary-embeddings", action="store_true", default=None,
                   help="read the embeddings in the binary word2vec layout")
    p.add_argument("--knn-postfilter", action="store_true", default=None,
                   help="retrieve k admissible synsets instead of k raw neighbours")
    p.add_argument("--min-coverage", type=float,
                   help="minimum fraction of in-vocabulary words for an indexed vector")
    p.add_argument("--wsd-zero-fallback", choices=("first",),
                   help="assign the lowest sense id when all similarities are zero")
    p.add_argument("--wsd-dump", help="write sparse disambiguation decisions to this TSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sensehyper",
        description="Turn word-level is-a pairs into hypernymy between word senses.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads for numeric kernels (default: all cores)")
    parser.add_argument("--log-level", default="WARNING",
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="label, disambiguate, match and write sense pairs")
    run.add_argument("--config", help="key = value file mirroring the pipeline options")
    run.add_argument("--synsets", help="synset TSV")
    run.add_argument("--isa", help="is-a pair TSV")
    run.add_argument("--output", help="output TSV (default: standard output)")
    run.add_argument("--n", type=int, help="top-weighted hypernyms kept per synset (default: 3)")
    run.add_argument("--min-count", type=int, help="drop is-a pairs seen fewer times (default: 1)")
    run.add_argument("--labels-dump", help="also write the weighted labels to this TSV")
    run.add_argument("--seed", type=int, help="reserved; the pipeline has no randomness")
    _add_linking_options(run)

    label = sub.add_parser("label", help="build tf-idf weighted hypernym labels")
    label.add_argument("--synsets", required=True)
    label.add_argument("--isa", required=True)
    label.add_argument("--min-count", type=int, default=1)
    label.add_argument("--n", type=int, default=3)
    label.add_argument("--output", help="label TSV (default: standard output)")

    lnk = sub.add_parser("link", help="disambiguate precomputed labels and write sense pairs")
    lnk.add_argument("--synsets", required=True)
    lnk.add_argument("--labels", required=True, help="label TSV written by 'label'")
    lnk.add_argument("--n", type=int, default=3)
    lnk.add_argument("--output", help="output TSV (default: standard output)")
    _add_linking_options(lnk)

    ev = sub.add_parser("evaluate", help="path-existence precision/recall against a gold taxonomy")
    ev.add_argument("--predicted", required=True, help="predicted sense-pair TSV")
    ev.add_argument("--gold", required=True, help="gold sense-pair TSV")
    ev.add_argument("--max-path-length", type=int, help="only count paths up to this many edges")
    return parser


def _config_from_args(args) -> PipelineConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else PipelineConfig()
    cfg = cfg.updated(
        synsets=getattr(args, "synsets", None),
        isa=getattr(args, "isa", None),
        embeddings=args.embeddings,
        output=args.output,
        mode=args.mode,
        n=args.n,
        k=args.k,
        m=args.m,
        min_count=getattr(args, "min_count", None),
        knn_postfilter=args.knn_postfilter,
        wsd_zero_fallback=args.wsd_zero_fallback,
        min_coverage=args.min_coverage,
        binary_embeddings=args.binary_embeddings,
        seed=getattr(args, "seed", None),
    )
    return cfg


def _link_and_write(cfg, inventory, labels, summary, wsd_dump):
    store = None
    if cfg.mode == "full":
        with summary.stage("load_embeddings"):
            store = load_embeddings(cfg.embeddings, binary=cfg.binary_embeddings)
        summary.counts["embedding_words"] = len(store)
    trace = [] if wsd_dump else None
    _, final = link(
        inventory, labels, cfg.mode, cfg.k, cfg.m, store,
        knn_postfilter=cfg.knn_postfilter,
        wsd_zero_fallback=cfg.wsd_zero_fallback,
        min_coverage=cfg.min_coverage,
        summary=summary, trace=trace,
    )
    if wsd_dump:
        dump_trace(trace, wsd_dump)
    with summary.stage("generate"):
        taxonomy = generate_pairs(inventory, final)
    with open_output(_output(cfg.output)) as f:
        summary.counts["output_pairs"] = write_taxonomy(taxonomy, f)


def cmd_run(args):
    cfg = _config_from_args(args).validate()
    summary = RunSummary()
    with summary.stage("load"):
        inventory = load_synsets(cfg.synsets)
        relation = load_isa(cfg.isa, cfg.min_count)
    summary.counts.update(
        synsets=len(inventory), senses=inventory.n_senses, isa_pairs=len(relation),
        isa_self_loops_dropped=relation.dropped_self_loops,
        isa_below_min_count=relation.dropped_below_min_count,
    )
    with summary.stage("label"):
        labels = label_synsets(inventory, relation, cfg.n)
    summary.counts["empty_labels"] = sum(1 for lab in labels.values() if not lab.counts)
    if args.labels_dump:
        dump_labels(labels, args.labels_dump)
    _link_and_write(cfg, inventory, labels, summary, args.wsd_dump)
    return summary


def cmd_label(args):
    if args.n < 1 or args.min_count < 1:
        raise ConfigError("--n and --min-count must be positive")
    summary = RunSummary()
    with summary.stage("load"):
        inventory = load_synsets(args.synsets)
        relation = load_isa(args.isa, args.min_count)
    with summary.stage("label"):
        labels = label_synsets(inventory, relation, args.n)
    with open_output(_output(args.output)) as f:
        summary.counts["label_rows"] = dump_labels(labels, f)
    summary.counts["synsets"] = len(inventory)
    summary.counts["empty_labels"] = sum(1 for lab in labels.values() if not lab.counts)
    return summary


def cmd_link(args):
    cfg = _config_from_args(args).validate(require_inputs=False)
    summary = RunSummary()
    with summary.stage("load"):
        inventory = load_synsets(args.synsets)
        labels = load_labels(args.labels, inventory, cfg.n)
    summary.counts["synsets"] = len(inventory)
    _link_and_write(cfg, inventory, labels, summary, args.wsd_dump)
    return summary


def cmd_evaluate(args):
    if args.max_path_length is not None and args.max_path_length < 0:
        raise ConfigError("--max-path-length must be non-negative")
    report = evaluate(load_gold(args.predicted), load_gold(args.gold), args.max_path_length)
    print(report.as_text())
    print(report.as_key_values())
    return None


COMMANDS = {"run": cmd_run, "label": cmd_label, "link": cmd_link, "evaluate": cmd_evaluate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("sensehyper: error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        with threadpool_limits(limits=args.threads):
            summary = COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"sensehyper: configuration error: {e}", file=sys.stderr)
        return 2
    except (InputError, OSError) as e:
        print(f"sensehyper: input error: {e}", file=sys.stderr)
        return 1
    if summary is not None:
        print(summary.format(), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
