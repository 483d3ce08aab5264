"""Pipeline orchestration and sense-level pair generation."""

import configparser
import dataclasses
import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from .dense import EmbeddingStore, extend_labels, load_embeddings, match_all
from .labeling import HypernymLabel, label_synsets
from .lexicon import SenseInventory, SenseTaxonomy, load_isa, load_synsets
from .sparse_wsd import ZERO_FALLBACKS, DisambiguatedLabel, disambiguate_all

logger = logging.getLogger(__name__)

MODES = ("sparse", "full")


class ConfigError(ValueError):
    """Raised for invalid or inconsistent pipeline settings."""


@dataclass
class PipelineConfig:
    synsets: Optional[str] = None
    isa: Optional[str] = None
    embeddings: Optional[str] = None
    output: Optional[str] = None
    mode: str = "sparse"
    n: int = 3
    k: int = 1
    m: int = 15
    min_count: int = 1
    knn_postfilter: bool = False
    wsd_zero_fallback: Optional[str] = None
    min_coverage: float = 0.0
    binary_embeddings: bool = False
    seed: Optional[int] = None  # reserved, the pipeline is deterministic

    def validate(self, require_inputs: bool = True) -> "PipelineConfig":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("n", "k", "m", "min_count"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not 0.0 <= self.min_coverage <= 1.0:
            raise ConfigError(f"min_coverage must lie in [0, 1], got {self.min_coverage}")
        if self.wsd_zero_fallback not in ZERO_FALLBACKS:
            raise ConfigError(f"wsd_zero_fallback must be 'first' or unset, got {self.wsd_zero_fallback!r}")
        if require_inputs:
            for name in ("synsets", "isa"):
                if not getattr(self, name):
                    raise ConfigError(f"missing required path: {name}")
        if self.mode == "full" and not self.embeddings:
            raise ConfigError("full mode requires an embeddings path")
        return self

    def updated(self, **overrides) -> "PipelineConfig":
        """Copy with every non-``None`` override applied."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})


_CONVERTERS = {
    "n": int, "k": int, "m": int, "min_count": int, "seed": int,
    "min_coverage": float,
    "knn_postfilter": "bool", "binary_embeddings": "bool",
}
_FIELDS = {f.name for f in dataclasses.fields(PipelineConfig)}
_PATH_FIELDS = ("synsets", "isa", "embeddings", "output")


def _coerce(name, raw):
    if raw.lower() in ("", "none"):
        return None
    convert = _CONVERTERS.get(name, str)
    try:
        if convert == "bool":
            return configparser.ConfigParser.BOOLEAN_STATES[raw.lower()]
        return convert(raw)
    except (ValueError, KeyError):
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def load_config(path) -> PipelineConfig:
    """Read a ``key = value`` file whose keys mirror :class:`PipelineConfig`.

    Dashes in keys are accepted in place of underscores; ``#`` starts a
    comment line. Relative paths are resolved against the file's directory.
    """
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_string("[pipeline]\n" + f.read(), source=str(path))
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    except configparser.Error as e:
        raise ConfigError(f"bad config {path}: {e}") from None
    values = {}
    for key, raw in parser["pipeline"].items():
        name = key.replace("-", "_")
        if name not in _FIELDS:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        value = _coerce(name, raw.strip())
        if value is not None and name in _PATH_FIELDS:
            value = os.path.join(os.path.dirname(os.path.abspath(path)), value)
        if value is not None:
            values[name] = value
    return PipelineConfig(**values)


@dataclass
class RunSummary:
    timings: Dict[str, float] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)

    @contextmanager
    def stage(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = time.perf_counter() - start

    def format(self) -> str:
        width = max((len(k) for k in (*self.counts, *self.timings)), default=0)
        lines = [f"{k:<{width}}  {v}" for k, v in self.counts.items()]
        lines += [f"{k + ' (s)':<{width}}  {v:.3f}" for k, v in self.timings.items()]
        return "\n".join(lines)


def generate_pairs(inventory: SenseInventory, disambiguated: Mapping[str, DisambiguatedLabel]) -> SenseTaxonomy:
    """Cross every synset with its disambiguated hypernyms, minus self-edges."""
    edges = set()
    for synset in inventory:
        label = disambiguated.get(synset.synset_id)
        if label is None:
            continue
        for hyponym in synset.senses:
            for hypernym in label.hypernym_senses:
                if hyponym != hypernym:
                    edges.add((hyponym, hypernym))
    return SenseTaxonomy(edges)


def link(
    inventory: SenseInventory,
    labels: Mapping[str, HypernymLabel],
    mode: str = "sparse",
    k: int = 1,
    m: int = 15,
    store: Optional[EmbeddingStore] = None,
    knn_postfilter: bool = False,
    wsd_zero_fallback: Optional[str] = None,
    min_coverage: float = 0.0,
    summary: Optional[RunSummary] = None,
    trace: Optional[list] = None,
) -> Tuple[Dict[str, DisambiguatedLabel], Dict[str, DisambiguatedLabel]]:
    """Run disambiguation and, in full mode, dense matching.

    Returns the sparse labels and the final labels (the same object in
    sparse mode).
    """
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "full" and store is None:
        raise ConfigError("full mode requires word embeddings")
    summary = summary if summary is not None else RunSummary()
    with summary.stage("disambiguate"):
        sparse = disambiguate_all(labels, inventory, zero_fallback=wsd_zero_fallback, trace=trace)
    summary.counts["sparse_hypernym_senses"] = sum(len(d) for d in sparse.values())
    if mode == "sparse":
        return sparse, sparse
    with summary.stage("dense_match"):
        dense = match_all(inventory, labels, store, k, m, postfilter=knn_postfilter, min_coverage=min_coverage)
    summary.counts["synsets_embedded"] = dense.synsets_embedded
    summary.counts["synsets_not_embedded"] = len(inventory) - dense.synsets_embedded
    summary.counts["labels_embedded"] = dense.labels_embedded
    summary.counts["labels_matched"] = len(dense.matches)
    summary.counts["labels_unmatched"] = dense.unmatched
    summary.counts["labels_oversized_match"] = dense.oversized
    return sparse, extend_labels(sparse, dense.matches)


def run_pipeline(cfg: PipelineConfig) -> Tuple[SenseTaxonomy, RunSummary]:
    """Load inputs named by ``cfg`` and produce the sense-level relation."""
    cfg.validate()
    summary = RunSummary()
    with summary.stage("load"):
        inventory = load_synsets(cfg.synsets)
        relation = load_isa(cfg.isa, cfg.min_count)
        store = None
        if cfg.mode == "full":
            store = load_embeddings(cfg.embeddings, binary=cfg.binary_embeddings)
    summary.counts.update(
        synsets=len(inventory),
        senses=inventory.n_senses,
        isa_pairs=len(relation),
        isa_self_loops_dropped=relation.dropped_self_loops,
        isa_below_min_count=relation.dropped_below_min_count,
    )
    if store is not None:
        summary.counts["embedding_words"] = len(store)
    with summary.stage("label"):
        labels = label_synsets(inventory, relation, cfg.n)
    summary.counts["empty_labels"] = sum(1 for lab in labels.values() if not lab.counts)
    _, final = link(
        inventory, labels, cfg.mode, cfg.k, cfg.m, store,
        knn_postfilter=cfg.knn_postfilter,
        wsd_zero_fallback=cfg.wsd_zero_fallback,
        min_coverage=cfg.min_coverage,
        summary=summary,
    )
    with summary.stage("generate"):
        taxonomy = generate_pairs(inventory, final)
    summary.counts["output_pairs"] = len(taxonomy)
    return taxonomy, summary

