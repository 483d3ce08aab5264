"""Hypernymy between word senses, built from word-level is-a pairs.

Noisy word-level is-a pairs are propagated to synsets, weighted with tf-idf,
disambiguated against the sense inventory and optionally extended by
matching label and synset embeddings. The result is a relation between word
senses that can be scored against a gold taxonomy.
"""

__version__ = "0.1.0"

from .dense import (
    DenseItem,
    EmbeddingStore,
    ItemKind,
    VectorIndex,
    build_index,
    embed_label,
    embed_synset,
    extend_labels,
    load_embeddings,
    match_all,
    match_label,
)
from .estimator import HypernymLabeler, SenseAwareHypernymExtractor
from .evaluation import EvalReport, WordReachability, evaluate, restrict_vocabulary, word_reachable
from .labeling import HypernymLabel, build_labels, compute_tfidf, truncate_top_n
from .lexicon import (
    InputError,
    IsARelation,
    Sense,
    SenseInventory,
    SenseTaxonomy,
    Synset,
    load_gold,
    load_isa,
    load_synsets,
    normalize_word,
    write_taxonomy,
)
from .linker import ConfigError, PipelineConfig, RunSummary, generate_pairs, run_pipeline
from .sparse_wsd import (
    DisambiguatedLabel,
    disambiguate_all,
    disambiguate_hypernym,
    label_vector,
    synset_vector,
)

__all__ = [
    "ConfigError",
    "DenseItem",
    "DisambiguatedLabel",
    "EmbeddingStore",
    "EvalReport",
    "HypernymLabel",
    "HypernymLabeler",
    "InputError",
    "IsARelation",
    "ItemKind",
    "PipelineConfig",
    "RunSummary",
    "Sense",
    "SenseAwareHypernymExtractor",
    "SenseInventory",
    "SenseTaxonomy",
    "Synset",
    "VectorIndex",
    "WordReachability",
    "build_index",
    "build_labels",
    "compute_tfidf",
    "disambiguate_all",
    "disambiguate_hypernym",
    "embed_label",
    "embed_synset",
    "evaluate",
    "extend_labels",
    "generate_pairs",
    "label_vector",
    "load_embeddings",
    "load_gold",
    "load_isa",
    "load_synsets",
    "match_all",
    "match_label",
    "normalize_word",
    "restrict_vocabulary",
    "run_pipeline",
    "synset_vector",
    "truncate_top_n",
    "word_reachable",
    "write_taxonomy",
]
