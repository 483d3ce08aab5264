"""Per-synset hypernym labels weighted with tf-idf.

Synsets play the role of documents and candidate hypernym words the role of
terms. A label is a bag: every occurrence count of an is-a pair whose hyponym
is a word of the synset adds to the bag.
"""

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, Tuple

from .lexicon import InputError, IsARelation, SenseInventory, iter_lines, normalize_word, open_output


@dataclass(frozen=True)
class HypernymLabel:
    synset_id: str
    counts: Dict[str, int] = field(default_factory=dict)
    tfidf: Dict[str, float] = field(default_factory=dict)
    top_n: Tuple[str, ...] = ()

    def __len__(self):
        return len(self.counts)

    @property
    def size(self) -> int:
        """Bag cardinality: the total of all occurrence counts."""
        return sum(self.counts.values())

    def ranked(self):
        """All hypernyms ordered by tf-idf desc, raw count desc, word asc."""
        return sorted(self.counts, key=lambda h: (-self.tfidf.get(h, 0.0), -self.counts[h], h))


def build_labels(inventory: SenseInventory, relation: IsARelation) -> Dict[str, HypernymLabel]:
    labels = {}
    for synset in inventory:
        bag: Counter = Counter()
        for word in synset.words:
            for hypernym, count in relation.hypernyms_of(word):
                bag[hypernym] += count
        labels[synset.synset_id] = HypernymLabel(synset.synset_id, dict(bag))
    return labels


def document_frequencies(labels: Dict[str, HypernymLabel]) -> Counter:
    df: Counter = Counter()
    for label in labels.values():
        df.update(label.counts.keys())
    return df


def compute_tfidf(labels: Dict[str, HypernymLabel]) -> Dict[str, HypernymLabel]:
    """Fill in tf-idf weights for every label.

    ``tf`` divides the occurrence count of a hypernym by the bag size;
    ``idf`` is ``ln(N / df)`` where ``N`` counts all synsets, labelled or
    not, and ``df`` counts labels containing the hypernym. Document
    frequencies are taken over the untruncated labels.
    """
    n_docs = len(labels)
    df = document_frequencies(labels)
    idf = {h: math.log(n_docs / d) for h, d in df.items()}
    result = {}
    for sid, label in labels.items():
        total = label.size
        weights = {h: (c / total) * idf[h] for h, c in label.counts.items()}
        result[sid] = replace(label, tfidf=weights, top_n=())
    return result


def truncate_top_n(label: HypernymLabel, n: int) -> HypernymLabel:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return replace(label, top_n=tuple(label.ranked()[:n]))


def label_synsets(inventory: SenseInventory, relation: IsARelation, n: int) -> Dict[str, HypernymLabel]:
    """Build, weight and truncate labels in one go."""
    weighted = compute_tfidf(build_labels(inventory, relation))
    return {sid: truncate_top_n(label, n) for sid, label in weighted.items()}


def dump_labels(labels: Dict[str, HypernymLabel], path_or_file) -> int:
    """Write ``synset_id, hypernym, raw_count, tfidf`` rows; returns the row count."""
    rows = 0
    with open_output(path_or_file) as f:
        for sid, label in labels.items():
            for h in label.ranked():
                f.write(f"{sid}\t{h}\t{label.counts[h]}\t{label.tfidf.get(h, 0.0)!r}\n")
                rows += 1
    return rows


def load_labels(path, inventory: SenseInventory, n: int) -> Dict[str, HypernymLabel]:
    """Read a label dump back and re-truncate it to ``n`` entries.

    Synsets of ``inventory`` absent from the dump get empty labels; rows for
    unknown synsets are an error.
    """
    counts: Dict[str, Dict[str, int]] = {sid: {} for sid in inventory.ids}
    weights: Dict[str, Dict[str, float]] = {sid: {} for sid in inventory.ids}
    for lineno, line in iter_lines(path):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise InputError(f"expected 4 tab-separated fields, got {len(fields)}", path, lineno)
        sid, hypernym = fields[0], normalize_word(fields[1])
        if sid not in counts:
            raise InputError(f"unknown synset id {sid!r}", path, lineno)
        try:
            counts[sid][hypernym] = int(fields[2])
            weights[sid][hypernym] = float(fields[3])
        except ValueError as e:
            raise InputError(str(e), path, lineno) from None
    return {
        sid: truncate_top_n(HypernymLabel(sid, counts[sid], weights[sid]), n)
        for sid in inventory.ids
    }
