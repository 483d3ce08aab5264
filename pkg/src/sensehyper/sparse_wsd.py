"""Hypernym sense disambiguation over sparse bag-of-words vectors.

For every top-ranked hypernym word of a synset label, pick the synset that
contains the word and whose word set is most cosine-similar to the label.
The word's sense inside that synset becomes the disambiguated hypernym.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .labeling import HypernymLabel
from .lexicon import Sense, SenseInventory, Synset, open_output

SparseVector = Dict[str, float]

ZERO_FALLBACKS = (None, "first")


@dataclass(frozen=True)
class DisambiguatedLabel:
    synset_id: str
    hypernym_senses: FrozenSet[Sense] = field(default_factory=frozenset)

    def __len__(self):
        return len(self.hypernym_senses)


@dataclass(frozen=True)
class WSDTrace:
    """One disambiguation decision, kept for debug dumps."""

    synset_id: str
    hypernym: str
    sense: Optional[Sense]
    similarity: float


def label_vector(label: HypernymLabel) -> SparseVector:
    return {h: label.tfidf[h] for h in label.top_n if label.tfidf.get(h, 0.0) > 0.0}


def synset_vector(synset: Synset) -> SparseVector:
    return {w: 1.0 for w in synset.words}


def cosine(u: Mapping[str, float], v: Mapping[str, float]) -> float:
    """Cosine similarity of two sparse vectors; 0 if either is all-zero."""
    if len(u) > len(v):
        u, v = v, u
    dot = sum(x * v[k] for k, x in u.items() if k in v)
    if dot == 0.0:
        return 0.0
    norm = math.sqrt(sum(x * x for x in u.values())) * math.sqrt(sum(x * x for x in v.values()))
    return dot / norm


def _check_fallback(zero_fallback):
    if zero_fallback not in ZERO_FALLBACKS:
        raise ValueError(f"zero_fallback must be one of {ZERO_FALLBACKS}, got {zero_fallback!r}")


def _similarity(vector, norm, synset):
    # binary synset vector; summing the overlap in sorted order makes equal overlaps tie exactly
    dot = sum(vector[w] for w in sorted(synset.words) if w in vector)
    return 0.0 if dot == 0.0 else dot / (norm * math.sqrt(len(synset)))


def _choose(hypernym, vector, source, inventory, zero_fallback) -> Tuple[Optional[Sense], float]:
    candidates = [s for s in inventory.synsets_with_word(hypernym) if s.synset_id != source.synset_id]
    if not candidates:
        return None, 0.0
    norm = math.sqrt(sum(x * x for x in vector.values()))
    scored = [(_similarity(vector, norm, s) if norm else 0.0, s) for s in candidates]
    sim, best = min(scored, key=lambda p: (-p[0], -len(p[1]), p[1].synset_id))
    if sim > 0.0:
        return best.sense_of(hypernym), sim
    if zero_fallback == "first":
        return min(s.sense_of(hypernym) for s in candidates), 0.0
    return None, 0.0


def disambiguate_hypernym(
    hypernym: str,
    label: HypernymLabel,
    source: Synset,
    inventory: SenseInventory,
    zero_fallback: Optional[str] = None,
) -> Optional[Sense]:
    """Return the sense of ``hypernym`` in the synset closest to ``label``.

    Candidates are the synsets other than ``source`` that contain the word.
    Ties go to the larger synset, then to the smaller synset id. When the
    best similarity is 0 nothing is returned unless ``zero_fallback`` is
    ``"first"``, in which case the lowest-numbered candidate sense is used.
    """
    _check_fallback(zero_fallback)
    sense, _ = _choose(hypernym, label_vector(label), source, inventory, zero_fallback)
    return sense


def disambiguate_all(
    labels: Mapping[str, HypernymLabel],
    inventory: SenseInventory,
    zero_fallback: Optional[str] = None,
    trace: Optional[List[WSDTrace]] = None,
) -> Dict[str, DisambiguatedLabel]:
    """Disambiguate the top-n words of every label.

    If ``trace`` is a list, one :class:`WSDTrace` per attempted hypernym is
    appended to it.
    """
    _check_fallback(zero_fallback)
    result = {}
    for synset in inventory:
        sid = synset.synset_id
        label = labels.get(sid)
        senses = set()
        if label is not None and label.top_n:
            vector = label_vector(label)
            for hypernym in label.top_n:
                sense, sim = _choose(hypernym, vector, synset, inventory, zero_fallback)
                if trace is not None:
                    trace.append(WSDTrace(sid, hypernym, sense, sim))
                if sense is not None:
                    senses.add(sense)
        result[sid] = DisambiguatedLabel(sid, frozenset(senses))
    return result


def dump_trace(trace: List[WSDTrace], path_or_file) -> None:
    with open_output(path_or_file) as f:
        for t in trace:
            chosen = "" if t.sense is None else str(t.sense)
            f.write(f"{t.synset_id}\t{t.hypernym}\t{chosen}\t{t.similarity!r}\n")
