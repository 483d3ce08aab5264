"""Dense synset and label embeddings matched by exact cosine kNN.

Synset vectors are the plain mean of their word vectors; label vectors are
the tf-idf weighted mean of their top-n hypernym vectors. Both kinds live in
one index, and each label is matched to the nearest synset among its k
neighbours.
"""

import enum
import logging
import os
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .labeling import HypernymLabel
from .lexicon import InputError, SenseInventory, Synset
from .sparse_wsd import DisambiguatedLabel

logger = logging.getLogger(__name__)


class EmbeddingStore:
    """Word vectors of a fixed dimension backed by one matrix.

    ``get`` returns ``None`` for absent words; ``lookup`` additionally tries
    the underscore-joined form of multiword expressions.
    """

    def __init__(self, words: Sequence[str], vectors, lowercase: bool = False):
        vectors = np.asarray(vectors)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ValueError(f"expected a ({len(words)}, d) matrix, got shape {vectors.shape}")
        if vectors.shape[1] < 1:
            raise ValueError("dimension must be positive")
        self.vectors = vectors
        self.words = list(words)
        self.index: Dict[str, int] = {}
        for i, word in enumerate(self.words):
            key = word.lower() if lowercase else word
            # first occurrence wins: embedding files list frequent forms first
            self.index.setdefault(key, i)

    @classmethod
    def from_dict(cls, mapping: Mapping[str, Iterable[float]], dtype=np.float64) -> "EmbeddingStore":
        words = list(mapping)
        return cls(words, np.array([list(mapping[w]) for w in words], dtype=dtype))

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.index)

    def __contains__(self, word):
        return word in self.index

    def get(self, word: str) -> Optional[np.ndarray]:
        i = self.index.get(word)
        return None if i is None else self.vectors[i]

    def lookup(self, word: str) -> Optional[np.ndarray]:
        vec = self.get(word)
        if vec is None and " " in word:
            vec = self.get(word.replace(" ", "_"))
        return vec


def _parse_header(line: bytes, path):
    parts = line.split()
    try:
        n_words, dim = int(parts[0]), int(parts[1])
    except (ValueError, IndexError):
        raise InputError("header must be '<vocab_size> <dimension>'", path, 1) from None
    if len(parts) != 2 or n_words < 0 or dim < 1:
        raise InputError("header must be '<vocab_size> <dimension>'", path, 1)
    return n_words, dim


def _load_text(f, path, dtype, unicode_errors):
    n_words, dim = _parse_header(f.readline(), path)
    words = []
    vectors = np.empty((n_words, dim), dtype=dtype)
    lineno = 1
    for lineno, raw in enumerate(f, 2):
        if not raw.strip():
            continue
        parts = raw.rstrip(b"\r\n").rstrip(b" ").split(b" ")
        if len(parts) != dim + 1:
            raise InputError(f"expected {dim} values, got {len(parts) - 1}", path, lineno)
        word = parts[0].decode("utf-8", errors=unicode_errors)
        if len(words) == n_words:
            raise InputError(f"more rows than the {n_words} announced in the header", path, lineno)
        try:
            vectors[len(words)] = [float(x) for x in parts[1:]]
        except ValueError as e:
            raise InputError(f"bad vector value ({e})", path, lineno) from None
        words.append(word)
    if len(words) != n_words:
        raise InputError(f"header announces {n_words} rows, found {len(words)}", path, lineno)
    return words, vectors


def _load_binary(f, path, dtype, unicode_errors):
    n_words, dim = _parse_header(f.readline(), path)
    row_bytes = np.dtype("<f4").itemsize * dim
    words = []
    vectors = np.empty((n_words, dim), dtype=dtype)
    for i in range(n_words):
        chunks = []
        while True:
            ch = f.read(1)
            if ch == b"":
                raise InputError(f"truncated file at row {i + 1}", path)
            if ch == b" ":
                break
            if ch != b"\n":
                chunks.append(ch)
        raw = f.read(row_bytes)
        if len(raw) != row_bytes:
            raise InputError(f"truncated vector at row {i + 1}", path)
        words.append(b"".join(chunks).decode("utf-8", errors=unicode_errors))
        vectors[i] = np.frombuffer(raw, dtype="<f4")
    return words, vectors


def load_embeddings(
    path,
    binary: bool = False,
    lowercase: bool = True,
    dtype=np.float32,
    unicode_errors: str = "strict",
) -> EmbeddingStore:
    """Load word2vec-format vectors (text by default, binary on request).

    With ``lowercase`` keys are case-folded to match normalized synset words;
    when two rows fold to the same key the earlier row is kept.
    ``unicode_errors`` is passed to ``bytes.decode`` for tokens.
    """
    if not os.path.isfile(path):
        raise InputError("no such file", path)
    with open(path, "rb") as f:
        try:
            if binary:
                words, vectors = _load_binary(f, path, dtype, unicode_errors)
            else:
                words, vectors = _load_text(f, path, dtype, unicode_errors)
        except UnicodeDecodeError as e:
            raise InputError(f"token is not valid UTF-8 ({e.reason})", path) from None
    logger.info("loaded %d vectors of dimension %d from %s", len(words), vectors.shape[1], path)
    return EmbeddingStore(words, vectors, lowercase=lowercase)


class ItemKind(enum.Enum):
    SYNSET = "synset"
    LABEL = "label"


@dataclass(frozen=True)
class DenseItem:
    kind: ItemKind
    owner: str
    vector: np.ndarray = field(repr=False)
    coverage: float


def embed_synset(synset: Synset, store: EmbeddingStore, min_coverage: float = 0.0) -> Optional[DenseItem]:
    """Unweighted mean of the in-vocabulary word vectors of ``synset``."""
    # summation in sorted word order keeps the result independent of listing order
    found = [v for v in (store.lookup(w) for w in sorted(synset.words)) if v is not None]
    coverage = len(found) / len(synset)
    if not found or coverage < min_coverage:
        return None
    vector = np.sum(np.asarray(found, dtype=np.float64), axis=0) / len(found)
    return DenseItem(ItemKind.SYNSET, synset.synset_id, vector, coverage)


def embed_label(label: HypernymLabel, store: EmbeddingStore, min_coverage: float = 0.0) -> Optional[DenseItem]:
    """Tf-idf weighted mean of the top-n hypernym vectors of ``label``.

    Entries with zero weight or without a vector are skipped and the weights
    renormalized over the rest.
    """
    weighted = [(label.tfidf[h], h) for h in sorted(label.top_n) if label.tfidf.get(h, 0.0) > 0.0]
    if not weighted:
        return None
    found = [(w, v) for w, v in ((w, store.lookup(h)) for w, h in weighted) if v is not None]
    coverage = len(found) / len(weighted)
    if not found or coverage < min_coverage:
        return None
    total = sum(w for w, _ in found)
    # normalize weights first so a single entry reproduces its vector exactly
    weights = np.array([w / total for w, _ in found])
    vector = weights @ np.asarray([v for _, v in found], dtype=np.float64)
    return DenseItem(ItemKind.LABEL, label.synset_id, vector, coverage)


def _unit_rows(matrix):
    norms = np.linalg.norm(matrix, axis=-1, keepdims=True)
    return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


class VectorIndex:
    """Exact cosine kNN over a fixed list of :class:`DenseItem`.

    Results are ordered by decreasing similarity; equal similarities keep
    insertion order.
    """

    def __init__(self, items: Sequence[DenseItem]):
        self.items: Tuple[DenseItem, ...] = tuple(items)
        dims = {it.vector.shape for it in self.items}
        if len(dims) > 1:
            raise ValueError(f"items have mismatched shapes: {sorted(dims)}")
        if self.items:
            matrix = np.vstack([it.vector for it in self.items]).astype(np.float64)
        else:
            matrix = np.zeros((0, 0))
        if not np.all(np.isfinite(matrix)):
            raise ValueError("item vectors must be finite")
        self._unit = _unit_rows(matrix)
        self._unit.setflags(write=False)
        self.is_label = np.array([it.kind is ItemKind.LABEL for it in self.items], dtype=bool)
        self.positions: Dict[Tuple[ItemKind, str], int] = {
            (it.kind, it.owner): i for i, it in enumerate(self.items)
        }

    def __len__(self):
        return len(self.items)

    @property
    def dimension(self) -> int:
        return self._unit.shape[1]

    def similarities(self, vector) -> np.ndarray:
        query = _unit_rows(np.asarray(vector, dtype=np.float64))
        return self._unit @ query

    def query(self, vector, k: int, mask: Optional[np.ndarray] = None) -> List[Tuple[int, float]]:
        """Top-``k`` ``(position, similarity)`` pairs.

        ``mask`` marks positions that may not be returned at all.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        sims = self.similarities(vector)
        allowed = np.arange(len(sims))
        if mask is not None:
            allowed = allowed[~mask]
        return _top_k(sims, allowed, k)


def _top_k(sims, allowed, k):
    if len(allowed) == 0:
        return []
    values = sims[allowed]
    if len(values) > k:
        # include every position tied with the k-th value, then order stably
        kth = np.partition(values, len(values) - k)[len(values) - k]
        keep = values >= kth
        allowed, values = allowed[keep], values[keep]
    order = np.lexsort((allowed, -values))[:k]
    return [(int(allowed[i]), float(values[i])) for i in order]


def build_index(synset_items: Iterable[DenseItem], label_items: Iterable[DenseItem]) -> VectorIndex:
    synset_items, label_items = list(synset_items), list(label_items)
    for it in synset_items:
        if it.kind is not ItemKind.SYNSET:
            raise ValueError(f"expected a synset item, got {it.kind} for {it.owner!r}")
    for it in label_items:
        if it.kind is not ItemKind.LABEL:
            raise ValueError(f"expected a label item, got {it.kind} for {it.owner!r}")
    return VectorIndex(synset_items + label_items)


def _select(synset, index, inventory, k, m, postfilter):
    """Return ``(match, status)`` with status matched/oversized/unmatched/unlabelled."""
    pos = index.positions.get((ItemKind.LABEL, synset.synset_id))
    if pos is None:
        return None, "unlabelled"
    own = index.positions.get((ItemKind.SYNSET, synset.synset_id))
    query = index.items[pos].vector
    # the label being matched is the query point itself, never its own neighbour
    if postfilter:
        mask = index.is_label.copy()
        if own is not None:
            mask[own] = True
        hits = index.query(query, k, mask=mask)
    else:
        mask = np.zeros(len(index), dtype=bool)
        mask[pos] = True
        hits = [(i, s) for i, s in index.query(query, k, mask=mask) if not index.is_label[i] and i != own]
    if not hits:
        return None, "unmatched"
    best = inventory[index.items[hits[0][0]].owner]
    if len(best) > m:
        return None, "oversized"
    return best, "matched"


def match_label(
    synset: Synset,
    index: VectorIndex,
    inventory: SenseInventory,
    k: int,
    m: int,
    postfilter: bool = False,
) -> Optional[Synset]:
    """Nearest admissible synset to the label vector of ``synset``.

    The label's own vector is the query and is never counted. By default
    the ``k`` nearest other items are retrieved first and label items and
    ``synset`` itself are discarded afterwards, so they use up slots.
    With ``postfilter`` the ``k`` nearest admissible synsets are retrieved
    instead. The best survivor is returned only if it has at most ``m``
    words; a larger one means no match rather than falling back to the next.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return _select(synset, index, inventory, k, m, postfilter)[0]


def extend_labels(
    disambiguated: Mapping[str, DisambiguatedLabel],
    matches: Mapping[str, Synset],
) -> Dict[str, DisambiguatedLabel]:
    """Union the senses of each matched synset into its source's label."""
    result = dict(disambiguated)
    for sid, matched in matches.items():
        current = result.get(sid, DisambiguatedLabel(sid))
        result[sid] = replace(current, hypernym_senses=current.hypernym_senses | frozenset(matched.senses))
    return result


@dataclass
class DenseMatchResult:
    index: VectorIndex
    matches: Dict[str, Synset]
    synsets_embedded: int
    labels_embedded: int
    oversized: int
    unmatched: int


def match_all(
    inventory: SenseInventory,
    labels: Mapping[str, HypernymLabel],
    store: EmbeddingStore,
    k: int,
    m: int,
    postfilter: bool = False,
    min_coverage: float = 0.0,
) -> DenseMatchResult:
    """Embed all synsets and labels, build the index and match every label."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    synset_items = [it for it in (embed_synset(s, store, min_coverage) for s in inventory) if it]
    label_items = []
    for sid in inventory.ids:
        item = embed_label(labels[sid], store, min_coverage) if sid in labels else None
        if item is not None:
            label_items.append(item)
    index = build_index(synset_items, label_items)
    matches: Dict[str, Synset] = {}
    status_counts = {"oversized": 0, "unmatched": 0}
    for item in label_items:
        best, status = _select(inventory[item.owner], index, inventory, k, m, postfilter)
        if best is not None:
            matches[item.owner] = best
        else:
            status_counts[status] += 1
    return DenseMatchResult(
        index, matches, len(synset_items), len(label_items),
        status_counts["oversized"], status_counts["unmatched"],
    )
