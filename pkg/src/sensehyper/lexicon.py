"""Domain types and readers for synsets, is-a pairs and sense-level taxonomies.

Three tab-separated formats are understood:

* synsets: ``synset_id<TAB>size<TAB>word1, word2, ...`` (the size column is
  optional; words may carry explicit ``#id`` sense suffixes)
* is-a pairs: ``hyponym<TAB>hypernym[<TAB>count]``, ``#`` starts a comment
* sense pairs: ``word#id<TAB>word#id``
"""

import logging
import os
import re
from contextlib import contextmanager
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

logger = logging.getLogger(__name__)

_WHITESPACE = re.compile(r"\s+")
_SENSE_SUFFIX = re.compile(r"^(.*\S)#(\d+)$")


class InputError(ValueError):
    """Raised when an input file is missing or malformed."""

    def __init__(self, message, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}:{lineno}: " if lineno is not None else f"{path}: "
        super().__init__(where + message)


def normalize_word(text: str) -> str:
    """Lowercase, trim and collapse internal whitespace.

    >>> normalize_word("  Red   Fruit ")
    'red fruit'
    """
    word = _WHITESPACE.sub(" ", text.strip()).lower()
    if not word:
        raise ValueError(f"empty word: {text!r}")
    return word


@dataclass(frozen=True, order=True)
class Sense:
    word: str
    sense_id: int

    def __post_init__(self):
        if self.sense_id < 0:
            raise ValueError(f"negative sense id for {self.word!r}")

    def __str__(self):
        return f"{self.word}#{self.sense_id}"

    @classmethod
    def parse(cls, token: str) -> "Sense":
        """Parse ``word#id``; raises ``ValueError`` when the suffix is missing."""
        match = _SENSE_SUFFIX.match(token.strip())
        if match is None:
            raise ValueError(f"expected word#id, got {token!r}")
        return cls(normalize_word(match.group(1)), int(match.group(2)))


@dataclass(frozen=True)
class Synset:
    synset_id: str
    senses: Tuple[Sense, ...]

    def __post_init__(self):
        if not self.senses:
            raise ValueError(f"synset {self.synset_id!r} is empty")
        words = [s.word for s in self.senses]
        if len(set(words)) != len(words):
            dup = next(w for w, c in Counter(words).items() if c > 1)
            raise ValueError(f"synset {self.synset_id!r} lists {dup!r} twice")

    @property
    def words(self) -> Tuple[str, ...]:
        return tuple(s.word for s in self.senses)

    def sense_of(self, word: str) -> Optional[Sense]:
        for sense in self.senses:
            if sense.word == word:
                return sense
        return None

    def __len__(self):
        return len(self.senses)

    def __iter__(self) -> Iterator[Sense]:
        return iter(self.senses)


class SenseInventory:
    """An ordered collection of synsets with word and sense lookups.

    Every sense belongs to exactly one synset.
    """

    def __init__(self, synsets: Iterable[Synset]):
        self._synsets: Dict[str, Synset] = {}
        self._synset_of_sense: Dict[Sense, str] = {}
        self._by_word: Dict[str, List[str]] = defaultdict(list)
        for synset in synsets:
            if synset.synset_id in self._synsets:
                raise ValueError(f"duplicate synset id {synset.synset_id!r}")
            for sense in synset.senses:
                owner = self._synset_of_sense.get(sense)
                if owner is not None:
                    raise ValueError(
                        f"sense {sense} appears in synsets {owner!r} and {synset.synset_id!r}"
                    )
                self._synset_of_sense[sense] = synset.synset_id
                self._by_word[sense.word].append(synset.synset_id)
            self._synsets[synset.synset_id] = synset
        self._by_word = dict(self._by_word)

    def __len__(self):
        return len(self._synsets)

    def __iter__(self) -> Iterator[Synset]:
        return iter(self._synsets.values())

    def __contains__(self, synset_id):
        return synset_id in self._synsets

    def __getitem__(self, synset_id: str) -> Synset:
        return self._synsets[synset_id]

    def __eq__(self, other):
        if not isinstance(other, SenseInventory):
            return NotImplemented
        return list(self) == list(other)

    def __repr__(self):
        return f"SenseInventory({len(self)} synsets, {self.n_senses} senses)"

    @property
    def ids(self) -> List[str]:
        return list(self._synsets)

    @property
    def n_senses(self) -> int:
        return len(self._synset_of_sense)

    @property
    def vocabulary(self) -> FrozenSet[str]:
        return frozenset(self._by_word)

    def senses_of(self, word: str) -> FrozenSet[Sense]:
        return frozenset(
            self._synsets[sid].sense_of(word) for sid in self._by_word.get(word, ())
        )

    def synsets_with_word(self, word: str) -> List[Synset]:
        """Synsets listing some sense of ``word``, in inventory order."""
        return [self._synsets[sid] for sid in self._by_word.get(word, ())]

    def synset_of(self, sense: Sense) -> Optional[Synset]:
        sid = self._synset_of_sense.get(sense)
        return None if sid is None else self._synsets[sid]


@dataclass
class IsARelation:
    """Word-level is-a pairs with occurrence counts.

    ``dropped_self_loops`` counts input pairs discarded because the hyponym
    and hypernym normalize to the same word.
    """

    counts: Dict[Tuple[str, str], int] = field(default_factory=dict)
    dropped_self_loops: int = 0
    dropped_below_min_count: int = 0

    def __post_init__(self):
        by_hyponym = defaultdict(list)
        for (hypo, hyper), count in self.counts.items():
            if count < 1:
                raise ValueError(f"non-positive count for ({hypo!r}, {hyper!r})")
            if hypo == hyper:
                raise ValueError(f"self-loop pair ({hypo!r}, {hyper!r})")
            by_hyponym[hypo].append((hyper, count))
        self._by_hyponym = dict(by_hyponym)

    @classmethod
    def from_pairs(cls, pairs: Iterable, min_count: int = 1) -> "IsARelation":
        """Build from ``(hyponym, hypernym)`` or ``(hyponym, hypernym, count)`` tuples."""
        counts: Counter = Counter()
        self_loops = 0
        for pair in pairs:
            hypo, hyper = normalize_word(pair[0]), normalize_word(pair[1])
            count = int(pair[2]) if len(pair) > 2 else 1
            if count < 1:
                raise ValueError(f"non-positive count for ({hypo!r}, {hyper!r})")
            if hypo == hyper:
                self_loops += 1
                continue
            counts[hypo, hyper] += count
        return cls._thresholded(counts, min_count, self_loops)

    @classmethod
    def _thresholded(cls, counts, min_count, self_loops):
        kept = {pair: c for pair, c in counts.items() if c >= min_count}
        return cls(kept, self_loops, len(counts) - len(kept))

    def __len__(self):
        return len(self.counts)

    def __contains__(self, pair):
        return tuple(pair) in self.counts

    def __iter__(self):
        return iter(self.counts)

    @property
    def total_count(self) -> int:
        return sum(self.counts.values())

    def hypernyms_of(self, word: str) -> List[Tuple[str, int]]:
        return self._by_hyponym.get(word, [])


SenseEdge = Tuple[Sense, Sense]


class SenseTaxonomy:
    """A directed graph over senses with set semantics on edges."""

    def __init__(self, edges: Iterable[SenseEdge] = (), nodes: Iterable[Sense] = ()):
        self.edges: FrozenSet[SenseEdge] = frozenset(edges)
        self.nodes: FrozenSet[Sense] = frozenset(nodes).union(
            *({u, v} for u, v in self.edges)
        )

    def __len__(self):
        return len(self.edges)

    def __iter__(self) -> Iterator[SenseEdge]:
        return iter(self.sorted_edges())

    def __eq__(self, other):
        if not isinstance(other, SenseTaxonomy):
            return NotImplemented
        return self.edges == other.edges and self.nodes == other.nodes

    def __repr__(self):
        return f"SenseTaxonomy({len(self.nodes)} nodes, {len(self.edges)} edges)"

    def sorted_edges(self) -> List[SenseEdge]:
        return sorted(self.edges)

    @property
    def words(self) -> FrozenSet[str]:
        return frozenset(s.word for s in self.nodes)

    def word_pairs(self) -> FrozenSet[Tuple[str, str]]:
        return frozenset((u.word, v.word) for u, v in self.edges)


def iter_lines(path):
    if not os.path.isfile(path):
        raise InputError("no such file", path)
    with open(path, encoding="utf-8") as f:
        try:
            for lineno, line in enumerate(f, 1):
                yield lineno, line.rstrip("\r\n")
        except UnicodeDecodeError as e:
            raise InputError(f"not valid UTF-8 ({e.reason})", path) from e


def _parse_synset_words(tokens: List[str], explicit: bool, next_id, path, lineno):
    senses = []
    seen = set()
    for token in tokens:
        if explicit:
            try:
                sense = Sense.parse(token)
            except ValueError as e:
                raise InputError(str(e), path, lineno) from None
        else:
            word = normalize_word(token)
            if word in seen:
                logger.warning("%s:%d: repeated word %r dropped", path, lineno, word)
                continue
            sense = Sense(word, next_id(word))
        seen.add(sense.word)
        senses.append(sense)
    return senses


def load_synsets(path) -> SenseInventory:
    """Read a synset TSV file into a :class:`SenseInventory`.

    Without explicit ``word#id`` tokens, sense ids are numbered from 1 in
    first-seen order per word. Mixing explicit and implicit ids in one file
    is rejected.
    """
    counters: Counter = Counter()

    def next_id(word):
        counters[word] += 1
        return counters[word]

    synsets = []
    seen_ids = set()
    explicit_mode = None
    for lineno, line in iter_lines(path):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) == 3:
            sid, size_field, words_field = fields
            try:
                size = int(size_field)
            except ValueError:
                raise InputError(f"size column is not an integer: {size_field!r}", path, lineno) from None
        elif len(fields) == 2:
            sid, words_field = fields
            size = None
        else:
            raise InputError(f"expected 2 or 3 tab-separated fields, got {len(fields)}", path, lineno)
        sid = sid.strip()
        if not sid:
            raise InputError("empty synset id", path, lineno)
        if sid in seen_ids:
            raise InputError(f"duplicate synset id {sid!r}", path, lineno)
        seen_ids.add(sid)

        tokens = [t for t in (t.strip() for t in words_field.split(",")) if t]
        if not tokens:
            raise InputError(f"synset {sid!r} has no words", path, lineno)
        if size is not None and size != len(tokens):
            raise InputError(f"size column says {size}, found {len(tokens)} words", path, lineno)
        has_ids = [bool(_SENSE_SUFFIX.match(t)) for t in tokens]
        line_explicit = all(has_ids)
        if any(has_ids) and not line_explicit:
            raise InputError("some words carry #id suffixes and some do not", path, lineno)
        if explicit_mode is None:
            explicit_mode = line_explicit
        elif explicit_mode != line_explicit:
            raise InputError("file mixes explicit and implicit sense ids", path, lineno)

        senses = _parse_synset_words(tokens, explicit_mode, next_id, path, lineno)
        try:
            synsets.append(Synset(sid, tuple(senses)))
        except ValueError as e:
            raise InputError(str(e), path, lineno) from None
    try:
        return SenseInventory(synsets)
    except ValueError as e:
        raise InputError(str(e), path) from None


def dump_synsets(inventory: SenseInventory, path_or_file) -> None:
    """Write ``inventory`` with explicit sense ids (parses back to an equal inventory)."""
    with open_output(path_or_file) as f:
        for synset in inventory:
            words = ", ".join(str(s) for s in synset.senses)
            f.write(f"{synset.synset_id}\t{len(synset)}\t{words}\n")


def load_isa(path, min_count: int = 1) -> IsARelation:
    """Read an is-a TSV file; repeated pairs sum their counts before thresholding."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter = Counter()
    self_loops = 0
    for lineno, line in iter_lines(path):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise InputError(f"expected 2 or 3 tab-separated fields, got {len(fields)}", path, lineno)
        count = 1
        if len(fields) == 3:
            try:
                count = int(fields[2])
            except ValueError:
                raise InputError(f"count is not an integer: {fields[2]!r}", path, lineno) from None
            if count < 1:
                raise InputError(f"count must be positive, got {count}", path, lineno)
        try:
            hypo, hyper = normalize_word(fields[0]), normalize_word(fields[1])
        except ValueError as e:
            raise InputError(str(e), path, lineno) from None
        if hypo == hyper:
            self_loops += 1
            continue
        counts[hypo, hyper] += count
    if self_loops:
        logger.warning("%s: dropped %d self-loop pairs", path, self_loops)
    return IsARelation._thresholded(counts, min_count, self_loops)


def load_gold(path) -> SenseTaxonomy:
    """Read ``word#id<TAB>word#id`` lines into a :class:`SenseTaxonomy`."""
    edges = []
    for lineno, line in iter_lines(path):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise InputError(f"expected 2 tab-separated fields, got {len(fields)}", path, lineno)
        try:
            edges.append((Sense.parse(fields[0]), Sense.parse(fields[1])))
        except ValueError as e:
            raise InputError(str(e), path, lineno) from None
    return SenseTaxonomy(edges)


@contextmanager
def open_output(path_or_file):
    """Yield a text stream for a path, or pass an open stream through."""
    if hasattr(path_or_file, "write"):
        yield path_or_file
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as f:
            yield f


def write_taxonomy(taxonomy: SenseTaxonomy, path_or_file) -> int:
    """Write edges sorted by hyponym then hypernym; returns the edge count."""
    with open_output(path_or_file) as f:
        for u, v in taxonomy.sorted_edges():
            f.write(f"{u}\t{v}\n")
    return len(taxonomy)

