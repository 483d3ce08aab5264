"""Path-existence precision/recall of a predicted taxonomy against a gold one.

Sense labels are stripped before comparison. A predicted word pair counts as
correct when some sense of the hyponym reaches some sense of the hypernym in
the gold graph. Paths are followed between senses, so ``a#1 -> b#1`` and
``b#2 -> c#1`` do not connect ``a`` to ``c``.
"""

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Set, Tuple

from .lexicon import SenseTaxonomy


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    evaluated_pairs: int
    skipped_oov_pairs: int
    skipped_oov_gold_pairs: int = 0
    precision_undefined: bool = False
    recall_undefined: bool = False

    def as_text(self) -> str:
        rows = [
            ("tp", self.tp), ("fp", self.fp), ("fn", self.fn),
            ("precision", f"{self.precision:.4f}"),
            ("recall", f"{self.recall:.4f}"),
            ("f1", f"{self.f1:.4f}"),
            ("evaluated_pairs", self.evaluated_pairs),
            ("skipped_oov_pairs", self.skipped_oov_pairs),
            ("skipped_oov_gold_pairs", self.skipped_oov_gold_pairs),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value:>10}" for name, value in rows)

    def as_key_values(self) -> str:
        return (
            f"tp={self.tp} fp={self.fp} fn={self.fn} "
            f"precision={self.precision!r} recall={self.recall!r} f1={self.f1!r}"
        )


def _word(node):
    return getattr(node, "word", node)


class WordReachability:
    """Memoized directed reachability between the words of a sense graph.

    Nodes are senses (or plain strings, which act as single-sense words).
    A query from word ``w`` runs one breadth-first search seeded with every
    sense of ``w`` and records the words of all senses it reaches.
    ``max_path_length`` caps the number of edges on a path; ``None`` means
    unbounded. A word always reaches itself when it occurs in the graph.
    """

    def __init__(self, edges: Iterable[Tuple[Hashable, Hashable]], max_path_length: Optional[int] = None, nodes=()):
        if max_path_length is not None and max_path_length < 0:
            raise ValueError(f"max_path_length must be >= 0, got {max_path_length}")
        self.max_path_length = max_path_length
        self.successors: Dict[Hashable, Set[Hashable]] = defaultdict(set)
        for u, v in edges:
            self.successors[u].add(v)
            self.successors.setdefault(v, set())
        for node in nodes:
            self.successors.setdefault(node, set())
        self.successors = dict(self.successors)
        self.senses: Dict[str, List[Hashable]] = defaultdict(list)
        for node in self.successors:
            self.senses[_word(node)].append(node)
        self.senses = dict(self.senses)
        self._memo: Dict[str, FrozenSet[str]] = {}

    @classmethod
    def from_taxonomy(cls, taxonomy: SenseTaxonomy, max_path_length: Optional[int] = None):
        return cls(taxonomy.edges, max_path_length, nodes=taxonomy.nodes)

    def __contains__(self, word):
        return word in self.senses

    def reachable_from(self, word: str) -> FrozenSet[str]:
        found = self._memo.get(word)
        if found is not None:
            return found
        starts = self.senses.get(word, ())
        seen = set(starts)
        frontier = deque((node, 0) for node in starts)
        limit = self.max_path_length
        while frontier:
            node, depth = frontier.popleft()
            if limit is not None and depth >= limit:
                continue
            for nxt in self.successors[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append((nxt, depth + 1))
        found = frozenset(_word(node) for node in seen)
        self._memo[word] = found
        return found

    def reachable(self, source: str, target: str) -> bool:
        return target in self.reachable_from(source)


def word_reachable(g: SenseTaxonomy, w: str, h: str) -> bool:
    """True iff some sense of ``w`` has a directed path to some sense of ``h`` in ``g``."""
    return WordReachability.from_taxonomy(g).reachable(w, h)


def restrict_vocabulary(
    h: SenseTaxonomy, g: SenseTaxonomy
) -> Tuple[SenseTaxonomy, SenseTaxonomy, int, int]:
    """Keep only edges whose endpoint words occur in both graphs.

    Returns the two restricted graphs and the numbers of predicted and gold
    edges removed.
    """
    shared = h.words & g.words

    def keep(taxonomy):
        return SenseTaxonomy(
            (u, v) for u, v in taxonomy.edges if u.word in shared and v.word in shared
        )

    h_kept, g_kept = keep(h), keep(g)
    return h_kept, g_kept, len(h) - len(h_kept), len(g) - len(g_kept)


def _ratio(num, den):
    return (num / den, False) if den > 0 else (0.0, True)


def evaluate(h: SenseTaxonomy, g: SenseTaxonomy, max_path_length: Optional[int] = None) -> EvalReport:
    """Score predicted taxonomy ``h`` against gold taxonomy ``g``.

    Vocabulary restriction decides which word pairs are counted; paths are
    searched in the unrestricted graphs so that intermediate words missing
    from the other side do not break a chain. TP and FP split predicted
    pairs by whether a gold path exists; FN counts gold pairs with no path
    in the prediction.
    """
    h_kept, g_kept, _, _ = restrict_vocabulary(h, g)
    predicted = h_kept.word_pairs()
    gold = g_kept.word_pairs()
    skipped_h = len(h.word_pairs()) - len(predicted)
    skipped_g = len(g.word_pairs()) - len(gold)
    in_gold = WordReachability.from_taxonomy(g, max_path_length)
    in_pred = WordReachability.from_taxonomy(h, max_path_length)
    tp = sum(1 for u, v in predicted if in_gold.reachable(u, v))
    fp = len(predicted) - tp
    fn = sum(1 for u, v in gold if not in_pred.reachable(u, v))
    precision, p_undef = _ratio(tp, tp + fp)
    recall, r_undef = _ratio(tp, tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return EvalReport(
        tp=tp, fp=fp, fn=fn,
        precision=precision, recall=recall, f1=f1,
        evaluated_pairs=len(predicted),
        skipped_oov_pairs=skipped_h,
        skipped_oov_gold_pairs=skipped_g,
        precision_undefined=p_undef,
        recall_undefined=r_undef,
    )
