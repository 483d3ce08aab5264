"""scikit-learn style front-end to the extraction pipeline.

``fit`` takes a sense inventory as ``X`` and word-level is-a pairs as ``y``;
hyper-parameters live on the constructor so ``get_params``/``set_params``,
``clone`` and grid searches over ``n``, ``k`` and ``m`` work as usual.
"""

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .evaluation import evaluate
from .labeling import label_synsets, truncate_top_n
from .linker import MODES, RunSummary, generate_pairs, link
from .sparse_wsd import ZERO_FALLBACKS
from .validation import (
    check_choice,
    check_embeddings,
    check_fraction,
    check_inventory,
    check_positive_int,
    check_relation,
    check_taxonomy,
)


def _known_synsets(estimator, X):
    inventory = check_inventory(X)
    unknown = [sid for sid in inventory.ids if sid not in estimator.inventory_]
    if unknown:
        raise ValueError(f"{len(unknown)} synsets were not seen in fit, e.g. {unknown[0]!r}")
    return inventory


class HypernymLabeler(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """Weighted hypernym labels for every synset.

    Parameters
    ----------
    n : int, default=3
        Number of top-weighted hypernyms kept per label.

    Attributes
    ----------
    labels_ : dict
        Synset id to :class:`~sensehyper.labeling.HypernymLabel`.
    """

    def __init__(self, n=3):
        self.n = n

    def fit(self, X, y):
        n = check_positive_int(self.n, "n")
        self.inventory_ = check_inventory(X)
        self.labels_ = label_synsets(self.inventory_, check_relation(y), n)
        return self

    def transform(self, X):
        """Labels of the synsets in ``X``, truncated to the current ``n``."""
        check_is_fitted(self, "labels_")
        n = check_positive_int(self.n, "n")
        inventory = _known_synsets(self, X)
        return {sid: truncate_top_n(self.labels_[sid], n) for sid in inventory.ids}


class SenseAwareHypernymExtractor(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """Turn ambiguous is-a pairs into pairs of word senses.

    Parameters
    ----------
    mode : {"sparse", "full"}, default="sparse"
        ``"full"`` adds embedding-based synset matching and needs
        ``embeddings`` at fit time.
    n : int, default=3
        Top-weighted hypernyms kept per synset label.
    k : int, default=1
        Nearest neighbours retrieved per label vector.
    m : int, default=15
        Largest synset size accepted as a dense match.
    knn_postfilter : bool, default=False
        Retrieve ``k`` admissible synsets instead of ``k`` raw neighbours.
    wsd_zero_fallback : {None, "first"}, default=None
        What to do when every candidate sense has zero similarity.
    min_coverage : float, default=0.0
        Minimum fraction of words with a vector for an item to be indexed.

    Attributes
    ----------
    labels_ : dict
        Weighted, truncated hypernym labels.
    sparse_labels_ : dict
        Disambiguated labels before dense matching.
    hypernym_labels_ : dict
        Final disambiguated labels.
    taxonomy_ : SenseTaxonomy
        Output relation over all fitted synsets.
    summary_ : RunSummary
        Counts and timings of the fit.
    """

    def __init__(
        self,
        mode="sparse",
        n=3,
        k=1,
        m=15,
        knn_postfilter=False,
        wsd_zero_fallback=None,
        min_coverage=0.0,
    ):
        self.mode = mode
        self.n = n
        self.k = k
        self.m = m
        self.knn_postfilter = knn_postfilter
        self.wsd_zero_fallback = wsd_zero_fallback
        self.min_coverage = min_coverage

    def _validate_params(self):
        check_choice(self.mode, "mode", MODES)
        check_choice(self.wsd_zero_fallback, "wsd_zero_fallback", ZERO_FALLBACKS)
        for name in ("n", "k", "m"):
            check_positive_int(getattr(self, name), name)
        check_fraction(self.min_coverage, "min_coverage")

    def fit(self, X, y, embeddings=None, labels=None):
        """Fit on inventory ``X`` and is-a pairs ``y``.

        ``labels`` may carry precomputed hypernym labels (then ``y`` is
        ignored and may be ``None``).
        """
        self._validate_params()
        store = check_embeddings(embeddings, required=self.mode == "full")
        self.inventory_ = check_inventory(X)
        self.summary_ = RunSummary()
        if labels is None:
            with self.summary_.stage("label"):
                labels = label_synsets(self.inventory_, check_relation(y), self.n)
        self.labels_ = labels
        self.summary_.counts["empty_labels"] = sum(1 for lab in labels.values() if not lab.counts)
        self.sparse_labels_, self.hypernym_labels_ = link(
            self.inventory_, self.labels_, self.mode, self.k, self.m, store,
            knn_postfilter=self.knn_postfilter,
            wsd_zero_fallback=self.wsd_zero_fallback,
            min_coverage=self.min_coverage,
            summary=self.summary_,
        )
        with self.summary_.stage("generate"):
            self.taxonomy_ = generate_pairs(self.inventory_, self.hypernym_labels_)
        self.summary_.counts["output_pairs"] = len(self.taxonomy_)
        return self

    def transform(self, X=None):
        """Sense-level pairs whose hyponyms come from the synsets of ``X``."""
        check_is_fitted(self, "taxonomy_")
        if X is None:
            return self.taxonomy_
        return generate_pairs(_known_synsets(self, X), self.hypernym_labels_)

    def fit_transform(self, X, y, embeddings=None, labels=None):
        return self.fit(X, y, embeddings=embeddings, labels=labels).taxonomy_

    def score(self, X, y):
        """F1 of the pairs generated for ``X`` against gold taxonomy ``y``."""
        return evaluate(self.transform(X), check_taxonomy(y)).f1
