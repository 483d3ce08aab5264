"""Input checks shared by the estimators."""

import numbers

from sklearn.utils import check_scalar

from .dense import EmbeddingStore
from .lexicon import IsARelation, SenseInventory, SenseTaxonomy


def check_inventory(X) -> SenseInventory:
    """Accept a :class:`SenseInventory` or an iterable of synsets."""
    if isinstance(X, SenseInventory):
        return X
    if X is None or isinstance(X, (str, bytes)):
        raise TypeError(f"expected a SenseInventory, got {type(X).__name__}")
    return SenseInventory(X)


def check_relation(y) -> IsARelation:
    """Accept an :class:`IsARelation` or an iterable of pair tuples."""
    if isinstance(y, IsARelation):
        return y
    if y is None or isinstance(y, (str, bytes)):
        raise TypeError(f"expected an IsARelation, got {type(y).__name__}")
    return IsARelation.from_pairs(y)


def check_taxonomy(y) -> SenseTaxonomy:
    if isinstance(y, SenseTaxonomy):
        return y
    if y is None or isinstance(y, (str, bytes)):
        raise TypeError(f"expected a SenseTaxonomy, got {type(y).__name__}")
    return SenseTaxonomy(y)


def check_embeddings(store, required: bool):
    if store is None:
        if required:
            raise ValueError("full mode requires word embeddings; pass embeddings=... to fit")
        return None
    if not isinstance(store, EmbeddingStore):
        raise TypeError(f"expected an EmbeddingStore, got {type(store).__name__}")
    return store


def check_positive_int(value, name):
    if isinstance(value, bool):
        raise TypeError(f"{name} must be an int, not bool")
    check_scalar(value, name, target_type=numbers.Integral, min_val=1)
    return int(value)


def check_choice(value, name, choices):
    if value not in choices:
        raise ValueError(f"{name} must be one of {choices}, got {value!r}")
    return value


def check_fraction(value, name):
    check_scalar(value, name, target_type=numbers.Real, min_val=0.0, max_val=1.0)
    return float(value)
