"""Logical classification of data whose feature values are partially ordered."""

from .classifier import (
    ABSTAIN,
    ElementaryClassifier,
    TrainedModel,
    TrainingSet,
    classify,
    duplicate_features,
    estimate,
    train,
    train_coverings,
    train_representatives,
)
from .dataio import OrderSpec, complete_greatest, parse_dataset, parse_order_spec
from .dualization import CoveringMatrix, SigmaCovering, enumerate_coverings, is_ordered_irredundant_covering
from .poset import Poset, build_poset, make_antichain, make_chain
from .product import ProductSpace, brute_force_max_independent, brute_force_min_independent

__version__ = "0.1.0"
