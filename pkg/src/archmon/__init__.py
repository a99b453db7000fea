"""Archimedean classes, summand-absorbing submonoids, flocks and heights on finite commutative monoids."""

from .core import (
    FiniteMonoid,
    MonoidError,
    OrderedMonoid,
    QuasiOrder,
    d_order,
    ordered,
    v_order,
    validate_monoid,
)
from .arch import arch_class, arch_leq, gamma
from .sa import cbar, cbar_omega, cbar_set, enumerate_sa, is_sa, sa_closure, w_of
from .flock import classify_dichotomy, entourages, max_flock, min_flock
from .strat import AbstractFlock, Ordinal, abstract_flock, height, stratify
from .gen import build, enumerate_monoids, parse_recipe, random_monoid

from .verify import run_suite, sweep

__all__ = [
    "AbstractFlock", "FiniteMonoid", "MonoidError", "Ordinal", "OrderedMonoid", "QuasiOrder",
    "abstract_flock", "arch_class", "arch_leq", "build", "cbar", "cbar_omega", "cbar_set",
    "classify_dichotomy", "d_order", "entourages", "enumerate_monoids", "enumerate_sa", "gamma",
    "height", "is_sa", "max_flock", "min_flock", "ordered", "parse_recipe", "random_monoid",
    "run_suite", "sa_closure", "stratify", "sweep", "v_order", "validate_monoid", "w_of",
]
__version__ = "0.1.0"
