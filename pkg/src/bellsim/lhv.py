"""Local hidden variable models for the two-setting, two-outcome scenario.

A deterministic strategy fixes outcomes (a1, a2, b1, b2), each +/-1, for
both measurement settings on both sides.  A local hidden variable model
is a probability mixture over the 16 deterministic strategies.  The set
of correlation tuples (E11, E12, E21, E22) such models can produce is a
polytope whose facets are exactly the eight CHSH sign variants

    | E11 + E12 + E21 + E22 - 2 * Eij | <= 2   for each ij,

so membership can be decided in closed form; :func:`fit_lhv` uses that
check as the feasibility gate and a linear program only to construct an
explicit witness mixture.  Every deterministic strategy gives the CHSH
combination E11 - E12 + E21 + E22 a value of exactly +/-2, hence the
classical bound |S| <= 2 for every model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import InputError, ModelError

CLASSICAL_BOUND = 2.0

_WEIGHT_SUM_ATOL = 1e-10
_WEIGHT_NEG_ATOL = 1e-12


@dataclass(frozen=True)
class DeterministicStrategy:
    """Pre-assigned +/-1 outcomes for settings (a1, a2) and (b1, b2)."""

    a1: int
    a2: int
    b1: int
    b2: int

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "b1", "b2"):
            if getattr(self, name) not in (-1, 1):
                raise ModelError(f"strategy outcome {name} must be +1 or -1")

    def correlations(self) -> tuple[int, int, int, int]:
        """(E11, E12, E21, E22) produced by this strategy alone."""
        return (self.a1 * self.b1, self.a1 * self.b2, self.a2 * self.b1, self.a2 * self.b2)


STRATEGIES: tuple[DeterministicStrategy, ...] = tuple(
    DeterministicStrategy(a1, a2, b1, b2)
    for a1, a2, b1, b2 in itertools.product((1, -1), repeat=4)
)

# Row s = correlations of STRATEGIES[s]; columns are (E11, E12, E21, E22).
_VERTEX_MATRIX = np.array([s.correlations() for s in STRATEGIES], dtype=float)


def enumerate_strategies() -> tuple[DeterministicStrategy, ...]:
    """All 16 deterministic strategies in canonical order.

    a1 varies slowest, then a2, b1, b2; +1 precedes -1.  The first entry
    is (+1, +1, +1, +1).
    """
    return STRATEGIES


def strategy_s(strategy: DeterministicStrategy) -> float:
    """CHSH combination for a single strategy: always exactly +2 or -2."""
    e11, e12, e21, e22 = strategy.correlations()
    return float(e11 - e12 + e21 + e22)


def classical_max_s() -> float:
    """Largest S any local hidden variable model can reach: exactly 2.0."""
    return max(strategy_s(s) for s in STRATEGIES)


@dataclass(frozen=True)
class LhvModel:
    """A probability mixture over the 16 deterministic strategies.

    Weights must be nonnegative (values above -1e-12 are clamped to 0)
    and sum to 1 within 1e-10; anything else raises :class:`ModelError`.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).reshape(-1).copy()
        if w.shape[0] != len(STRATEGIES):
            raise ModelError(f"expected {len(STRATEGIES)} weights, got {w.shape[0]}")
        if float(w.min()) < -_WEIGHT_NEG_ATOL:
            raise ModelError(f"negative weight {float(w.min())!r} in model")
        w = np.clip(w, 0.0, None)
        total = float(w.sum())
        if abs(total - 1.0) > _WEIGHT_SUM_ATOL:
            raise ModelError(f"weights sum to {total!r}, expected 1 within {_WEIGHT_SUM_ATOL}")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


def model_correlations(model: LhvModel) -> tuple[float, float, float, float]:
    """(E11, E12, E21, E22) of the mixture."""
    e = model.weights @ _VERTEX_MATRIX
    return (float(e[0]), float(e[1]), float(e[2]), float(e[3]))


def model_s(model: LhvModel) -> float:
    """CHSH combination E11 - E12 + E21 + E22 of the mixture."""
    e11, e12, e21, e22 = model_correlations(model)
    return e11 - e12 + e21 + e22


def chsh_variants(targets: "tuple[float, float, float, float]") -> tuple[float, ...]:
    """The eight signed CHSH variants +/-(E11+E12+E21+E22 - 2*Eij).

    Local realizability of a correlation tuple is equivalent to all eight
    being at most 2 (the facet description of the local polytope).
    """
    e = np.asarray(targets, dtype=float)
    base = float(e.sum())
    out = []
    for term in e:
        v = base - 2.0 * float(term)
        out.extend((v, -v))
    return tuple(out)


def fit_lhv(
    targets: "tuple[float, float, float, float]", tol: float = 1e-9
) -> LhvModel | None:
    """Find a mixture reproducing the target correlations, if one exists.

    ``targets`` is (E11, E12, E21, E22) with every entry in [-1, 1]
    (within ``tol``); anything else raises :class:`InputError`.

    Feasibility is decided by the eight-variant facet test.  When the
    targets pass, a linear program over the 16 strategy weights builds an
    explicit model whose correlations match within ``tol`` (exactly, for
    strictly interior targets); when they fail, returns None.
    """
    e = np.asarray(targets, dtype=float).reshape(-1)
    if e.shape[0] != 4:
        raise InputError(f"expected 4 target correlations, got {e.shape[0]}")
    if not np.isfinite(e).all():
        raise InputError("target correlations must be finite")
    if float(np.abs(e).max()) > 1.0 + tol:
        raise InputError(
            f"correlations must lie in [-1, 1], got max magnitude {float(np.abs(e).max())!r}"
        )
    if max(chsh_variants(tuple(e))) > 2.0 + tol:
        return None

    ones = np.ones((1, len(STRATEGIES)))
    res = linprog(
        c=np.zeros(len(STRATEGIES)),
        A_eq=np.vstack([_VERTEX_MATRIX.T, ones]),
        b_eq=np.append(e, 1.0),
        bounds=[(0.0, None)] * len(STRATEGIES),
        method="highs",
    )
    if res.status != 0:
        # Targets within tol of the boundary can be marginally outside the
        # exact polytope; retry with a tol-wide band around the targets.
        res = linprog(
            c=np.zeros(len(STRATEGIES)),
            A_ub=np.vstack([_VERTEX_MATRIX.T, -_VERTEX_MATRIX.T]),
            b_ub=np.concatenate([e + tol, tol - e]),
            A_eq=ones,
            b_eq=np.array([1.0]),
            bounds=[(0.0, None)] * len(STRATEGIES),
            method="highs",
        )
    if res.status != 0:  # pragma: no cover - facet test guarantees feasibility
        raise ModelError(f"witness construction failed unexpectedly: {res.message}")
    w = np.clip(res.x, 0.0, None)
    return LhvModel(w / w.sum())


def sample_lhv(
    model: LhvModel, setting_pair: tuple[int, int], rng: np.random.Generator
) -> tuple[int, int]:
    """Draw one strategy from the mixture and read off outcomes (a, b).

    ``setting_pair`` is (i, j) with i, j in {1, 2}: side A uses setting
    alpha_i, side B uses chi_j.  Consumes one uniform draw from ``rng``.
    """
    i, j = setting_pair
    if i not in (1, 2) or j not in (1, 2):
        raise InputError(f"setting_pair entries must be 1 or 2, got {setting_pair!r}")
    cumulative = np.cumsum(model.weights)
    idx = int(np.searchsorted(cumulative, rng.random(), side="right"))
    strategy = STRATEGIES[min(idx, len(STRATEGIES) - 1)]
    a = strategy.a1 if i == 1 else strategy.a2
    b = strategy.b1 if j == 1 else strategy.b2
    return a, b
