"""CHSH S-factor analysis for two-qubit states.

The measurement model uses one phase-parametrized observable family per
side.  Side A measures, at analyzer angle ``alpha``,

    A(alpha) = [[0, exp(-i alpha)], [exp(+i alpha), 0]]

and side B measures, at angle ``chi``,

    B(chi) = [[0, exp(+i chi)], [exp(-i chi), 0]]

Both are Hermitian with eigenvalues +/-1; A(0) = B(0) = X, A(pi/2) = Y,
B(pi/2) = -Y.  The correlation E(alpha, chi) is the expectation of
``A(alpha) (x) B(chi)``, and the S-factor for settings
(alpha1, alpha2, chi1, chi2) is

    S = E(alpha1, chi1) - E(alpha1, chi2) + E(alpha2, chi1) + E(alpha2, chi2)

For the Bell state (|01> + |10>)/sqrt(2) the correlation has the closed
form cos(alpha + chi); for (|00> + |11>)/sqrt(2) it is cos(alpha - chi).
Quantum states keep |S| <= 2*sqrt(2); local hidden variable models keep
|S| <= 2.

Angles are canonicalized to [-pi, pi].  All computation here is exact
dense linear algebra on the statevector engine; no sampling is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.optimize import minimize_scalar

from . import statevector as sv
from .errors import ConfigError, DimensionError

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

SETTING_NAMES = ("alpha1", "alpha2", "chi1", "chi2")

_REFINE_TOL = 1e-7
_MAX_SWEEPS = 200


def wrap_angle(theta: float) -> float:
    """Map an angle to the canonical interval [-pi, pi]."""
    return math.remainder(float(theta), math.tau)


def observable_a(alpha: float) -> np.ndarray:
    """Side-A observable at analyzer angle ``alpha`` (Hermitian, eigenvalues +/-1)."""
    return np.array(
        [[0.0, np.exp(-1j * alpha)], [np.exp(1j * alpha), 0.0]], dtype=complex
    )


def observable_b(chi: float) -> np.ndarray:
    """Side-B observable at analyzer angle ``chi`` (Hermitian, eigenvalues +/-1)."""
    return np.array(
        [[0.0, np.exp(1j * chi)], [np.exp(-1j * chi), 0.0]], dtype=complex
    )


def psi_plus_correlation(alpha: float, chi: float) -> float:
    """Closed-form correlation for (|01> + |10>)/sqrt(2): cos(alpha + chi)."""
    return math.cos(alpha + chi)


def phi_plus_correlation(alpha: float, chi: float) -> float:
    """Closed-form correlation for (|00> + |11>)/sqrt(2): cos(alpha - chi)."""
    return math.cos(alpha - chi)


@dataclass(frozen=True)
class MeasurementSettings:
    """Analyzer angles (alpha1, alpha2) for side A and (chi1, chi2) for side B.

    Angles are wrapped to [-pi, pi] on construction.
    """

    alpha1: float
    alpha2: float
    chi1: float
    chi2: float

    def __post_init__(self) -> None:
        for name in SETTING_NAMES:
            object.__setattr__(self, name, wrap_angle(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha1, self.alpha2, self.chi1, self.chi2)


@dataclass(frozen=True)
class SFactorResult:
    """The four correlations and the combined S value for one settings tuple."""

    settings: MeasurementSettings
    correlations: tuple[float, float, float, float]
    """(E(a1,c1), E(a1,c2), E(a2,c1), E(a2,c2))"""
    s_value: float


def _require_two_qubits(state: sv.StateVector) -> None:
    if state.num_qubits != 2:
        raise DimensionError(
            f"CHSH analysis needs a 2-qubit state, got {state.num_qubits} qubits"
        )


def correlation(state: sv.StateVector, alpha: float, chi: float) -> float:
    """E(alpha, chi) = <psi| A(alpha) (x) B(chi) |psi> on a two-qubit state."""
    _require_two_qubits(state)
    return sv.expectation(state, observable_a(alpha), observable_b(chi))


def correlation_matrix(
    state: sv.StateVector, alphas: np.ndarray, chis: np.ndarray
) -> np.ndarray:
    """Correlations for every (alpha, chi) pair: shape (len(alphas), len(chis))."""
    _require_two_qubits(state)
    a_stack = np.stack([observable_a(a) for a in np.atleast_1d(alphas)])
    b_stack = np.stack([observable_b(c) for c in np.atleast_1d(chis)])
    psi = state.amplitudes.reshape(2, 2)
    return np.einsum("ab,iac,jbd,cd->ij", psi.conj(), a_stack, b_stack, psi).real


def s_factor(state: sv.StateVector, settings: MeasurementSettings) -> SFactorResult:
    """Evaluate the CHSH combination at the given settings."""
    _require_two_qubits(state)
    e11 = correlation(state, settings.alpha1, settings.chi1)
    e12 = correlation(state, settings.alpha1, settings.chi2)
    e21 = correlation(state, settings.alpha2, settings.chi1)
    e22 = correlation(state, settings.alpha2, settings.chi2)
    return SFactorResult(
        settings=settings,
        correlations=(e11, e12, e21, e22),
        s_value=e11 - e12 + e21 + e22,
    )


@dataclass(eq=False)
class CorrelationGrid:
    """S values over a (alpha2, chi2) grid at fixed alpha1, chi1.

    ``s_values[i, j]`` is S at alpha2 = ``alpha2_axis[i]``,
    chi2 = ``chi2_axis[j]``.
    """

    alpha1: float
    chi1: float
    alpha2_axis: np.ndarray
    chi2_axis: np.ndarray
    s_values: np.ndarray


def scan_s(
    state: sv.StateVector, alpha1: float, chi1: float, resolution: int = 201
) -> CorrelationGrid:
    """Sweep alpha2 and chi2 over [-pi, pi] at the given resolution.

    Both axes are inclusive linspaces with ``resolution`` points;
    ``resolution`` must be at least 2.
    """
    _require_two_qubits(state)
    if resolution < 2:
        raise ConfigError(f"scan resolution must be at least 2, got {resolution}")
    alpha1 = wrap_angle(alpha1)
    chi1 = wrap_angle(chi1)
    axis = np.linspace(-math.pi, math.pi, resolution)
    alphas = np.concatenate(([alpha1], axis))
    chis = np.concatenate(([chi1], axis))
    e = correlation_matrix(state, alphas, chis)
    e11 = e[0, 0]
    e12 = e[0, 1:]
    e21 = e[1:, 0]
    e22 = e[1:, 1:]
    s = e11 - e12[None, :] + e21[:, None] + e22
    return CorrelationGrid(
        alpha1=alpha1, chi1=chi1, alpha2_axis=axis, chi2_axis=axis, s_values=s
    )


def maximize_s(
    state: sv.StateVector,
    fixed: "tuple[float, float] | None" = None,
    grid_points: int = 101,
) -> tuple[MeasurementSettings, float]:
    """Maximize S over the analyzer angles.

    ``fixed``, when given, pins (alpha1, chi1) and leaves (alpha2, chi2)
    free; otherwise all four angles are free.  The search runs a coarse
    inclusive grid over [-pi, pi] with ``grid_points`` points per free
    axis (grid ties resolve to the lexicographically smallest
    (alpha1, alpha2, chi1, chi2) tuple), then refines by bounded
    derivative-free line searches, one coordinate at a time, until no
    coordinate moves more than 1e-7 in a sweep.

    Returns ``(best_settings, best_s)``.
    """
    _require_two_qubits(state)
    if grid_points < 2:
        raise ConfigError(f"grid_points must be at least 2, got {grid_points}")
    pinned: dict[str, float] = {}
    if fixed is not None:
        alpha1, chi1 = fixed
        pinned = {"alpha1": wrap_angle(alpha1), "chi1": wrap_angle(chi1)}
    free = [name for name in SETTING_NAMES if name not in pinned]

    axis = np.linspace(-math.pi, math.pi, grid_points)
    cand = {
        name: (np.array([pinned[name]]) if name in pinned else axis)
        for name in SETTING_NAMES
    }
    e_a1c1 = correlation_matrix(state, cand["alpha1"], cand["chi1"])
    e_a1c2 = correlation_matrix(state, cand["alpha1"], cand["chi2"])
    e_a2c1 = correlation_matrix(state, cand["alpha2"], cand["chi1"])
    e_a2c2 = correlation_matrix(state, cand["alpha2"], cand["chi2"])

    # S = [E(a1,c1) + E(a2,c1)] + [-E(a1,c2) + E(a2,c2)]: the two bracketed
    # terms involve disjoint chi coordinates, so for each (alpha1, alpha2)
    # pair they can be maximized independently.  This keeps the search at
    # O(grid_points^3) instead of O(grid_points^4).
    t1 = e_a1c1[:, None, :] + e_a2c1[None, :, :]
    t2 = -e_a1c2[:, None, :] + e_a2c2[None, :, :]
    m1 = t1.max(axis=2)
    k1 = t1.argmax(axis=2)
    m2 = t2.max(axis=2)
    l2 = t2.argmax(axis=2)
    total = m1 + m2
    i1, i2 = np.unravel_index(int(total.argmax()), total.shape)
    coords = {
        "alpha1": float(cand["alpha1"][i1]),
        "alpha2": float(cand["alpha2"][i2]),
        "chi1": float(cand["chi1"][k1[i1, i2]]),
        "chi2": float(cand["chi2"][l2[i1, i2]]),
    }

    def s_at(values: Mapping[str, float]) -> float:
        e = correlation_matrix(
            state,
            np.array([values["alpha1"], values["alpha2"]]),
            np.array([values["chi1"], values["chi2"]]),
        )
        return float(e[0, 0] - e[0, 1] + e[1, 0] + e[1, 1])

    if free:
        window = float(axis[1] - axis[0])
        for _ in range(_MAX_SWEEPS):
            moved = 0.0
            for name in free:
                x0 = coords[name]
                lo = max(-math.pi, x0 - window)
                hi = min(math.pi, x0 + window)
                best_here = s_at(coords)
                res = minimize_scalar(
                    lambda x: -s_at({**coords, name: float(x)}),
                    bounds=(lo, hi),
                    method="bounded",
                    options={"xatol": 1e-9},
                )
                if -float(res.fun) > best_here:
                    new_x = float(res.x)
                    moved = max(moved, abs(new_x - x0))
                    coords[name] = new_x
            if moved < _REFINE_TOL:
                break

    best = MeasurementSettings(**coords)
    return best, s_factor(state, best).s_value
