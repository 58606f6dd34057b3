"""Sequential two-sided weak measurements on a shared two-qubit state.

Alice holds the left qubit, Bob the right one.  Each side is measured first
by a weak observer (sharpness ``eta``) and then by a sharp one.  The first
round is unread by the second: the downstream pair receives the uniform
average over the earlier settings and outcomes.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from . import linalg
from .linalg import I2, TOL
from .measurement import KrausPair, MeasurementSet, kraus_pair, platonic_set, povm_effects

OUTCOMES = (+1, -1)

# Multiplies the raw correlator so the anticorrelated singlet gives positive
# steering values; equivalent to Alice announcing flipped outcomes.
ANTICORRELATION = -1
MAX_LHS_SETTINGS = 16


@dataclass(frozen=True)
class TwoQubitState:
    rho: np.ndarray

    def __post_init__(self):
        rho = linalg.as_matrix(self.rho, 4)
        herm = linalg.hermiticity_error(rho)
        if herm > TOL.hermitian:
            raise ValueError(f"density matrix is not Hermitian (error {herm:.3e})")
        tr = linalg.trace(rho)
        if abs(tr - 1) > TOL.trace:
            raise ValueError(f"density matrix trace is {tr}, expected 1")
        lam = linalg.min_eigenvalue(rho)
        if lam < -TOL.psd:
            raise ValueError(f"density matrix has negative eigenvalue {lam:.3e}")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def expectation(self, op) -> float:
        return float(np.trace(self.rho @ linalg.as_matrix(op, 4)).real)

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)

    def reduced_A(self) -> np.ndarray:
        return linalg.partial_trace_B(self.rho)

    def reduced_B(self) -> np.ndarray:
        return linalg.partial_trace_A(self.rho)


def _state(rho) -> TwoQubitState:
    return rho if isinstance(rho, TwoQubitState) else TwoQubitState(rho)


def singlet_state() -> TwoQubitState:
    """``|psi-><psi-|`` with ``|psi-> = (|01> - |10>)/sqrt(2)``."""
    psi = np.array([0, 1, -1, 0], dtype=np.complex128) / math.sqrt(2)
    return TwoQubitState(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class ObserverConfig:
    side: Literal["A", "B"]
    sharpness: float
    set: MeasurementSet

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValueError(f"side must be 'A' or 'B', got {self.side!r}")
        if not 0.0 <= self.sharpness <= 1.0:
            raise ValueError(f"sharpness must lie in [0, 1], got {self.sharpness!r}")
        if self.set.n == 0:
            raise ValueError("observer needs a nonempty measurement set")

    def kraus_pairs(self) -> list[KrausPair]:
        return [kraus_pair(m, self.sharpness) for m in self.set]


def conditional_state(rho, k_a: Optional[KrausPair], a: Optional[int],
                      k_b: Optional[KrausPair], b: Optional[int]) -> tuple[np.ndarray, float]:
    """Unnormalized post-measurement state for outcomes ``(a, b)`` and its probability.

    ``None`` in place of a Kraus pair means that side is left alone; its
    outcome argument is then ignored.
    """
    rho = _state(rho).rho
    op_a = I2 if k_a is None else k_a.operator(a)
    op_b = I2 if k_b is None else k_b.operator(b)
    k = linalg.tensor_product(op_a, op_b)
    out = k @ rho @ k.conj().T
    return out, float(np.trace(out).real)


@dataclass(frozen=True)
class Assemblage:
    """Unnormalized conditional states of the unmeasured side, keyed by ``(k, outcome)``."""

    n: int
    entries: dict

    def marginal(self, k: int) -> np.ndarray:
        return sum(self.entries[(k, a)] for a in OUTCOMES)

    def no_signalling_error(self) -> float:
        ref = self.marginal(0)
        return max(float(np.max(np.abs(self.marginal(k) - ref))) for k in range(self.n))

    def min_eigenvalue(self) -> float:
        return min(linalg.min_eigenvalue(s) for s in self.entries.values())


def assemblage(rho, cfg: ObserverConfig) -> Assemblage:
    """States steered onto the far side by ``cfg``'s measurements.

    ``cfg.side == 'A'`` gives ``tr_A((M_a (x) I) rho)``; side ``'B'`` is the mirror image.
    """
    rho = _state(rho).rho
    entries = {}
    for k, kp in enumerate(cfg.kraus_pairs()):
        for a, effect in zip(OUTCOMES, povm_effects(kp)):
            if cfg.side == "A":
                entries[(k, a)] = linalg.partial_trace_A(linalg.tensor_product(effect, I2) @ rho)
            else:
                entries[(k, a)] = linalg.partial_trace_B(linalg.tensor_product(I2, effect) @ rho)
    return Assemblage(cfg.set.n, entries)


@functools.lru_cache(maxsize=64)
def lhs_bound(mset: MeasurementSet) -> float:
    """Largest value of the linear steering functional achievable without steering.

    Maximizes ``lambda_max((1/n) sum_k a_k m_k.sigma)`` over sign patterns
    ``a_k = +/-1``.  Flipping every sign maps the operator to its negative,
    which has the same spectrum up to sign, so ``a_0 = +1`` is fixed.
    """
    n = mset.n
    if n > MAX_LHS_SETTINGS:
        raise ValueError(f"lhs_bound enumerates 2^(n-1) sign patterns; n={n} exceeds {MAX_LHS_SETTINGS}")
    ops = [m.operator() for m in mset]
    best = -math.inf
    for tail in itertools.product(OUTCOMES, repeat=n - 1):
        g = sum(s * op for s, op in zip((1, *tail), ops)) / n
        best = max(best, linalg.max_eigenvalue(g))
    return best


def steering_parameter(rho, mset: MeasurementSet, eta_a: float, eta_b: float,
                       corr_sign: int = ANTICORRELATION) -> float:
    """Average matched-setting correlation ``(1/n) sum_k sum_ab a*b*p(a,b|k,k)``.

    Probabilities come from explicit outcome enumeration over the Kraus
    pairs of both sides.
    """
    state = _state(rho)
    total = 0.0
    for m in mset:
        ka = kraus_pair(m, eta_a)
        kb = kraus_pair(m, eta_b)
        for a, b in itertools.product(OUTCOMES, OUTCOMES):
            _, p = conditional_state(state, ka, a, kb, b)
            total += a * b * p
    return corr_sign * total / mset.n + 0.0  # no negative zero


def averaged_state(rho, cfg_a: Optional[ObserverConfig], cfg_b: Optional[ObserverConfig]) -> TwoQubitState:
    """State handed on after unread measurements on either or both sides.

    Averages the conditional states over all setting pairs ``(k, l)`` and
    outcomes.  A ``None`` side is passed through unchanged.
    """
    if cfg_a is None and cfg_b is None:
        raise ValueError("at least one side must be measured")
    if cfg_a is not None and cfg_a.side != "A":
        raise ValueError("cfg_a must be an Alice-side configuration")
    if cfg_b is not None and cfg_b.side != "B":
        raise ValueError("cfg_b must be a Bob-side configuration")
    state = _state(rho)
    branches_a = [(None, None)] if cfg_a is None else [
        (kp, a) for kp in cfg_a.kraus_pairs() for a in OUTCOMES]
    branches_b = [(None, None)] if cfg_b is None else [
        (kp, b) for kp in cfg_b.kraus_pairs() for b in OUTCOMES]
    n_a = 1 if cfg_a is None else cfg_a.set.n
    n_b = 1 if cfg_b is None else cfg_b.set.n
    out = np.zeros((4, 4), dtype=np.complex128)
    for (ka, a), (kb, b) in itertools.product(branches_a, branches_b):
        out += conditional_state(state, ka, a, kb, b)[0]
    out /= n_a * n_b
    return TwoQubitState(0.5 * (out + out.conj().T))


@dataclass(frozen=True)
class ScenarioResult:
    s11: float
    s12: float
    s21: float
    s22: float
    c_n: float
    n: int
    eta_a: float
    eta_b: float

    def values(self) -> tuple[float, float, float, float]:
        return (self.s11, self.s12, self.s21, self.s22)

    def violations(self) -> tuple[bool, bool, bool, bool]:
        return tuple(s > self.c_n for s in self.values())


def scenario(eta_a: float, eta_b: float, n, corr_sign: int = ANTICORRELATION,
             initial=None) -> ScenarioResult:
    """All four observer-pair steering values for first-round sharpnesses ``eta_a``, ``eta_b``.

    ``n`` is a supported setting count or a ready ``MeasurementSet``.  The
    second observer on each side always measures sharply.
    """
    mset = n if isinstance(n, MeasurementSet) else platonic_set(n)
    rho0 = singlet_state() if initial is None else _state(initial)
    alice1 = ObserverConfig("A", eta_a, mset)
    bob1 = ObserverConfig("B", eta_b, mset)
    s11 = steering_parameter(rho0, mset, eta_a, eta_b, corr_sign)
    s21 = steering_parameter(averaged_state(rho0, alice1, None), mset, 1.0, eta_b, corr_sign)
    s12 = steering_parameter(averaged_state(rho0, None, bob1), mset, eta_a, 1.0, corr_sign)
    s22 = steering_parameter(averaged_state(rho0, alice1, bob1), mset, 1.0, 1.0, corr_sign)
    return ScenarioResult(s11, s12, s21, s22, lhs_bound(mset), mset.n, float(eta_a), float(eta_b))
