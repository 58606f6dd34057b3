"""Platonic measurement directions and sharpness-parameterized qubit measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import I2, bloch_operator

GOLDEN = (1 + math.sqrt(5)) / 2

# One representative per antipodal pair, in table row order (unnormalized).
_A = GOLDEN
_TABLE = {
    2: [(1, 0, 1), (1, 0, -1)],
    3: [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    4: [(1, 1, 1), (1, -1, -1), (1, 1, -1), (1, -1, 1)],
    6: [(0, 1, _A), (0, 1, -_A), (1, _A, 0), (1, -_A, 0), (_A, 0, 1), (_A, 0, -1)],
    10: [
        (0, 1 / _A, _A), (0, 1 / _A, -_A), (1 / _A, _A, 0), (1 / _A, -_A, 0),
        (_A, 0, 1 / _A), (_A, 0, -1 / _A),
        (1, 1, 1), (1, -1, -1), (1, 1, -1), (1, -1, 1),
    ],
}
SUPPORTED_N = tuple(sorted(_TABLE))

UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm2 = self.x**2 + self.y**2 + self.z**2
        if not abs(norm2 - 1.0) <= UNIT_NORM_TOL:
            raise ValueError(f"Bloch vector must have unit norm, got |v|^2 = {norm2!r}")

    @classmethod
    def normalized(cls, v) -> "BlochVector":
        arr = np.asarray(v, dtype=float)
        norm = np.linalg.norm(arr)
        if arr.shape != (3,) or norm == 0:
            raise ValueError(f"cannot normalize {v!r} to a Bloch vector")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def operator(self) -> np.ndarray:
        return bloch_operator(self.as_array())


@dataclass(frozen=True)
class MeasurementSet:
    """An ordered list of measurement directions, one per setting index ``k``."""

    directions: tuple[BlochVector, ...]

    def __post_init__(self):
        if not self.directions:
            raise ValueError("a measurement set needs at least one direction")
        object.__setattr__(self, "directions", tuple(self.directions))

    @property
    def n(self) -> int:
        return len(self.directions)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.directions)

    def as_array(self) -> np.ndarray:
        return np.array([d.as_array() for d in self.directions])

    def second_moment(self, v) -> float:
        """``(1/n) sum_k (v . m_k)^2`` for a direction ``v``."""
        return float(np.mean((self.as_array() @ np.asarray(v, dtype=float)) ** 2))

    def is_two_design(self, tol: float = 1e-10) -> bool:
        # (1/n) sum m m^T == I/3 is equivalent to a constant second moment
        frame = self.as_array().T @ self.as_array() / self.n
        return bool(np.max(np.abs(frame - np.eye(3) / 3)) <= tol)


def platonic_set(n: int) -> MeasurementSet:
    if n not in _TABLE:
        raise ValueError(f"unsupported measurement count n={n}; supported values are {list(SUPPORTED_N)}")
    return MeasurementSet(tuple(BlochVector.normalized(v) for v in _TABLE[n]))


def format_set(mset: MeasurementSet) -> str:
    """One ``x y z`` line per direction at 17 significant digits."""
    return "".join(f"{d.x:.17g} {d.y:.17g} {d.z:.17g}\n" for d in mset)


def parse_set(text: str) -> MeasurementSet:
    """Parse the ``x y z`` format.  Rows are normalized; blank and ``#`` lines are skipped."""
    dirs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 numbers, got {len(parts)}")
        try:
            v = [float(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        try:
            # keep exact values for rows that are already unit vectors
            dirs.append(BlochVector(*v))
        except ValueError:
            dirs.append(BlochVector.normalized(v))
    if not dirs:
        raise ValueError("measurement set file contains no directions")
    return MeasurementSet(tuple(dirs))


def load_set(path) -> MeasurementSet:
    return parse_set(Path(path).read_text(encoding="utf-8"))


def _check_sharpness(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"sharpness must lie in [0, 1], got {eta!r}")
    return eta


@dataclass(frozen=True)
class KrausPair:
    k_plus: np.ndarray
    k_minus: np.ndarray
    direction: BlochVector
    sharpness: float

    def operator(self, outcome: int) -> np.ndarray:
        if outcome == +1:
            return self.k_plus
        if outcome == -1:
            return self.k_minus
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")


def kraus_pair(m: BlochVector, eta: float) -> KrausPair:
    """Two-outcome measurement along ``m`` with sharpness ``eta``.

    ``K_pm = sqrt((1 pm eta)/2) P_up + sqrt((1 mp eta)/2) P_down`` where
    ``P_up/down = (I pm m.sigma)/2``.  ``eta = 1`` is projective and ``eta = 0``
    leaves the state untouched.
    """
    eta = _check_sharpness(eta)
    mop = m.operator()
    up = 0.5 * (I2 + mop)
    down = 0.5 * (I2 - mop)
    hi = math.sqrt((1 + eta) / 2)
    lo = math.sqrt((1 - eta) / 2)
    k_plus = hi * up + lo * down
    k_minus = lo * up + hi * down
    for k in (k_plus, k_minus):
        k.setflags(write=False)
    return KrausPair(k_plus, k_minus, m, eta)


def povm_effects(kp: KrausPair) -> tuple[np.ndarray, np.ndarray]:
    m_plus = kp.k_plus.conj().T @ kp.k_plus
    m_minus = kp.k_minus.conj().T @ kp.k_minus
    return m_plus, m_minus


def observable(m: BlochVector, eta: float) -> np.ndarray:
    """``M_+ - M_-``, which reduces to ``eta * (m . sigma)``."""
    return _check_sharpness(eta) * m.operator()


def completeness_error(kp: KrausPair) -> float:
    m_plus, m_minus = povm_effects(kp)
    return float(np.max(np.abs(m_plus + m_minus - I2)))

