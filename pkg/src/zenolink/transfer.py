"""Elementary 2x2 real amplitude transfer matrices and chained compositions.

All amplitudes are real: the modeled interferometers have equal optical path
lengths, so no propagation phases appear anywhere. Matrices act on a
(left, right) mode pair; losses are diagonal contractions.
"""

import math
import operator
from dataclasses import dataclass

from .backend import kernels

_NORM_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class TransferMatrix2:
    """Real 2x2 amplitude transfer matrix.

    Attributes:
        a11, a12, a21, a22: dimensionless amplitude coefficients, row-major.
    """

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"matrix entry {name} must be finite")

    def apply(self, vector: "ModeVector2") -> "ModeVector2":
        """Apply the matrix to a mode pair and return the output pair."""
        return ModeVector2(
            self.a11 * vector.left + self.a12 * vector.right,
            self.a21 * vector.left + self.a22 * vector.right,
        )

    def entries(self):
        return self.a11, self.a12, self.a21, self.a22


@dataclass(frozen=True, slots=True)
class ModeVector2:
    """Amplitude pair on a (left, right) mode pair.

    The squared norm may not exceed unit input energy (up to rounding).
    """

    left: float
    right: float

    def __post_init__(self):
        if not (math.isfinite(self.left) and math.isfinite(self.right)):
            raise ValueError("mode amplitudes must be finite")
        norm = self.left * self.left + self.right * self.right
        if norm > 1.0 + _NORM_TOLERANCE:
            raise ValueError(f"mode pair norm {norm} exceeds unit input energy")


IDENTITY = TransferMatrix2(1.0, 0.0, 0.0, 1.0)


def _check_fraction(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def bs_matrix(theta: float) -> TransferMatrix2:
    """Beam-splitter rotation [[cos t, -sin t], [sin t, cos t]].

    Args:
        theta: mixing angle in radians; reflectivity is cos^2(theta).

    Raises:
        ValueError: when theta is not finite.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    c = math.cos(theta)
    s = math.sin(theta)
    return TransferMatrix2(c, -s, s, c)


def loss_matrix(kappa_left: float, kappa_right: float) -> TransferMatrix2:
    """Diagonal loss pair diag(sqrt(1 - kappa_left), sqrt(1 - kappa_right)).

    Each kappa is the fraction of intensity lost on that path segment.

    Raises:
        ValueError: when either kappa lies outside [0, 1].
    """
    kappa_left = _check_fraction("kappa_left", kappa_left)
    kappa_right = _check_fraction("kappa_right", kappa_right)
    return TransferMatrix2(math.sqrt(1.0 - kappa_left), 0.0, 0.0, math.sqrt(1.0 - kappa_right))


def chain_matrix(theta: float, kappa_left: float, kappa_right: float, n: int) -> TransferMatrix2:
    """Transfer matrix of n identical splitters with loss between stages.

    Computes BS(theta) · [diag(sqrt(1 - kappa_left), sqrt(1 - kappa_right)) ·
    BS(theta)]^(n-1), the rightmost factor acting first. For n = 1 this is
    exactly bs_matrix(theta).

    Raises:
        ValueError: when n < 1, theta is not finite, or a kappa is out of range.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    kappa_left = _check_fraction("kappa_left", kappa_left)
    kappa_right = _check_fraction("kappa_right", kappa_right)
    n = operator.index(n)
    if n < 1:
        raise ValueError("a chain has at least one splitter, got n=%d" % n)
    a11, a12, a21, a22 = kernels.chain_product(
        math.cos(theta),
        math.sin(theta),
        math.sqrt(1.0 - kappa_left),
        math.sqrt(1.0 - kappa_right),
        n,
    )
    return TransferMatrix2(a11, a12, a21, a22)


def matrix_power(m: TransferMatrix2, k: int) -> TransferMatrix2:
    """Iterated product of m with itself; k = 0 returns the identity.

    Raises:
        ValueError: when k < 0.
    """
    k = operator.index(k)
    if k < 0:
        raise ValueError("power must be nonnegative, got k=%d" % k)
    r11, r12, r21, r22 = kernels.mat_power(m.a11, m.a12, m.a21, m.a22, k)
    return TransferMatrix2(r11, r12, r21, r22)
