"""Closed-form evaluation of the chained-interferometer link.

The link nests two splitter chains: an outer chain of M splitters whose
right arms each contain a full inner chain of N splitters, and whose inner
chains expose their right-side paths to a public transmission channel. This
module computes the closed-form transfer coefficients for both chains,
detector probabilities and reliabilities for blocking and non-blocking
scenarios, and the balanced-dissipation tuning rule that restores complete
interference at the outer splitters.

Channel exposure (w_tr) has no closed form here; `evaluate` delegates it to
the brute-force oracle module, which is the authority for that number.
"""

import math
import operator
from dataclasses import dataclass

from .backend import kernels

__all__ = [
    "ProtocolParams",
    "InnerCoefficients",
    "TransferCoefficients",
    "OutcomeReport",
    "inner_coefficients",
    "equivalent_inner_dissipation",
    "balanced_kappa1",
    "outer_coefficients",
    "evaluate",
    "eta_nb_closed_form",
]


@dataclass(frozen=True, slots=True)
class ProtocolParams:
    """Full experiment configuration.

    Attributes:
        outer_count: number of splitters in the outer chain (M >= 1).
        inner_count: number of splitters per inner chain (N >= 1).
        kappa1: per-segment dissipation on the left-group paths.
        kappa2: per-segment dissipation on the middle-group paths.
        kappa3: per-segment dissipation on the channel-side paths.
        bob_blocks: when true, absorbers sit on every channel gap segment and
            the effective channel dissipation is 1 regardless of kappa3. The
            supplied kappa3 is kept for reporting only.
    """

    outer_count: int
    inner_count: int
    kappa1: float = 0.0
    kappa2: float = 0.0
    kappa3: float = 0.0
    bob_blocks: bool = False

    def __post_init__(self):
        object.__setattr__(self, "outer_count", operator.index(self.outer_count))
        object.__setattr__(self, "inner_count", operator.index(self.inner_count))
        if self.outer_count < 1:
            raise ValueError("outer_count must be at least 1")
        if self.inner_count < 1:
            raise ValueError("inner_count must be at least 1")
        for name in ("kappa1", "kappa2", "kappa3"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        object.__setattr__(self, "bob_blocks", bool(self.bob_blocks))

    @property
    def effective_kappa3(self) -> float:
        """Channel dissipation actually applied: 1.0 whenever blocks are in."""
        return 1.0 if self.bob_blocks else self.kappa3

    @property
    def theta_outer(self) -> float:
        return math.pi / (2 * self.outer_count)

    @property
    def theta_inner(self) -> float:
        return math.pi / (2 * self.inner_count)


@dataclass(frozen=True, slots=True)
class InnerCoefficients:
    """First-column amplitudes of one inner chain fed on its left port.

    m11 goes back out of the left port, m21 out of the right port, and m_res
    is the amplitude absorbed into the loss reservoir; the three squares sum
    to one.
    """

    m11: float
    m21: float
    m_res: float


@dataclass(frozen=True, slots=True)
class TransferCoefficients:
    """Amplitudes of the whole link for a unit input.

    m1 and m2 reach the two terminal detectors, m3[i] reaches the side
    detector behind inner chain i + 1, and m_res is the reservoir amplitude
    fixed by energy conservation.
    """

    m1: float
    m2: float
    m3: tuple
    m_res: float


@dataclass(frozen=True, slots=True)
class OutcomeReport:
    """Detector probabilities and reliability for one scenario.

    w_tr is the transmission-channel exposure under the oracle's default
    entering-probability convention. eta is the reliability ratio for the
    scenario: intended-detector probability over unintended-detector
    probability. It is +inf when the unintended probability is exactly zero
    with a nonzero numerator, and NaN (reported downstream as "undefined")
    when both are zero.
    """

    w1: float
    w2: float
    w3: tuple
    w_res: float
    w_tr: float
    eta: float

    def total(self) -> float:
        """Detector plus reservoir probability; 1.0 up to rounding."""
        return self.w1 + self.w2 + sum(self.w3) + self.w_res


def _check_fraction(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def _check_count(name, value):
    value = operator.index(value)
    if value < 1:
        raise ValueError(f"{name} must be at least 1, got {value}")
    return value


def inner_coefficients(inner_count: int, kappa2: float, kappa3: float) -> InnerCoefficients:
    """Closed-form coefficients of one inner chain.

    The chain is inner_count splitters at angle pi / (2 * inner_count) with
    diag(sqrt(1 - kappa2), sqrt(1 - kappa3)) between consecutive stages, fed
    with unit amplitude on the left port.
    """
    inner_count = _check_count("inner_count", inner_count)
    kappa2 = _check_fraction("kappa2", kappa2)
    kappa3 = _check_fraction("kappa3", kappa3)
    theta = math.pi / (2 * inner_count)
    a11, _a12, a21, _a22 = kernels.chain_product(
        math.cos(theta),
        math.sin(theta),
        math.sqrt(1.0 - kappa2),
        math.sqrt(1.0 - kappa3),
        inner_count,
    )
    m_res = math.sqrt(max(0.0, 1.0 - a11 * a11 - a21 * a21))
    return InnerCoefficients(m11=a11, m21=a21, m_res=m_res)


def equivalent_inner_dissipation(inner_count: int, kappa2: float) -> float:
    """Dissipation a blocked inner chain presents to its outer splitter pair.

    With absorbers on every channel gap, the inner chain returns the fraction
    cos^2(t) * ((1 - kappa2) * cos^2(t))^(N - 1) of its input (t is the inner
    splitter angle), so the chain as a whole acts like a single lossy segment
    with this dissipation value.
    """
    inner_count = _check_count("inner_count", inner_count)
    kappa2 = _check_fraction("kappa2", kappa2)
    theta = math.pi / (2 * inner_count)
    return 1.0 - math.cos(theta) ** 2 * ((1 - kappa2) ** 0.5 * math.cos(theta)) ** (
        2 * (inner_count - 1)
    )


def balanced_kappa1(inner_count: int, kappa2: float) -> float:
    """Left-group dissipation that balances a blocked inner chain.

    Setting kappa1 to this value equalizes the two arms of every outer
    interferometer, which restores complete interference and nulls the
    unwanted terminal detector. Identical to equivalent_inner_dissipation by
    construction.
    """
    return equivalent_inner_dissipation(inner_count, kappa2)


def outer_coefficients(params: ProtocolParams) -> TransferCoefficients:
    """Closed-form transfer coefficients of the whole link.

    The outer chain sees each inner chain as its right-arm segment whose
    amplitude transmission is the signed inner m11 (not a square root of a
    loss fraction), while the left arm attenuates by sqrt(1 - kappa1). Side
    amplitudes are the per-stage right-arm feeds times the inner m21. The
    reservoir amplitude is fixed by energy conservation.
    """
    inner = inner_coefficients(params.inner_count, params.kappa2, params.effective_kappa3)
    theta = params.theta_outer
    m1, m2, feeds = kernels.outer_scan(
        math.cos(theta),
        math.sin(theta),
        math.sqrt(1.0 - params.kappa1),
        inner.m11,
        params.outer_count,
    )
    m3 = tuple(feed * inner.m21 for feed in feeds)
    detected = m1 * m1 + m2 * m2
    for amplitude in m3:
        detected += amplitude * amplitude
    m_res = math.sqrt(max(0.0, 1.0 - detected))
    return TransferCoefficients(m1=m1, m2=m2, m3=m3, m_res=m_res)


def _reliability(numerator: float, denominator: float) -> float:
    if denominator == 0.0:
        return math.inf if numerator > 0.0 else math.nan
    return numerator / denominator


def evaluate(params: ProtocolParams, *, trace=None) -> OutcomeReport:
    """Detector probabilities, channel exposure, and reliability.

    Probabilities are the squared closed-form coefficients. Channel exposure
    comes from the oracle's propagation (pass a precomputed trace for the
    same params to avoid a second propagation). The reliability compares the
    intended detector to the unintended one: w1/w2 without blocks, w2/w1
    with blocks.
    """
    from . import oracle

    coeffs = outer_coefficients(params)
    w1 = coeffs.m1 * coeffs.m1
    w2 = coeffs.m2 * coeffs.m2
    w3 = tuple(v * v for v in coeffs.m3)
    w_res = coeffs.m_res * coeffs.m_res
    if trace is None:
        trace = oracle.propagate(oracle.build_network(params))
    w_tr = oracle.channel_exposure(trace, oracle.ExposureConvention.ENTERING_PROBABILITY)
    if params.bob_blocks:
        eta = _reliability(w2, w1)
    else:
        eta = _reliability(w1, w2)
    return OutcomeReport(w1=w1, w2=w2, w3=w3, w_res=w_res, w_tr=w_tr, eta=eta)


def eta_nb_closed_form(outer_count: int) -> float:
    """No-blocks reliability cos^2(pi/2M) / sin^2(pi/2M).

    Holds whenever the middle and channel dissipations are equal, for any
    left-group dissipation and any inner chain length.
    """
    outer_count = _check_count("outer_count", outer_count)
    theta = math.pi / (2 * outer_count)
    return math.cos(theta) ** 2 / math.sin(theta) ** 2
