"""Input-state handling and click statistics.

The link applies one fixed linear transform to whatever field is fed in, so
a single photon and a coherent state produce the same normalized detector
statistics. This module maps either input through a set of transfer
coefficients and exposes the check that all detector ratios are input-state
independent.
"""

import enum
import math
from dataclasses import dataclass

from .protocol import TransferCoefficients

__all__ = [
    "StateKind",
    "InputState",
    "OutputStateSummary",
    "output_state",
    "ratio_invariance_check",
]


class StateKind(enum.Enum):
    SINGLE_PHOTON = "single_photon"
    COHERENT = "coherent"


@dataclass(frozen=True, slots=True)
class InputState:
    """Field state entering the first splitter.

    alpha is the real coherent amplitude and is fixed at 1 for single-photon
    input, whose energy is one photon by definition.
    """

    kind: StateKind
    alpha: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kind, StateKind):
            raise TypeError(f"kind must be a StateKind, got {self.kind!r}")
        alpha = float(self.alpha)
        if not math.isfinite(alpha):
            raise ValueError(f"alpha must be finite, got {alpha!r}")
        if self.kind is StateKind.SINGLE_PHOTON and alpha != 1.0:
            raise ValueError("single-photon input carries unit energy; alpha must be 1")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def single_photon(cls) -> "InputState":
        return cls(StateKind.SINGLE_PHOTON)

    @classmethod
    def coherent(cls, alpha: float) -> "InputState":
        return cls(StateKind.COHERENT, alpha)

    @property
    def energy(self) -> float:
        if self.kind is StateKind.SINGLE_PHOTON:
            return 1.0
        return self.alpha * self.alpha


@dataclass(frozen=True, slots=True)
class OutputStateSummary:
    """Per-output-mode statistics after the transform.

    labels lists the terminal detectors, the side detectors in chain order,
    and finally the loss reservoir. weights holds detection probabilities
    for single-photon input (summing to 1) and mean intensities for coherent
    input (summing to alpha squared). no_click_probability is the chance no
    detector fires at all; it only exists for single-photon input, where it
    equals the reservoir probability. counterfactual_when_blocked records
    whether, with absorbers in the channel, a terminal click implies the
    channel carried no photon: true for a single photon, false for coherent
    light, which puts real intensity in the channel on every run.
    """

    labels: tuple
    amplitudes: tuple
    weights: tuple
    no_click_probability: float | None
    counterfactual_when_blocked: bool


def output_state(coeffs: TransferCoefficients, input_state: InputState) -> OutputStateSummary:
    """Map an input state through the link's transfer coefficients."""
    raw = (coeffs.m1, coeffs.m2, *coeffs.m3, coeffs.m_res)
    labels = (
        "D1",
        "D2",
        *(f"D3_{i}" for i in range(1, len(coeffs.m3) + 1)),
        "reservoir",
    )
    if input_state.kind is StateKind.SINGLE_PHOTON:
        amplitudes = raw
        weights = tuple(v * v for v in raw)
        no_click = coeffs.m_res * coeffs.m_res
        counterfactual = True
    else:
        amplitudes = tuple(v * input_state.alpha for v in raw)
        weights = tuple(v * v for v in amplitudes)
        no_click = None
        counterfactual = False
    return OutputStateSummary(
        labels=labels,
        amplitudes=amplitudes,
        weights=weights,
        no_click_probability=no_click,
        counterfactual_when_blocked=counterfactual,
    )


def _terminal_ratio(summary: OutputStateSummary) -> float:
    w1, w2 = summary.weights[0], summary.weights[1]
    if w2 == 0.0:
        return math.inf
    return w1 / w2


def ratio_invariance_check(coeffs: TransferCoefficients) -> bool:
    """True when the terminal-detector ratio is the same for both inputs.

    Compares the D1:D2 probability ratio of a single photon with the
    intensity ratio of a coherent state (any amplitude works; 0.5 is used).
    Raises ValueError when both terminal coefficients are zero, since no
    ratio exists there.
    """
    if coeffs.m1 == 0.0 and coeffs.m2 == 0.0:
        raise ValueError("terminal ratio is undefined: both m1 and m2 are zero")
    single = _terminal_ratio(output_state(coeffs, InputState.single_photon()))
    coherent = _terminal_ratio(output_state(coeffs, InputState.coherent(0.5)))
    if math.isinf(single) or math.isinf(coherent):
        return single == coherent
    return math.isclose(single, coherent, rel_tol=1e-12, abs_tol=1e-12)
