"""Brute-force single-photon propagation through the explicit network.

Instead of multiplying 2x2 chain matrices, this module lays the whole link
out as a flat list of optical elements acting on a three-mode amplitude
register (outer-left, outer-right which doubles as inner-left, and
inner-right) and folds the input through them one by one. It exists to
cross-check the closed forms in `protocol` and to provide quantities the
closed forms do not track, chiefly how much probability reaches the public
channel.

Mode indices: 0 is the outer left arm, 1 is the outer right arm and the
inner left arm (the same physical path), 2 is the inner right arm that
crosses the channel.
"""

import enum
import math
from array import array
from dataclasses import dataclass, field

from .backend import kernels

__all__ = [
    "LossGroup",
    "ExposureConvention",
    "Splitter",
    "Attenuator",
    "Block",
    "DetectorTap",
    "ModeNetwork",
    "PropagationTrace",
    "build_network",
    "propagate",
    "channel_exposure",
]


class LossGroup(enum.Enum):
    """Which dissipation budget an attenuator draws from."""

    LEFT = "left"
    MIDDLE = "middle"
    CHANNEL = "channel"


_GROUP_INDEX = {LossGroup.LEFT: 0, LossGroup.MIDDLE: 1, LossGroup.CHANNEL: 2}


class ExposureConvention(enum.Enum):
    """How channel exposure is tallied.

    ENTERING_PROBABILITY counts every bit of probability that reaches a
    channel-side segment, before any attenuation there, including what later
    arrives at the side detectors. ABSORBED_ONLY counts just the probability
    the channel keeps: absorber hits plus channel-group dissipation.
    """

    ENTERING_PROBABILITY = "entering_probability"
    ABSORBED_ONLY = "absorbed_only"


@dataclass(frozen=True, slots=True)
class Splitter:
    """Rotation by theta mixing mode_a into mode_b."""

    mode_a: int
    mode_b: int
    theta: float


@dataclass(frozen=True, slots=True)
class Attenuator:
    """Scales one mode by sqrt(1 - kappa), booking kappa of its energy."""

    mode: int
    kappa: float
    group: LossGroup

    def __post_init__(self):
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in [0, 1], got {self.kappa!r}")


@dataclass(frozen=True, slots=True)
class Block:
    """Total absorber: zeroes one mode and books all of its energy."""

    mode: int


@dataclass(frozen=True, slots=True)
class DetectorTap:
    """Routes one mode's remaining amplitude to a named detector.

    channel_side marks taps whose feed has already crossed into the channel,
    so their energy counts toward the entering-probability tally.
    """

    mode: int
    detector: str
    channel_side: bool = False


@dataclass(frozen=True, slots=True)
class ModeNetwork:
    """Ordered element list plus the detector name table."""

    mode_count: int
    elements: tuple
    detectors: tuple

    def __post_init__(self):
        labels = set()
        for label in self.detectors:
            if label in labels:
                raise ValueError(f"duplicate detector label {label!r}")
            labels.add(label)
        for element in self.elements:
            if isinstance(element, Splitter):
                used = (element.mode_a, element.mode_b)
                if element.mode_a == element.mode_b:
                    raise ValueError("splitter must couple two distinct modes")
            elif isinstance(element, (Attenuator, Block)):
                used = (element.mode,)
            elif isinstance(element, DetectorTap):
                used = (element.mode,)
                if element.detector not in labels:
                    raise ValueError(f"unknown detector label {element.detector!r}")
            else:
                raise TypeError(f"unsupported element {element!r}")
            for mode in used:
                if not 0 <= mode < self.mode_count:
                    raise ValueError(f"mode index {mode} out of range")

    def splitter_count(self) -> int:
        return sum(1 for e in self.elements if isinstance(e, Splitter))


@dataclass(frozen=True, slots=True)
class PropagationTrace:
    """Everything the fold measured, for one input amplitude.

    Detector amplitudes are signed; probabilities are their squares. The
    loss bookkeeping satisfies w1 + w2 + sum(w3) + blocked + all group
    losses == input_energy up to rounding.
    """

    m1: float
    m2: float
    m3: tuple
    w1: float
    w2: float
    w3: tuple
    loss_by_group: dict = field(compare=False)
    blocked: float = 0.0
    channel_entering: float = 0.0
    input_amplitude: float = 1.0

    @property
    def input_energy(self) -> float:
        return self.input_amplitude * self.input_amplitude

    def total_accounted(self) -> float:
        """Detected plus dissipated probability; equals the input energy."""
        return (
            self.w1
            + self.w2
            + sum(self.w3)
            + self.blocked
            + sum(self.loss_by_group.values())
        )


def build_network(params) -> ModeNetwork:
    """Lay out the full link for the given parameters.

    One outer splitter per stage; between consecutive outer splitters sit a
    left-arm attenuator and a complete inner chain whose channel-side
    segments carry either attenuators or, when the effective channel
    dissipation is exactly 1, total absorbers. Each inner chain ends in a
    side detector tap. With a single outer splitter the link degenerates to
    that splitter and the two terminal detectors.
    """
    outer = params.outer_count
    inner = params.inner_count
    k3 = params.effective_kappa3
    theta_outer = params.theta_outer
    theta_inner = params.theta_inner

    detectors = ["D1", "D2"]
    detectors.extend(f"D3_{i}" for i in range(1, outer))
    elements = []
    for i in range(1, outer):
        elements.append(Splitter(0, 1, theta_outer))
        elements.append(Attenuator(0, params.kappa1, LossGroup.LEFT))
        for j in range(1, inner + 1):
            elements.append(Splitter(1, 2, theta_inner))
            if j < inner:
                elements.append(Attenuator(1, params.kappa2, LossGroup.MIDDLE))
                if k3 == 1.0:
                    elements.append(Block(2))
                else:
                    elements.append(Attenuator(2, k3, LossGroup.CHANNEL))
        elements.append(DetectorTap(2, f"D3_{i}", channel_side=True))
    elements.append(Splitter(0, 1, theta_outer))
    elements.append(DetectorTap(0, "D1"))
    elements.append(DetectorTap(1, "D2"))

    mode_count = 2 if outer == 1 else 3
    return ModeNetwork(
        mode_count=mode_count, elements=tuple(elements), detectors=tuple(detectors)
    )


def _encode(network: ModeNetwork):
    """Flatten elements into the parallel arrays the kernels consume.

    Trig and square-root values are cached per distinct angle or dissipation
    so long sweeps do not pay for hundreds of thousands of libm calls.
    """
    detector_index = {label: i for i, label in enumerate(network.detectors)}
    codes = array("q")
    mode_a = array("q")
    mode_b = array("q")
    x = array("d")
    y = array("d")
    cos_cache = {}
    sin_cache = {}
    keep_cache = {}
    for element in network.elements:
        if isinstance(element, Splitter):
            c = cos_cache.get(element.theta)
            if c is None:
                c = cos_cache[element.theta] = math.cos(element.theta)
                sin_cache[element.theta] = math.sin(element.theta)
            codes.append(0)
            mode_a.append(element.mode_a)
            mode_b.append(element.mode_b)
            x.append(c)
            y.append(sin_cache[element.theta])
        elif isinstance(element, Attenuator):
            keep = keep_cache.get(element.kappa)
            if keep is None:
                keep = keep_cache[element.kappa] = math.sqrt(1.0 - element.kappa)
            codes.append(1)
            mode_a.append(element.mode)
            mode_b.append(_GROUP_INDEX[element.group])
            x.append(element.kappa)
            y.append(keep)
        elif isinstance(element, Block):
            codes.append(2)
            mode_a.append(element.mode)
            mode_b.append(0)
            x.append(0.0)
            y.append(0.0)
        else:
            codes.append(3)
            mode_a.append(element.mode)
            mode_b.append(detector_index[element.detector])
            x.append(1.0 if element.channel_side else 0.0)
            y.append(0.0)
    return codes, mode_a, mode_b, x, y


def propagate(network: ModeNetwork, amplitude: float = 1.0) -> PropagationTrace:
    """Fold a single input amplitude through the element list.

    The input enters mode 0. Returns the signed detector amplitudes, their
    squares, and the per-group dissipation bookkeeping.
    """
    amplitude = float(amplitude)
    if not math.isfinite(amplitude):
        raise ValueError(f"amplitude must be finite, got {amplitude!r}")
    codes, mode_a, mode_b, x, y = _encode(network)
    _amps, det, loss, blocked, entering = kernels.propagate_fold(
        codes, mode_a, mode_b, x, y, network.mode_count, len(network.detectors), amplitude
    )
    m1 = det[0]
    m2 = det[1]
    m3 = tuple(det[2:])
    return PropagationTrace(
        m1=m1,
        m2=m2,
        m3=m3,
        w1=m1 * m1,
        w2=m2 * m2,
        w3=tuple(v * v for v in m3),
        loss_by_group={
            LossGroup.LEFT: loss[0],
            LossGroup.MIDDLE: loss[1],
            LossGroup.CHANNEL: loss[2],
        },
        blocked=blocked,
        channel_entering=entering,
        input_amplitude=amplitude,
    )


def channel_exposure(
    trace: PropagationTrace,
    convention: ExposureConvention = ExposureConvention.ENTERING_PROBABILITY,
) -> float:
    """Channel exposure of a finished propagation under one convention."""
    if convention is ExposureConvention.ENTERING_PROBABILITY:
        return trace.channel_entering
    if convention is ExposureConvention.ABSORBED_ONLY:
        return trace.blocked + trace.loss_by_group[LossGroup.CHANNEL]
    raise ValueError(f"unknown convention {convention!r}")
