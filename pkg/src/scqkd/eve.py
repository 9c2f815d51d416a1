"""Eavesdropper strategy: probe measurement after the announcement.

Eve couples her probe to the photon path on the onward leg (see
``core.eve_interaction``), stores the probe, and waits.  When Alice
announces a D0 round, Eve measures the stored probe with the unambiguous
discrimination POVM: outcome Plus means the photon took the external arm,
Minus the internal arm, and Inconclusive nothing.  A conclusive outcome
combined with the D0 announcement pins down both parties' choices and
hence the shared key bit.  On all other rounds she discards the probe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import PovmSet


class EveOutcome(enum.Enum):
    """Result of the discrimination measurement on one stored probe."""

    PLUS = "Plus"
    MINUS = "Minus"
    INCONCLUSIVE = "Inconclusive"


#: Sampling and wire order of the POVM outcomes.
EVE_OUTCOME_ORDER = (EveOutcome.PLUS, EveOutcome.MINUS, EveOutcome.INCONCLUSIVE)


@dataclass(frozen=True)
class EveConfig:
    """Attack configuration: the probe separation angle.

    upsilon = 0 is the no-attack limit (probe states identical, nothing to
    discriminate) and is rejected here; run sessions without an attack
    instead.
    """

    upsilon: float

    def __post_init__(self) -> None:
        if not 0.0 < self.upsilon <= math.pi / 2:
            raise ValueError(
                f"upsilon must lie in (0, pi/2] for an active attack, got {self.upsilon}"
            )


def eve_measure(
    probe: np.ndarray, povm: PovmSet, rng: np.random.Generator
) -> EveOutcome:
    """Measure a stored (normalized) probe with the discrimination POVM."""
    probs = povm.outcome_probabilities(probe)
    u = rng.random()
    acc = 0.0
    for outcome, p in zip(EVE_OUTCOME_ORDER, probs):
        acc += p
        if u < acc:
            return outcome
    return EVE_OUTCOME_ORDER[-1]


def eve_guess(result: EveOutcome, announcement) -> int | None:
    """Turn a measurement result plus the public announcement into a bit guess.

    On a D0 round the parties' choices are (ideally) anti-correlated, so
    locating the photon's arm fixes both choices: Plus (external arm)
    means Alice absorbed, giving bit 0; Minus (internal arm) means Alice
    reflected, giving bit 1.  Inconclusive yields no guess.

    ``announcement`` may be the protocol Announcement enum or its string
    value; only "D0" rounds are meaningful here.
    """
    tag = getattr(announcement, "value", announcement)
    if tag != "D0":
        raise ValueError("eve_guess applies only to announced-D0 rounds")
    if result is EveOutcome.PLUS:
        return 0
    if result is EveOutcome.MINUS:
        return 1
    return None


def eve_information(upsilon: float) -> float:
    """Eve's per-bit information on the raw key: the conclusive-outcome rate.

    Over an ensemble of the two probe states this equals 1 - cos(upsilon).
    """
    if not 0.0 <= upsilon <= math.pi / 2:
        raise ValueError(f"upsilon must lie in [0, pi/2], got {upsilon}")
    return 1.0 - math.cos(upsilon)
