"""Round-by-round driver for the semi-counterfactual key distribution session.

Each round both parties draw a uniformly random switch mode, the photon's
terminal outcome is sampled from the exact distribution, and Alice
publicly announces only whether detector D0 fired.  D0 rounds form the
raw key: Alice's bit is 1 when she reflected, Bob's bit is 1 when he
absorbed, so the bits agree exactly when the choices were anti-correlated
(always, absent an eavesdropper).  A configurable check subset of rounds
is disclosed for parameter estimation and excluded from the key.

Sessions are reproducible: all per-round randomness comes from the
counter-based stream (seed, ROUND_STREAM) and disclosure from
(seed, DISCLOSE_STREAM), so a log is a pure function of its config and
cannot depend on the worker count used to compute it.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    OUTCOME_ORDER,
    Choice,
    Outcome,
    born_sample,
    build_povm,
    terminal_distribution,
)
from .eve import EVE_OUTCOME_ORDER, EveOutcome, eve_measure
from .randomness import DISCLOSE_STREAM, ROUND_STREAM, philox_stream

#: Choice encoding used by the columnar log (index into this tuple).
CHOICES_BY_CODE = (Choice.ABSORB, Choice.REFLECT)
_D0 = OUTCOME_ORDER.index(Outcome.D0)
_EVE_ABSENT = -1

_MAX_SEED = 2**64 - 1


class Announcement(enum.Enum):
    """Alice's public per-round announcement: D0, or anything else."""

    D0 = "D0"
    NOT_D0 = "NotD0"


@dataclass(frozen=True)
class SessionConfig:
    """Physical session parameters; echoed verbatim into every artifact."""

    n_rounds: int
    upsilon: float | None = None
    seed: int = 0
    check_fraction: float = 0.1

    def __post_init__(self) -> None:
        if not isinstance(self.n_rounds, int) or self.n_rounds < 1:
            raise ValueError(f"n_rounds must be a positive integer, got {self.n_rounds}")
        if self.upsilon is not None and not 0.0 <= self.upsilon <= math.pi / 2:
            raise ValueError(f"upsilon must lie in [0, pi/2] or be absent, got {self.upsilon}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0.0 <= self.check_fraction <= 1.0:
            raise ValueError(f"check_fraction must lie in [0, 1], got {self.check_fraction}")

    @property
    def attack_active(self) -> bool:
        """True when an eavesdropper with a distinguishable probe is present."""
        return self.upsilon is not None and self.upsilon > 0.0

    def as_dict(self) -> dict:
        return {
            "n_rounds": self.n_rounds,
            "upsilon": self.upsilon,
            "seed": self.seed,
            "check_fraction": self.check_fraction,
        }


@dataclass(frozen=True)
class RoundRecord:
    """Everything known about one round, including Eve's private data."""

    round_id: int
    alice_choice: Choice
    bob_choice: Choice
    outcome: Outcome
    announced: Announcement
    eve_probe: np.ndarray | None
    eve_result: EveOutcome | None
    sifted: bool
    disclosed_for_check: bool


@functools.lru_cache(maxsize=64)
def _cached_distribution(alice_code: int, bob_code: int, upsilon: float | None):
    return terminal_distribution(
        CHOICES_BY_CODE[alice_code], CHOICES_BY_CODE[bob_code], upsilon
    )


@dataclass
class SessionLog:
    """Columnar record of a whole session plus per-cell counters.

    Columns are rounds in order: choice codes (0 = Absorb, 1 = Reflect),
    outcome codes (index into ``OUTCOME_ORDER``), Eve's measurement code
    (-1 when absent) and the disclosure mask.  ``RoundRecord`` views are
    materialized on demand so million-round sessions stay cheap.
    """

    config: SessionConfig
    alice: np.ndarray
    bob: np.ndarray
    outcome: np.ndarray
    eve_result: np.ndarray
    disclosed: np.ndarray

    def __post_init__(self) -> None:
        n = self.config.n_rounds
        for name in ("alice", "bob", "outcome", "eve_result", "disclosed"):
            col = getattr(self, name)
            if len(col) != n:
                raise ValueError(f"column {name} has {len(col)} rows, config says {n}")

    def __len__(self) -> int:
        return self.config.n_rounds

    @property
    def sifted(self) -> np.ndarray:
        """Mask of key-candidate rounds (exactly the D0 outcomes)."""
        return self.outcome == _D0

    @property
    def counters(self) -> dict[tuple[str, str, str], int]:
        """Counts per (alice choice, bob choice, outcome) cell, all 16 cells."""
        flat = np.bincount(
            self.alice.astype(np.int64) * 8 + self.bob.astype(np.int64) * 4
            + self.outcome.astype(np.int64),
            minlength=16,
        )
        out: dict[tuple[str, str, str], int] = {}
        for a in range(2):
            for b in range(2):
                for o, outcome in enumerate(OUTCOME_ORDER):
                    key = (CHOICES_BY_CODE[a].value, CHOICES_BY_CODE[b].value, outcome.value)
                    out[key] = int(flat[a * 8 + b * 4 + o])
        return out

    def round(self, i: int) -> RoundRecord:
        """Materialize the full record of round ``i``."""
        outcome = OUTCOME_ORDER[self.outcome[i]]
        announced = Announcement.D0 if outcome is Outcome.D0 else Announcement.NOT_D0
        eve_probe = None
        eve_result = None
        if self.config.attack_active and outcome is Outcome.D0:
            eve_probe = _cached_distribution(
                int(self.alice[i]), int(self.bob[i]), self.config.upsilon
            ).probe(Outcome.D0)
            code = int(self.eve_result[i])
            eve_result = EVE_OUTCOME_ORDER[code] if code >= 0 else None
        return RoundRecord(
            round_id=i,
            alice_choice=CHOICES_BY_CODE[self.alice[i]],
            bob_choice=CHOICES_BY_CODE[self.bob[i]],
            outcome=outcome,
            announced=announced,
            eve_probe=eve_probe,
            eve_result=eve_result,
            sifted=outcome is Outcome.D0,
            disclosed_for_check=bool(self.disclosed[i]),
        )

    def iter_rounds(self):
        for i in range(len(self)):
            yield self.round(i)

    def _round_dicts(self) -> list[dict]:
        rows = []
        for rec in self.iter_rounds():
            rows.append(
                {
                    "round_id": rec.round_id,
                    "alice": rec.alice_choice.value,
                    "bob": rec.bob_choice.value,
                    "outcome": rec.outcome.value,
                    "announced": rec.announced.value,
                    "eve_result": rec.eve_result.value if rec.eve_result else None,
                    "sifted": rec.sifted,
                    "disclosed": rec.disclosed_for_check,
                }
            )
        return rows

    def to_json(self, include_rounds: bool = False) -> str:
        """Serialize to a canonical JSON document (stable bytes per config)."""
        doc: dict = {
            "config": self.config.as_dict(),
            "counters": {",".join(k): v for k, v in self.counters.items()},
        }
        if include_rounds:
            doc["rounds"] = self._round_dicts()
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        """Per-round CSV with one row per round."""
        buf = io.StringIO()
        buf.write("round_id,alice,bob,outcome,announced,eve_result,sifted,disclosed\n")
        for row in self._round_dicts():
            buf.write(
                "{round_id},{alice},{bob},{outcome},{announced},{eve},{sifted},{disclosed}\n".format(
                    round_id=row["round_id"],
                    alice=row["alice"],
                    bob=row["bob"],
                    outcome=row["outcome"],
                    announced=row["announced"],
                    eve=row["eve_result"] or "",
                    sifted=str(row["sifted"]).lower(),
                    disclosed=str(row["disclosed"]).lower(),
                )
            )
        return buf.getvalue()


def run_round(
    config: SessionConfig, rng: np.random.Generator, round_id: int = 0
) -> RoundRecord:
    """Simulate a single round, drawing choices and the outcome from ``rng``."""
    alice = Choice.ABSORB if rng.random() < 0.5 else Choice.REFLECT
    bob = Choice.ABSORB if rng.random() < 0.5 else Choice.REFLECT
    dist = terminal_distribution(alice, bob, config.upsilon)
    outcome, probe = born_sample(dist, rng)
    eve_probe = None
    eve_result = None
    if config.attack_active and outcome is Outcome.D0:
        eve_probe = probe
        eve_result = eve_measure(probe, build_povm(config.upsilon), rng)
    announced = Announcement.D0 if outcome is Outcome.D0 else Announcement.NOT_D0
    return RoundRecord(
        round_id=round_id,
        alice_choice=alice,
        bob_choice=bob,
        outcome=outcome,
        announced=announced,
        eve_probe=eve_probe,
        eve_result=eve_result,
        sifted=outcome is Outcome.D0,
        disclosed_for_check=False,
    )


def _sampling_tables(config: SessionConfig):
    """Cumulative outcome thresholds per choice pair, plus Eve's per-pair POVM."""
    outcome_cum = np.zeros((4, len(OUTCOME_ORDER)))
    eve_cum = np.zeros((4, len(EVE_OUTCOME_ORDER)))
    has_probe = [False] * 4
    povm = build_povm(config.upsilon) if config.attack_active else None
    for code in range(4):
        dist = _cached_distribution(code >> 1, code & 1, config.upsilon)
        cum = np.cumsum([dist.probability(o) for o in OUTCOME_ORDER])
        cum[-1] = 1.0  # guard the float edge; probabilities sum to 1 within 1e-12
        outcome_cum[code] = cum
        if povm is not None:
            d0_probe = dist.probe(Outcome.D0)
            if d0_probe is not None:
                qcum = np.cumsum(povm.outcome_probabilities(d0_probe))
                qcum[-1] = 1.0
                eve_cum[code] = qcum
                has_probe[code] = True
    return outcome_cum, eve_cum, has_probe


def run_session(config: SessionConfig, workers: int = 1) -> SessionLog:
    """Simulate ``config.n_rounds`` independent rounds.

    The log is a pure function of the config: per-round uniforms come from
    the (seed, round-stream) generator and the disclosure mask from the
    (seed, disclose-stream) generator, so any positive ``workers`` count
    produces identical results.
    """
    if not isinstance(workers, int) or workers < 1:
        raise ValueError(f"workers must be a positive integer, got {workers}")
    n = config.n_rounds
    u = philox_stream(config.seed, ROUND_STREAM).random((n, 4))
    alice = (u[:, 0] >= 0.5).astype(np.uint8)
    bob = (u[:, 1] >= 0.5).astype(np.uint8)
    pair = alice * 2 + bob

    outcome_cum, eve_cum, has_probe = _sampling_tables(config)
    outcome = np.empty(n, dtype=np.uint8)
    eve = np.full(n, _EVE_ABSENT, dtype=np.int8)
    n_out = len(OUTCOME_ORDER) - 1
    n_eve = len(EVE_OUTCOME_ORDER) - 1

    def process(lo: int, hi: int) -> None:
        pr = pair[lo:hi]
        out = outcome[lo:hi]
        ev = eve[lo:hi]
        for code in range(4):
            mask = pr == code
            if not mask.any():
                continue
            out[mask] = np.minimum(
                np.searchsorted(outcome_cum[code], u[lo:hi, 2][mask], side="right"),
                n_out,
            )
            if has_probe[code]:
                d0 = mask & (out == _D0)
                ev[d0] = np.minimum(
                    np.searchsorted(eve_cum[code], u[lo:hi, 3][d0], side="right"),
                    n_eve,
                )

    bounds = [(n * w) // workers for w in range(workers + 1)]
    blocks = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    if len(blocks) <= 1:
        process(0, n)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda span: process(*span), blocks))

    disclosed = philox_stream(config.seed, DISCLOSE_STREAM).random(n) < config.check_fraction
    return SessionLog(
        config=config,
        alice=alice,
        bob=bob,
        outcome=outcome,
        eve_result=eve,
        disclosed=disclosed,
    )


def disclose_check_subset(
    log: SessionLog, fraction: float, rng: np.random.Generator
) -> SessionLog:
    """Return a copy of the log with a freshly drawn uniform check subset."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    disclosed = rng.random(len(log)) < fraction
    return SessionLog(
        config=dataclasses.replace(log.config, check_fraction=fraction),
        alice=log.alice,
        bob=log.bob,
        outcome=log.outcome,
        eve_result=log.eve_result,
        disclosed=disclosed,
    )


@dataclass
class SiftedKey:
    """Raw key bits from announced D0 rounds not disclosed for checking.

    ``eve_guesses`` holds Eve's bit guess per position (-1 when she has
    none: inconclusive measurement or no attack).
    """

    alice_bits: np.ndarray
    bob_bits: np.ndarray
    eve_guesses: np.ndarray

    def __len__(self) -> int:
        return len(self.alice_bits)

    def mismatch_rate(self) -> float:
        """Fraction of positions where Alice's and Bob's bits disagree (QBER)."""
        if len(self) == 0:
            raise ValueError("empty sifted key")
        return float(np.mean(self.alice_bits != self.bob_bits))

    def key_bit_mask(self) -> np.ndarray:
        """Positions carrying a well-defined shared bit (bits agree).

        Mismatched positions come from both-reflect D0 rounds, where no
        shared bit exists and Eve's stored probe lies outside the two-state
        ensemble; discrimination statistics are defined on this mask.
        """
        return self.alice_bits == self.bob_bits

    def eve_conclusive_rate(self) -> float:
        """Rate of conclusive Eve results over shared-bit positions."""
        mask = self.key_bit_mask()
        if not mask.any():
            raise ValueError("no shared-bit positions in the sifted key")
        return float(np.mean(self.eve_guesses[mask] >= 0))

    def eve_guess_errors(self) -> int:
        """Conclusive guesses on shared-bit positions that differ from the bit.

        Unambiguous discrimination makes this exactly zero.
        """
        mask = self.key_bit_mask() & (self.eve_guesses >= 0)
        return int(np.sum(self.eve_guesses[mask] != self.alice_bits[mask]))


def sift(log: SessionLog) -> SiftedKey:
    """Extract the raw key: D0 rounds that were not disclosed for checking.

    Alice's bit is 1 when she reflected; Bob's bit is 1 when he absorbed.
    D0 then implies equal bits whenever the choices were anti-correlated.
    """
    keep = log.sifted & ~log.disclosed
    alice_bits = log.alice[keep].astype(np.uint8)  # Reflect code is already bit 1
    bob_bits = (1 - log.bob[keep]).astype(np.uint8)
    codes = log.eve_result[keep]
    guesses = np.full(len(codes), -1, dtype=np.int8)
    guesses[codes == 0] = 0  # Plus: photon in the external arm, Alice absorbed
    guesses[codes == 1] = 1  # Minus: photon in the internal arm, Alice reflected
    return SiftedKey(alice_bits=alice_bits, bob_bits=bob_bits, eve_guesses=guesses)
