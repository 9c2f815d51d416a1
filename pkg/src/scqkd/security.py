"""Security quantities: visibility, QBER, entropies, key rate, threshold.

The attack with probe angle upsilon reduces the interference visibility on
both-reflect rounds to V = cos(upsilon), which shows up as a QBER of
epsilon = (1 - V)/(2 - V) on the sifted key and hands the eavesdropper
information I_E = 1 - V per key bit.  The key survives while
I_B - I_E >= 0 with I_B = 1 - H(epsilon), i.e. while V >= H(epsilon(V));
the crossing sits near a 21% error rate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import Choice, Outcome, OUTCOME_ORDER
from .protocol import CHOICES_BY_CODE, SessionConfig, SessionLog, run_session, sift

_REFLECT = CHOICES_BY_CODE.index(Choice.REFLECT)
_D0 = OUTCOME_ORDER.index(Outcome.D0)
_D1 = OUTCOME_ORDER.index(Outcome.D1)


class InsufficientCheckDataError(ValueError):
    """The disclosed check subset is too small to estimate anything."""


def binary_entropy(p: float) -> float:
    """Shannon binary entropy in bits, with the 0 log 0 = 0 convention."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    # Evaluate on the larger of (p, 1-p): 1-q is then exact, which makes
    # H(p) == H(1-p) hold bit-for-bit.
    q = max(p, 1.0 - p)
    r = 1.0 - q
    return -q * math.log2(q) - r * math.log2(r)


def visibility_of_upsilon(upsilon: float) -> float:
    """Interference visibility on both-reflect rounds under the attack."""
    if not 0.0 <= upsilon <= math.pi / 2:
        raise ValueError(f"upsilon must lie in [0, pi/2], got {upsilon}")
    return math.cos(upsilon)


def epsilon_of_visibility(v: float) -> float:
    """Sifted-key error rate implied by visibility v: (1 - v)/(2 - v)."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    return (1.0 - v) / (2.0 - v)


def key_rate(v: float) -> float:
    """I_B - I_E at visibility v: positive means a secret key is possible."""
    i_bob = 1.0 - binary_entropy(epsilon_of_visibility(v))
    i_eve = 1.0 - v
    return i_bob - i_eve


def solve_threshold(tolerance: float = 1e-9) -> tuple[float, float]:
    """Locate the security threshold: the root of V - H((1-V)/(2-V)).

    Bisection on [0.5, 0.9], where the key rate is negative at the left
    end and positive at the right; iterates until the residual is within
    ``tolerance``.  Returns (v_star, epsilon_star).
    """
    if tolerance <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    lo, hi = 0.5, 0.9
    f_lo, f_hi = key_rate(lo), key_rate(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        # Cannot happen for this fixed function; guard retained.
        raise ArithmeticError(f"bisection bracket lost: f({lo})={f_lo}, f({hi})={f_hi}")
    for _ in range(500):
        mid = 0.5 * (lo + hi)
        f_mid = key_rate(mid)
        if abs(f_mid) <= tolerance:
            return mid, epsilon_of_visibility(mid)
        if f_mid > 0.0:
            hi = mid
        else:
            lo = mid
    raise ArithmeticError(f"bisection did not reach |residual| <= {tolerance}")


@dataclass(frozen=True)
class SecurityReport:
    """Analytic and estimated security quantities for one session."""

    upsilon: float | None
    visibility_analytic: float
    visibility_estimate: float
    visibility_se: float
    epsilon_analytic: float
    epsilon_estimate: float
    epsilon_se: float
    i_bob: float
    i_eve: float
    key_rate: float
    secure: bool

    def as_dict(self) -> dict:
        return {
            "upsilon": self.upsilon,
            "visibility_analytic": self.visibility_analytic,
            "visibility_estimate": self.visibility_estimate,
            "visibility_se": self.visibility_se,
            "epsilon_analytic": self.epsilon_analytic,
            "epsilon_estimate": self.epsilon_estimate,
            "epsilon_se": self.epsilon_se,
            "i_bob": self.i_bob,
            "i_eve": self.i_eve,
            "key_rate": self.key_rate,
            "secure": self.secure,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def estimate_from_session(log: SessionLog) -> SecurityReport:
    """Estimate visibility and QBER from the disclosed check subset.

    Visibility is the fringe contrast (N_D1 - N_D0)/(N_D1 + N_D0) over
    disclosed both-reflect rounds; the error rate is the fraction of
    disclosed D0 rounds whose choices failed to anti-correlate.  Mutual
    informations, the key rate, and the secure flag are derived from the
    visibility estimate (clamped into [0, 1] against sampling noise).

    Raises:
        InsufficientCheckDataError: fewer than 100 disclosed both-reflect
            rounds.
    """
    both_reflect = (
        log.disclosed & (log.alice == _REFLECT) & (log.bob == _REFLECT)
    )
    n_d0 = int(np.sum(both_reflect & (log.outcome == _D0)))
    n_d1 = int(np.sum(both_reflect & (log.outcome == _D1)))
    n_ff = n_d0 + n_d1
    if n_ff < 100:
        raise InsufficientCheckDataError(
            f"need at least 100 disclosed Reflect/Reflect rounds, got {n_ff} "
            f"(D0: {n_d0}, D1: {n_d1}); increase n_rounds or check_fraction"
        )
    v_hat = (n_d1 - n_d0) / n_ff
    q = n_d0 / n_ff
    v_se = 2.0 * math.sqrt(q * (1.0 - q) / n_ff)

    check_d0 = log.disclosed & (log.outcome == _D0)
    n_check_d0 = int(np.sum(check_d0))
    n_not_anti = int(
        np.sum(check_d0 & (log.alice == _REFLECT) & (log.bob == _REFLECT))
    )
    if n_check_d0 > 0:
        eps_hat = n_not_anti / n_check_d0
        eps_se = math.sqrt(eps_hat * (1.0 - eps_hat) / n_check_d0)
    else:
        eps_hat = 0.0
        eps_se = 0.0

    upsilon = log.config.upsilon
    v_analytic = math.cos(upsilon) if upsilon is not None else 1.0
    v_clamped = min(max(v_hat, 0.0), 1.0)
    i_bob = 1.0 - binary_entropy(epsilon_of_visibility(v_clamped))
    i_eve = 1.0 - v_clamped
    rate = i_bob - i_eve
    return SecurityReport(
        upsilon=upsilon,
        visibility_analytic=v_analytic,
        visibility_estimate=v_hat,
        visibility_se=v_se,
        epsilon_analytic=epsilon_of_visibility(v_analytic),
        epsilon_estimate=eps_hat,
        epsilon_se=eps_se,
        i_bob=i_bob,
        i_eve=i_eve,
        key_rate=rate,
        secure=rate >= 0.0,
    )


def sweep_reports(
    upsilon_grid,
    n_rounds: int,
    seed: int = 0,
    check_fraction: float = 0.1,
    workers: int = 1,
) -> list[SecurityReport]:
    """Run one session per grid angle and estimate each, in input order."""
    reports = []
    for upsilon in upsilon_grid:
        config = SessionConfig(
            n_rounds=n_rounds,
            upsilon=float(upsilon),
            seed=seed,
            check_fraction=check_fraction,
        )
        reports.append(estimate_from_session(run_session(config, workers=workers)))
    return reports


#: Column order of the sweep CSV.
SWEEP_COLUMNS = (
    "upsilon",
    "visibility",
    "epsilon_analytic",
    "epsilon_estimate",
    "i_bob",
    "i_eve",
    "key_rate",
    "secure",
)


def sweep_csv(reports: list[SecurityReport]) -> str:
    """Render sweep reports as CSV, numeric fields at 12 significant digits."""
    lines = [",".join(SWEEP_COLUMNS)]
    for r in reports:
        lines.append(
            ",".join(
                (
                    f"{r.upsilon:.12g}",
                    f"{r.visibility_estimate:.12g}",
                    f"{r.epsilon_analytic:.12g}",
                    f"{r.epsilon_estimate:.12g}",
                    f"{r.i_bob:.12g}",
                    f"{r.i_eve:.12g}",
                    f"{r.key_rate:.12g}",
                    "true" if r.secure else "false",
                )
            )
        )
    return "\n".join(lines) + "\n"


def qber_from_key(log: SessionLog) -> float:
    """Positionwise mismatch rate of the sifted key (convenience wrapper)."""
    return sift(log).mismatch_rate()
