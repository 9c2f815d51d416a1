"""Unit tests for the eavesdropper: POVM measurement, guessing, information."""

import math

import numpy as np
import pytest

from scqkd.core import Choice, Outcome, build_povm, probe_pair, terminal_distribution
from scqkd.eve import (
    EveConfig,
    EveOutcome,
    eve_guess,
    eve_information,
    eve_measure,
)
from scqkd.protocol import Announcement, SessionConfig, run_session, sift

UPSILONS = (math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)


class TestEveConfig:
    @pytest.mark.parametrize("upsilon", [0.0, -0.1, math.pi / 2 + 0.01])
    def test_inactive_or_out_of_range_angles_rejected(self, upsilon):
        with pytest.raises(ValueError, match="upsilon"):
            EveConfig(upsilon=upsilon)

    def test_valid_angle_accepted(self):
        assert EveConfig(upsilon=math.pi / 4).upsilon == math.pi / 4


class TestEveMeasure:
    @pytest.mark.parametrize("upsilon", UPSILONS)
    def test_plus_never_fires_on_the_minus_state(self, upsilon):
        povm = build_povm(upsilon)
        _, minus = probe_pair(upsilon)
        probs = povm.outcome_probabilities(minus)
        assert probs[0] == pytest.approx(0.0, abs=1e-12)
        rng = np.random.default_rng(1)
        assert all(
            eve_measure(minus, povm, rng) is not EveOutcome.PLUS for _ in range(5_000)
        )

    @pytest.mark.parametrize("upsilon", UPSILONS)
    def test_conclusive_probability_on_plus_state(self, upsilon):
        povm = build_povm(upsilon)
        plus, _ = probe_pair(upsilon)
        probs = povm.outcome_probabilities(plus)
        assert probs[0] == pytest.approx(1.0 - math.cos(upsilon), abs=1e-12)
        n = 100_000
        rng = np.random.default_rng(2)
        hits = sum(eve_measure(plus, povm, rng) is EveOutcome.PLUS for _ in range(n))
        p = 1.0 - math.cos(upsilon)
        sigma = math.sqrt(max(p * (1 - p), 1e-12) / n)
        assert abs(hits / n - p) <= 4 * sigma

    def test_orthogonal_probes_are_always_identified(self):
        povm = build_povm(math.pi / 2)
        plus, _ = probe_pair(math.pi / 2)
        rng = np.random.default_rng(3)
        assert all(
            eve_measure(plus, povm, rng) is EveOutcome.PLUS for _ in range(2_000)
        )


class TestEveGuess:
    def test_guess_map_matches_the_arm_probe_correlation(self):
        # Oracle: the conditional D0 probes of the two anti-correlated cases.
        plus, minus = probe_pair(math.pi / 3)
        external = terminal_distribution(Choice.ABSORB, Choice.REFLECT, math.pi / 3)
        internal = terminal_distribution(Choice.REFLECT, Choice.ABSORB, math.pi / 3)
        assert abs(np.vdot(plus, external.probe(Outcome.D0))) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(minus, internal.probe(Outcome.D0))) == pytest.approx(1.0, abs=1e-12)
        # Plus tags the external arm: Alice absorbed, shared bit 0.
        assert eve_guess(EveOutcome.PLUS, Announcement.D0) == 0
        # Minus tags the internal arm: Alice reflected, shared bit 1.
        assert eve_guess(EveOutcome.MINUS, Announcement.D0) == 1

    def test_inconclusive_yields_no_guess(self):
        assert eve_guess(EveOutcome.INCONCLUSIVE, Announcement.D0) is None

    def test_plain_string_announcement_accepted(self):
        assert eve_guess(EveOutcome.PLUS, "D0") == 0

    def test_non_d0_round_rejected(self):
        with pytest.raises(ValueError, match="D0"):
            eve_guess(EveOutcome.PLUS, Announcement.NOT_D0)


class TestEveInformation:
    def test_boundary_values(self):
        assert eve_information(0.0) == 0.0
        assert eve_information(math.pi / 2) == pytest.approx(1.0, abs=1e-12)

    def test_intermediate_value(self):
        assert eve_information(math.pi / 3) == pytest.approx(0.5, abs=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="upsilon"):
            eve_information(-0.5)


class TestSessionAttackStatistics:
    @pytest.mark.parametrize("upsilon", [math.pi / 3, math.pi / 2])
    def test_conclusive_rate_matches_information_on_key_rounds(self, upsilon):
        log = run_session(SessionConfig(n_rounds=200_000, upsilon=upsilon, seed=7))
        key = sift(log)
        n_key = int(key.key_bit_mask().sum())
        p = eve_information(upsilon)
        sigma = math.sqrt(max(p * (1 - p), 1e-12) / n_key)
        assert abs(key.eve_conclusive_rate() - p) <= max(4 * sigma, 1e-12)

    @pytest.mark.parametrize("upsilon", UPSILONS)
    def test_conclusive_guesses_are_never_wrong(self, upsilon):
        log = run_session(SessionConfig(n_rounds=100_000, upsilon=upsilon, seed=8))
        key = sift(log)
        assert key.eve_guess_errors() == 0

    def test_error_rounds_carry_no_shared_bit_but_a_conclusive_probe(self):
        # Both-reflect D0 rounds: the stored probe lies outside the
        # two-state ensemble and the measurement is conclusive on it with
        # certainty, but the parties' bits disagree.
        log = run_session(SessionConfig(n_rounds=200_000, upsilon=math.pi / 3, seed=9))
        key = sift(log)
        mismatched = ~key.key_bit_mask()
        assert mismatched.any()
        assert (key.eve_guesses[mismatched] >= 0).all()
