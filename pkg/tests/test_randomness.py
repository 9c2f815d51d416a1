"""Tests for the counter-based stream factory."""

import numpy as np
import pytest

from scqkd.randomness import philox_stream


class TestPhiloxStream:
    def test_identical_keys_reproduce_identical_draws(self):
        a = philox_stream(42, 0).random(64)
        b = philox_stream(42, 0).random(64)
        np.testing.assert_array_equal(a, b)

    def test_distinct_stream_ids_differ(self):
        a = philox_stream(42, 0).random(64)
        b = philox_stream(42, 1).random(64)
        assert not np.array_equal(a, b)

    def test_distinct_seeds_differ(self):
        a = philox_stream(42, 0).random(64)
        b = philox_stream(43, 0).random(64)
        assert not np.array_equal(a, b)

    def test_full_64_bit_seed_range_accepted(self):
        philox_stream(2**64 - 1, 2**64 - 1).random(4)

    @pytest.mark.parametrize("seed,stream", [(-1, 0), (2**64, 0), (0, -1)])
    def test_out_of_range_keys_rejected(self, seed, stream):
        with pytest.raises(ValueError):
            philox_stream(seed, stream)

    def test_streams_do_not_see_each_other(self):
        # Drawing from one stream never perturbs another.
        a = philox_stream(7, 0)
        b = philox_stream(7, 1)
        b.random(1000)
        interleaved = a.random(16)
        np.testing.assert_array_equal(interleaved, philox_stream(7, 0).random(16))
