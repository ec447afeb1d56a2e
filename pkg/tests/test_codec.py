import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ldgp import GrayImage, encode_pair, ldgp_code, ldgp_image

from conftest import random_image


class TestEncodePair:
    @pytest.mark.parametrize("a,b,expected", [(1, -3, 1), (1, 2, 0), (5, 5, 0)])
    def test_examples(self, a, b, expected):
        assert encode_pair(a, b) == expected

    @given(st.integers(-5000, 5000), st.integers(-5000, 5000))
    def test_antisymmetry_and_irreflexivity(self, a, b):
        if encode_pair(a, b) == 1:
            assert encode_pair(b, a) == 0
        assert encode_pair(a, a) == 0

    @given(st.integers(-5000, 5000), st.integers(-5000, 5000))
    def test_definition(self, a, b):
        assert encode_pair(a, b) == (1 if a > b else 0)


class TestLdgpCode:
    def test_worked_example_is_48(self):
        assert ldgp_code(1, -3, -1, 2) == 0b110000 == 48

    def test_all_ties_give_zero(self):
        assert ldgp_code(0, 0, 0, 0) == 0

    def test_strictly_decreasing_gives_63(self):
        assert ldgp_code(3, 2, 1, 0) == 63

    @given(st.tuples(*[st.integers(-1000, 1000)] * 4))
    def test_range(self, vals):
        assert 0 <= ldgp_code(*vals) <= 63


class TestLdgpImage:
    def test_constant_image_all_zero(self):
        img = GrayImage(np.full((5, 4), 9, dtype=np.uint8))
        for n in (2, 3, 4):
            assert not ldgp_image(img, n).codes.any()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_bruteforce_oracle(self, rng, n):
        img = random_image(rng, 7, 6)
        got = ldgp_image(img, n).codes
        assert got.tolist() == oracles.ldgp(img.pixels.tolist(), n)

    def test_order3_equals_two_explicit_first_order_passes(self, rng):
        img = random_image(rng, 6, 6)
        grid = img.pixels.tolist()
        fields = []
        for name in oracles.DIRECTION_ORDER:
            dx, dy = oracles.OFFSETS[name]
            once = oracles.derivative(grid, dx, dy, 1)
            fields.append(oracles.derivative(once, dx, dy, 1))
        expected = [
            [
                int("".join(
                    "1" if fields[a][y][x] > fields[b][y][x] else "0"
                    for a, b in oracles.PAIRS
                ), 2)
                for x in range(img.width)
            ]
            for y in range(img.height)
        ]
        assert ldgp_image(img, 3).codes.tolist() == expected

    def test_codes_fit_six_bits(self, rng):
        img = random_image(rng, 9, 9)
        ci = ldgp_image(img, 2)
        assert ci.code_bits == 6
        assert ci.codes.max() <= 63

    def test_gray_shift_invariance(self, rng):
        base = rng.integers(0, 200, size=(8, 8), dtype=np.int64)
        a = ldgp_image(GrayImage(base), 2).codes
        b = ldgp_image(GrayImage(base + 40), 2).codes
        assert np.array_equal(a, b)

    def test_positive_scale_invariance(self, rng):
        base = rng.integers(0, 85, size=(8, 8), dtype=np.int64)
        a = ldgp_image(GrayImage(base), 3).codes
        b = ldgp_image(GrayImage(3 * base), 3).codes
        assert np.array_equal(a, b)

    def test_dimensions_preserved(self, rng):
        img = random_image(rng, 5, 11)
        ci = ldgp_image(img, 2)
        assert (ci.width, ci.height) == (11, 5)

    def test_order_bounds(self, rng):
        img = random_image(rng, 4, 4)
        with pytest.raises(ValueError):
            ldgp_image(img, 1)
        with pytest.raises(ValueError):
            ldgp_image(img, 22)
        ldgp_image(img, 21)  # derivative order 20 is the cap
