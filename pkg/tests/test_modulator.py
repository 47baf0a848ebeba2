import functools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmdstego.codebook import build_codebook
from dmdstego.modulator import (
    COVERING_RADIUS,
    EncodeResult,
    NormalizationParams,
    decode_field,
    encode_field,
    normalize_field,
    quantize_field,
    select_patterns,
)
from dmdstego.stego import StegoKey
from dmdstego.superpixel import MAX_MODULUS, codes_to_mirrors


def random_field(rng, shape, scale=3.0):
    return rng.normal(scale=scale, size=shape) + 1j * rng.normal(scale=scale, size=shape)


def test_params_validation():
    NormalizationParams(peak_fraction=1.0)
    NormalizationParams(peak_fraction=0.1)
    for bad in (0.0, -0.5, 1.0001):
        with pytest.raises(ValueError):
            NormalizationParams(peak_fraction=bad)


def test_normalize_scales_peak():
    rng = np.random.default_rng(0)
    field = random_field(rng, (20, 30))
    for pf in (0.8, 0.3, 1.0):
        scaled, scale = normalize_field(field, NormalizationParams(peak_fraction=pf))
        assert np.abs(scaled).max() == pytest.approx(pf * MAX_MODULUS, rel=1e-12)
        assert np.allclose(scaled, field * scale)


def test_normalize_zero_field():
    scaled, scale = normalize_field(np.zeros((4, 4), dtype=complex))
    assert scale == 1.0
    assert np.all(scaled == 0)


def test_normalize_upscales_small_fields():
    field = np.full((2, 2), 1e-3 + 0j)
    _, scale = normalize_field(field)
    assert scale > 1


def test_normalize_rejects_bad_input():
    with pytest.raises(ValueError):
        normalize_field(np.zeros(5, dtype=complex))
    with pytest.raises(ValueError):
        normalize_field(np.array([[np.nan + 0j]]))
    with pytest.raises(ValueError):
        normalize_field(np.array([[np.inf + 0j]]))


def test_quantize_matches_scan(codebook):
    rng = np.random.default_rng(1)
    field = random_field(rng, (9, 7))
    plan = quantize_field(field, codebook)
    for i in range(9):
        for j in range(7):
            assert plan[i, j] == np.argmin(np.abs(codebook.values - field[i, j]))


def test_quantize_idempotent_on_codebook_values(codebook):
    rng = np.random.default_rng(2)
    plan = rng.integers(0, 6561, (15, 15), dtype=np.int64)
    assert np.array_equal(quantize_field(codebook.values[plan], codebook), plan)


def test_quantization_error_bounded_after_normalize(codebook):
    rng = np.random.default_rng(3)
    field = random_field(rng, (32, 32))
    scaled, _ = normalize_field(field)  # peak at 0.8 * MAX_MODULUS
    plan = quantize_field(scaled, codebook)
    err = np.abs(codebook.values[plan] - scaled)
    assert err.max() <= COVERING_RADIUS + 1e-12


def test_covering_radius_spot_check(codebook):
    rng = np.random.default_rng(4)
    r = np.sqrt(rng.uniform(0, 1, 3000)) * 0.8 * MAX_MODULUS
    t = rng.uniform(0, 2 * np.pi, 3000)
    pts = r * np.exp(1j * t)
    idx = codebook.nearest_values(pts)
    assert np.abs(codebook.values[idx] - pts).max() <= COVERING_RADIUS + 1e-12


def test_select_patterns_strategies(codebook):
    rng = np.random.default_rng(5)
    plan = rng.integers(0, 6561, (6, 8), dtype=np.int64)
    mins = select_patterns(plan, codebook, "min")
    maxs = select_patterns(plan, codebook, "max")
    starts = codebook.group_starts
    assert np.array_equal(mins, codebook.patterns_sorted[starts[plan]])
    assert np.array_equal(maxs, codebook.patterns_sorted[starts[plan + 1] - 1])


def test_select_patterns_random_needs_key(codebook):
    plan = np.zeros((2, 2), dtype=np.int64)
    with pytest.raises(ValueError):
        select_patterns(plan, codebook, "random")
    with pytest.raises(ValueError):
        select_patterns(plan, codebook, "bogus", key=StegoKey(seed=0))


def test_select_patterns_random_deterministic(codebook):
    rng = np.random.default_rng(6)
    plan = rng.integers(0, 6561, (10, 10), dtype=np.int64)
    a = select_patterns(plan, codebook, "random", key=StegoKey(seed=9))
    b = select_patterns(plan, codebook, "random", key=StegoKey(seed=9))
    c = select_patterns(plan, codebook, "random", key=StegoKey(seed=10))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(codebook.group_of_pattern[a], plan)


def test_encode_shapes_and_scale(codebook):
    rng = np.random.default_rng(7)
    field = random_field(rng, (12, 18))
    result = encode_field(field, codebook)
    assert isinstance(result, EncodeResult)
    assert result.plan.shape == (12, 18)
    assert result.mirrors.shape == (48, 72)
    assert result.mirrors.dtype == np.uint8
    assert result.scale == pytest.approx(0.8 * MAX_MODULUS / np.abs(field).max())


def test_encode_decode_round_trip_all_strategies(codebook):
    rng = np.random.default_rng(8)
    field = random_field(rng, (10, 14))
    scaled, _ = normalize_field(field)
    expected_plan = quantize_field(scaled, codebook)
    for strategy, key in [("min", None), ("max", None), ("random", StegoKey(seed=77))]:
        result = encode_field(field, codebook, strategy=strategy, key=key)
        plan, values = decode_field(result.mirrors, codebook)
        assert np.array_equal(plan, expected_plan), strategy
        assert np.array_equal(result.plan, expected_plan), strategy
        assert np.array_equal(values, codebook.values[expected_plan]), strategy


def test_decode_reports_exact_codebook_values(codebook):
    rng = np.random.default_rng(9)
    plan = rng.integers(0, 6561, (5, 5), dtype=np.int64)
    mirrors = select_patterns(plan, codebook, "min")
    got_plan, got_values = decode_field(codes_to_mirrors(mirrors), codebook)
    assert np.array_equal(got_plan, plan)
    assert np.array_equal(got_values, codebook.values[plan])


def test_decoded_values_close_to_input(codebook):
    rng = np.random.default_rng(10)
    field = random_field(rng, (16, 16))
    result = encode_field(field, codebook)
    _, values = decode_field(result.mirrors, codebook)
    assert np.abs(values - field * result.scale).max() <= COVERING_RADIUS + 1e-12


@functools.lru_cache(maxsize=1)
def _cb():
    return build_codebook()


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_plan_independent_of_strategy(seed):
    cb = _cb()
    rng = np.random.default_rng(seed)
    field = random_field(rng, (6, 6))
    plans = [
        encode_field(field, cb, strategy="min").plan,
        encode_field(field, cb, strategy="max").plan,
        encode_field(field, cb, strategy="random", key=StegoKey(seed=seed)).plan,
    ]
    assert np.array_equal(plans[0], plans[1])
    assert np.array_equal(plans[0], plans[2])
