import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rowmerge.checks import awgn_llr, toy_spec
from rowmerge.codebuilder import CodeSpec
from rowmerge.codec import (
    SCLDecoder,
    all_messages,
    codeword_metric,
    decode_sc,
    decode_scl,
    encode,
    ml_oracle,
    polar_transform,
)
from rowmerge.polarmat import dense_matrix


def test_encode_examples():
    assert encode(CodeSpec.polar_like(2, [3]), [1]).tolist() == [1, 1, 1, 1]
    spec = CodeSpec(2, (1,), (0, 2), {3: 1}, 2)
    assert encode(spec, [1]).tolist() == [0, 0, 1, 1]
    assert not encode(toy_spec(), np.zeros(6, np.uint8)).any()
    with pytest.raises(ValueError):
        encode(spec, [1, 0])


def test_transform_matches_dense():
    rng = np.random.default_rng(0)
    u = rng.integers(0, 2, (20, 64), dtype=np.uint8)
    assert np.array_equal(polar_transform(u), u @ dense_matrix(6) % 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_linearity(seed):
    spec = toy_spec()
    rng = np.random.default_rng(seed)
    a, b = rng.integers(0, 2, (2, spec.k), dtype=np.uint8)
    assert np.array_equal(encode(spec, a ^ b), encode(spec, a) ^ encode(spec, b))


def test_injective():
    spec = toy_spec()
    cw = encode(spec, all_messages(spec.k))
    assert len(np.unique(cw, axis=0)) == 64


@pytest.mark.parametrize("L", [1, 2, 5, 32])
def test_noiseless_roundtrip(L):
    spec = toy_spec()
    rng = np.random.default_rng(L)
    for _ in range(20):
        msg = rng.integers(0, 2, spec.k, dtype=np.uint8)
        llr = np.where(encode(spec, msg) == 0, 4.0, -4.0)
        best = decode_scl(spec, llr, L)[0]
        assert np.array_equal(best.message, msg)
        assert np.array_equal(best.codeword, encode(spec, msg))
        assert best.path_metric == 0.0 and best.list_rank == 0


def test_results_sorted_and_consistent():
    spec = toy_spec()
    rng = np.random.default_rng(5)
    llr = awgn_llr(encode(spec, rng.integers(0, 2, spec.k, dtype=np.uint8)), spec.rate, 0.0, rng)
    res = decode_scl(spec, llr, 16)
    metrics = [r.path_metric for r in res]
    assert metrics == sorted(metrics) and len(res) == 16
    for r in res:
        assert np.array_equal(r.codeword, encode(spec, r.message))
        assert r.path_metric == pytest.approx(float(codeword_metric(llr, r.codeword)))


def test_scl_equals_ml_on_toy_code():
    spec = toy_spec()
    rng = np.random.default_rng(11)
    msgs = rng.integers(0, 2, (100, spec.k), dtype=np.uint8)
    llr = awgn_llr(encode(spec, msgs), spec.rate, 2.0, rng)
    out = SCLDecoder(spec, 64).decode(llr)
    for f in range(100):
        ml = ml_oracle(spec, llr[f])
        assert np.array_equal(out.codewords[f, 0], ml.codeword)
        assert out.metrics[f, 0] == pytest.approx(ml.path_metric)


def test_sign_flip_worsens_original():
    spec = toy_spec()
    msg = np.array([1, 0, 1, 1, 0, 1], np.uint8)
    llr = np.where(encode(spec, msg) == 0, 3.0, -3.0)
    flipped = decode_scl(spec, -llr, 64)[0]
    assert not np.array_equal(flipped.message, msg)
    assert codeword_metric(-llr, encode(spec, msg)) > flipped.path_metric


def test_ml_oracle_limits_and_ties():
    with pytest.raises(ValueError):
        ml_oracle(CodeSpec.polar_like(5, range(32 - 21, 32)), np.zeros(32))
    res = ml_oracle(toy_spec(), np.zeros(16))
    assert not res.message.any()  # every codeword ties; smallest message wins


def test_sc_is_list_of_one():
    spec = toy_spec()
    rng = np.random.default_rng(2)
    llr = rng.normal(0, 2, 16)
    assert np.array_equal(decode_sc(spec, llr).message, decode_scl(spec, llr, 1)[0].message)


def test_larger_list_never_hurts_on_paired_noise(code100):
    spec, _ = code100
    rng = np.random.default_rng(9)
    msgs = rng.integers(0, 2, (300, spec.k), dtype=np.uint8)
    llr = awgn_llr(encode(spec, msgs), spec.rate, 3.0, rng)
    errs = []
    for L in (1, 4, 16):
        out = SCLDecoder(spec, L).decode(llr)
        errs.append(int((out.messages[:, 0] != msgs).any(axis=1).sum()))
    assert errs[0] >= errs[1] >= errs[2]


def test_dynamic_constraints_on_every_path(code66):
    spec, _ = code66
    rng = np.random.default_rng(4)
    llr = awgn_llr(encode(spec, rng.integers(0, 2, (50, spec.k), dtype=np.uint8)), spec.rate, 1.0, rng)
    out = SCLDecoder(spec, 8).decode(llr)
    for pos, src in spec.dynamic_frozen.items():
        assert (out.u[..., pos] == out.u[..., src]).all()
    assert not out.u[..., list(spec.static_frozen)].any()


def test_infinite_llrs_are_clamped():
    spec = toy_spec()
    msg = np.ones(6, np.uint8)
    llr = np.where(encode(spec, msg) == 0, np.inf, -np.inf)
    best = decode_scl(spec, llr, 4)[0]
    assert np.array_equal(best.message, msg) and np.isfinite(best.path_metric)
