import math

import numpy as np
import pytest

from nucembed.diagonal import DenseOperator, DiagonalOperator, diag_nuclear_exact, diag_op_norm_exact
from nucembed.oracles import ORACLE_MAX_DIM, OracleScaleError, dense_op_norm_oracle, diag_nuclear_oracle
from nucembed.spaces import MixedSpaceSpec


def test_zero_operator():
    D = DiagonalOperator.between(np.zeros(3), (2, 1), 1, 2, 3, "inf")
    assert diag_nuclear_oracle(D).value == 0


def test_identity_l2():
    D = DiagonalOperator.between(np.ones(2), (2,), 2, 2, 2, 2)
    cert = diag_nuclear_oracle(D)
    assert cert.value == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_allclose(cert.witness.values, [1, 1], rtol=1e-12)
    assert cert.method == "trace_dual_oracle"


def test_random_mixed_within_tolerance():
    rng = np.random.default_rng(11)
    D = DiagonalOperator.between(rng.standard_normal(5), (2, 3), "4/3", 3, 2, 1)
    exact = diag_nuclear_exact(D)
    assert abs(diag_nuclear_oracle(D, seed=3).value - exact) <= 1e-9 * (1 + exact)


def test_oracle_never_exceeds_exact():
    rng = np.random.default_rng(2)
    pool = [1, "4/3", 2, 3, "inf"]
    for _ in range(25):
        ex = [pool[i] for i in rng.integers(0, 5, 4)]
        D = DiagonalOperator.between(rng.standard_normal(4), (1, 3), *ex)
        assert diag_nuclear_oracle(D, budget=300).value <= diag_nuclear_exact(D) * (1 + 1e-12)


def test_dense_identity_and_rotation():
    spec = MixedSpaceSpec(3, "4/3", (2, 2))
    assert dense_op_norm_oracle(DenseOperator(np.eye(4), spec, spec), budget=500) >= 1 - 1e-12
    c = math.sqrt(0.5)
    l2 = MixedSpaceSpec(2, 2, (2,))
    R = DenseOperator(np.array([[c, -c], [c, c]]), l2, l2)
    assert dense_op_norm_oracle(R, budget=2000) == pytest.approx(1.0, abs=1e-9)


def test_dense_matches_diagonal_formula():
    rng = np.random.default_rng(7)
    D = DiagonalOperator.between(rng.standard_normal(5), (3, 2), 2, "inf", 3, 1)
    T = DenseOperator(D.matrix(), D.src, D.dst)
    assert dense_op_norm_oracle(T, budget=100_000) == pytest.approx(diag_op_norm_exact(D), abs=1e-6)


def test_dense_oracle_monotone_in_budget():
    rng = np.random.default_rng(1)
    src, dst = MixedSpaceSpec(2, 3, (2, 2)), MixedSpaceSpec("inf", "4/3", (2, 2))
    T = DenseOperator(rng.standard_normal((4, 4)), src, dst)
    vals = [dense_op_norm_oracle(T, budget=b, seed=5) for b in (50, 200, 1000, 4000)]
    assert vals == sorted(vals)
    assert dense_op_norm_oracle(T, budget=1000, seed=5) == vals[2]


def test_scale_guard():
    n = ORACLE_MAX_DIM + 1
    D = DiagonalOperator.between(np.ones(n), (n,), 2, 2, 2, 2)
    with pytest.raises(OracleScaleError):
        diag_nuclear_oracle(D)
