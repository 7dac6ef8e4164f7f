import math

import numpy as np
import pytest

from wavetank.basis import (
    ModalVector,
    SobolevScale,
    SpectralParams,
    eval_basis,
    eval_function,
    norm,
    project,
    quadrature_nodes,
    sobolev_weights,
)


def test_eval_basis_values():
    assert eval_basis(0, 0.3) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-15)
    assert eval_basis(1, 0.0) == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-15)
    # cos(pi) = -1
    assert eval_basis(2, math.pi / 2) == pytest.approx(-math.sqrt(2.0 / math.pi), rel=1e-12)


def test_eval_basis_domain_and_index_errors():
    with pytest.raises(ValueError):
        eval_basis(1, -0.1)
    with pytest.raises(ValueError):
        eval_basis(1, math.pi + 0.1)
    with pytest.raises(ValueError):
        eval_basis(-1, 0.5)
    with pytest.raises(ValueError):
        eval_function(ModalVector.zeros(2), np.array([0.5, 3.5]))


def test_eval_function_values():
    v = ModalVector.zeros(4)
    x = np.linspace(0, math.pi, 7)
    assert np.all(eval_function(v, x) == 0.0)
    const = ModalVector(np.array([math.sqrt(math.pi), 0.0, 0.0]))
    assert eval_function(const, 1.234) == pytest.approx(1.0, rel=1e-15)
    e1 = ModalVector.unit(1, 3)
    assert eval_function(e1, math.pi) == pytest.approx(-math.sqrt(2.0 / math.pi), rel=1e-12)


def test_project_zero_and_constants():
    params = SpectralParams(mu=1.0, K=8)
    z = project(lambda x: np.zeros_like(x), params)
    assert np.all(z.coeffs == 0.0)
    one = project(lambda x: np.ones_like(x), params)
    expected = np.zeros(9)
    expected[0] = math.sqrt(math.pi)
    np.testing.assert_allclose(one.coeffs, expected, atol=1e-13)


def test_project_cosine():
    params = SpectralParams(mu=1.0, K=8)
    v = project(np.cos, params)
    expected = np.zeros(9)
    expected[1] = math.sqrt(math.pi / 2.0)
    np.testing.assert_allclose(v.coeffs, expected, atol=1e-12)


def test_project_scalar_only_callable():
    params = SpectralParams(mu=1.0, K=4)
    v = project(lambda x: float(np.cos(x)), params)
    assert v.coeffs[1] == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-12)


def test_project_rejects_nonfinite():
    params = SpectralParams(mu=1.0, K=4)
    with pytest.raises(ValueError, match="finite"):
        project(lambda x: np.where(x > 1, np.inf, 1.0), params)


def test_norm_examples():
    z = ModalVector.zeros(6)
    assert norm(z, SobolevScale(0.0)) == 0.0
    assert norm(z, SobolevScale(1.7)) == 0.0
    e1 = ModalVector.unit(1, 6)
    assert norm(e1, 0.0) == pytest.approx(1.0, rel=1e-15)
    e3 = ModalVector.unit(3, 6)
    assert norm(e3, SobolevScale(0.5)) == pytest.approx(2.0, rel=1e-15)


def test_norm_mode0_weight_is_one_at_every_alpha():
    e0 = ModalVector.unit(0, 4)
    for alpha in (-1.0, -0.5, 0.0, 0.5, 2.0):
        assert norm(e0, alpha) == pytest.approx(1.0, rel=1e-15)


def test_norm_monotone_in_alpha():
    rng = np.random.default_rng(7)
    v = ModalVector(rng.standard_normal(33))
    alphas = (-1.0, -0.5, 0.0, 0.25, 0.5, 1.0)
    vals = [norm(v, a) for a in alphas]
    assert all(a <= b * (1 + 1e-15) for a, b in zip(vals, vals[1:]))


def test_orthonormality_under_quadrature():
    K = 64
    x, w = quadrature_nodes(K)
    basis = np.stack([np.asarray(eval_basis(k, x)) for k in range(K + 1)])
    gram = (basis * w) @ basis.T
    assert np.abs(gram - np.eye(K + 1)).max() < 1e-10


def test_projection_round_trip():
    K = 64
    rng = np.random.default_rng(11)
    v = ModalVector(rng.standard_normal(K + 1))
    back = project(lambda x: eval_function(v, x), SpectralParams(mu=0.5, K=K))
    assert np.abs(back.coeffs - v.coeffs).max() < 1e-8


def test_parseval():
    K = 48
    rng = np.random.default_rng(3)
    v = ModalVector(rng.standard_normal(K + 1))
    x, w = quadrature_nodes(K)
    quad = np.sum(w * eval_function(v, x) ** 2)
    assert quad == pytest.approx(norm(v, 0.0) ** 2, rel=1e-8)


def test_sobolev_weights_shape():
    w = sobolev_weights(5, 0.5)
    assert w[0] == 1.0
    np.testing.assert_allclose(w[1:], 1.0 + np.arange(1, 6))


def test_modal_vector_validation():
    with pytest.raises(ValueError):
        ModalVector(np.array([1.0, np.nan]))
    with pytest.raises(ValueError):
        ModalVector(np.ones((2, 2)))
    v = ModalVector(np.arange(3.0))
    assert v.K == 2
    with pytest.raises(ValueError):
        v + ModalVector(np.arange(4.0))
    w = 2.0 * v - v
    np.testing.assert_allclose(w.coeffs, v.coeffs)


def test_spectral_params_validation():
    with pytest.raises(ValueError, match="mu"):
        SpectralParams(mu=0.0)
    with pytest.raises(ValueError, match="mu"):
        SpectralParams(mu=1.5)
    with pytest.raises(ValueError, match="K"):
        SpectralParams(mu=0.5, K=0)
    with pytest.raises(ValueError, match="L_modes"):
        SpectralParams(mu=0.5, K=4, L_modes=0)


def test_sobolev_scale_validation():
    with pytest.raises(ValueError):
        SobolevScale(float("inf"))
