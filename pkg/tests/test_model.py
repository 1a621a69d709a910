import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_legendre

from cavchirp.model import (
    ModelParams,
    OperatorMatrix,
    build_basis,
    build_H0,
    cos_theta_coupling,
    cos_theta_matrix,
    dipole_matrix,
    field_quadrature_matrix,
    jc_dressed_spectrum,
    jc_hamiltonian,
    photon_number_matrix,
    verify_spectrum_numerically,
)


def brute_force_cos_element(J: int, Jp: int) -> float:
    """Oracle: <J,0|cos|Jp,0> by direct quadrature of normalized Legendre
    polynomials over the polar angle."""
    norm = lambda J: math.sqrt((2 * J + 1) / 2.0)

    def integrand(x, J=J, Jp=Jp):
        return norm(J) * eval_legendre(J, x) * x * norm(Jp) * eval_legendre(Jp, x)

    val, err = quad(integrand, -1.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    assert err < 1e-11
    return val


def test_cos_theta_elements_against_quadrature_oracle():
    for J, frozen in [(0, 0.5773502691896258), (1, 0.5163977794943222), (2, 0.5070925528371099)]:
        oracle = brute_force_cos_element(J, J + 1)
        assert cos_theta_coupling(J) == pytest.approx(oracle, abs=1e-10)
        assert cos_theta_coupling(J) == pytest.approx(frozen, rel=1e-12)
    # closed forms
    assert cos_theta_coupling(0) == pytest.approx(1 / math.sqrt(3), rel=1e-14)
    assert cos_theta_coupling(1) == pytest.approx(2 / math.sqrt(15), rel=1e-14)
    assert cos_theta_coupling(2) == pytest.approx(3 / math.sqrt(35), rel=1e-14)


def test_basis_counting_and_ordering():
    assert build_basis(4, 3).dim == 20
    assert build_basis(2, 1).dim == 6
    assert build_basis(1, 0).dim == 2  # (J_max+1)(n_max+1)
    b = build_basis(3, 2)
    labels = b.labels()
    # lexicographic in (n, J): J runs fastest
    assert labels[:5] == [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]
    for i, (J, n) in enumerate(labels):
        assert b.index(J, n) == i
    with pytest.raises(IndexError):
        b.index(4, 0)
    with pytest.raises(ValueError):
        build_basis(0, 2)


def test_operator_matrix_hermitian_flag():
    good = np.array([[1.0, 2.0], [2.0, 3.0]])
    OperatorMatrix(good)
    with pytest.raises(ValueError):
        OperatorMatrix(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_cos_theta_matrix_structure():
    basis = build_basis(4, 3)
    m = cos_theta_matrix(basis).matrix
    assert np.allclose(np.diag(m), 0.0)  # parity selection rule
    # block diagonal in n, couples only J <-> J+1
    for i, (J, n) in enumerate(basis.labels()):
        for j, (Jp, np_) in enumerate(basis.labels()):
            if m[i, j] != 0.0:
                assert n == np_ and abs(J - Jp) == 1
    assert m[basis.index(0, 2), basis.index(1, 2)] == pytest.approx(1 / math.sqrt(3))


def test_h0_construction():
    params = ModelParams()
    basis = build_basis(params.J_max, params.n_max)
    h = build_H0(params, basis).matrix
    i10 = basis.index(1, 0)
    assert h[i10, i10] == pytest.approx(2 * 9.242981181e-7, rel=1e-12)
    # coupling element fixed at -g between (J=0,n=0) and (J=1,n=1)
    assert h[basis.index(0, 0), basis.index(1, 1)] == pytest.approx(-params.g, rel=1e-12)
    # hermitian by construction
    assert np.max(np.abs(h - h.T)) < 1e-14 * np.max(np.abs(h))


def test_h0_decoupled_limit():
    params = ModelParams(g=1e-30)
    basis = build_basis(2, 1)
    h = build_H0(params, basis).matrix
    off = h - np.diag(np.diag(h))
    assert np.max(np.abs(off)) <= math.sqrt(3) * params.g


def test_photon_operators():
    basis = build_basis(1, 3)
    n_op = photon_number_matrix(basis).matrix
    assert n_op[basis.index(0, 2), basis.index(0, 2)] == 2.0
    quad_op = field_quadrature_matrix(basis).matrix
    assert quad_op[basis.index(0, 1), basis.index(0, 2)] == pytest.approx(math.sqrt(2))


def test_dressed_spectrum_values():
    spec = jc_dressed_spectrum(ModelParams())
    assert spec.omega_00 == 0.0
    assert spec.omega_minus0 == pytest.approx(1.66379e-6, abs=1e-11)
    assert spec.omega_plus0 == pytest.approx(2.03353e-6, abs=1e-11)
    # n=1 splitting is 2 g sqrt(2)
    split1 = spec.omega_plus[1] - spec.omega_minus[1]
    assert split1 == pytest.approx(2 * math.sqrt(2) * spec.g, rel=1e-12)
    # moments
    assert spec.M_plus0 == pytest.approx(1 / math.sqrt(6), rel=1e-14)
    assert spec.M_minus0 == pytest.approx(-1 / math.sqrt(6), rel=1e-14)
    assert math.hypot(spec.M_minus0, spec.M_plus0) == pytest.approx(
        0.5773502691896258, abs=1e-12
    )
    mu01 = ModelParams().mu / math.sqrt(3)
    assert spec.mu_tilde_plus0 == pytest.approx(math.sqrt(2) / 2 * mu01, rel=1e-14)
    assert spec.mu_tilde_minus0 == -spec.mu_tilde_plus0


def test_dressed_vectors_are_jc_eigenvectors():
    params = ModelParams()
    basis = build_basis(params.J_max, params.n_max)
    spec = jc_dressed_spectrum(params)
    h = jc_hamiltonian(params, basis).matrix
    for n in range(basis.n_max):
        for sign, omega in ((+1, spec.omega_plus[n]), (-1, spec.omega_minus[n])):
            v = spec.branch_vector(sign, n)
            assert np.linalg.norm(h @ v - omega * v) < 1e-12
    # orthonormality
    vs = [spec.ground_vector()] + [
        spec.branch_vector(s, n) for n in range(basis.n_max) for s in (+1, -1)
    ]
    gram = np.array([[u @ v for v in vs] for u in vs])
    assert np.max(np.abs(gram - np.eye(len(vs)))) < 1e-12


def test_resonance_identity():
    params = ModelParams()
    assert abs(params.omega_c - 2 * params.B) / params.omega_c < 1e-4


def test_verify_spectrum_numerically():
    params = ModelParams()
    report = verify_spectrum_numerically(params, build_basis(4, 3))
    assert report["max_abs_deviation"] < 1e-12
    # doubled coupling doubles the vacuum splitting
    doubled = ModelParams(omega_c=params.omega_c * 2, g=params.g * 2)
    r2 = verify_spectrum_numerically(doubled, build_basis(1, 1))
    lo, hi = r2["doublets"][0]["numeric"]
    lo1, hi1 = report["doublets"][0]["numeric"]
    assert (hi - lo) == pytest.approx(2 * (hi1 - lo1), rel=1e-12)
    # vanishing coupling: doublet collapses to the bare degenerate pair
    tiny = ModelParams(g=1e-20)
    r3 = verify_spectrum_numerically(tiny, build_basis(1, 1))
    lo, hi = r3["doublets"][0]["numeric"]
    assert hi - lo == pytest.approx(2e-20, rel=1e-6)
    assert r3["max_abs_deviation"] < 1e-12
    with pytest.raises(ValueError):
        verify_spectrum_numerically(params, build_basis(1, 0))


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(B=-1.0)
    with pytest.raises(ValueError):
        ModelParams(g=1e-6)  # g/omega_c far above the supported regime
    with pytest.raises(ValueError):
        ModelParams(J_max=0)
    with pytest.raises(ValueError):
        ModelParams(n_max=-1)


def test_dipole_matrix_scales_cos_theta():
    params = ModelParams()
    basis = build_basis(2, 1)
    d = dipole_matrix(params, basis).matrix
    c = cos_theta_matrix(basis).matrix
    assert np.allclose(d, params.mu * c)
