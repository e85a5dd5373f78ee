import numpy as np
import pytest

from tninv import (
    Spectrum,
    char_poly_relation,
    renyi,
    renyi_from_invariant,
    schmidt_from_jk,
    von_neumann,
    random_pure_state,
    density_from_pure,
    partial_trace,
    schmidt,
    pure_jk,
)

RNG = np.random.default_rng(515)


def random_spectrum(d, rng=RNG):
    p = rng.random(d)
    return Spectrum(p / p.sum())


def random_reduced(d, environment, seed):
    psi = random_pure_state((d, environment), seed=seed)
    rho = density_from_pure(psi)
    return partial_trace(rho, (d, environment), [0])


# ---------------------------------------------------------------- Spectrum


def test_spectrum_clamps_small_negatives():
    s = Spectrum([1.0, -1e-13, 1e-13])
    assert np.all(s.probs >= 0.0)


def test_spectrum_rejects_bad_input():
    with pytest.raises(ValueError):
        Spectrum([0.5, -1e-6, 0.5])
    with pytest.raises(ValueError):
        Spectrum([0.5, 0.4])  # sums to 0.9


def test_spectrum_from_density():
    s = Spectrum.from_density(np.eye(4) / 4)
    assert np.allclose(s.probs, 0.25)


# ------------------------------------------------------------------- Renyi


def test_renyi_pure_spectrum_is_zero():
    s = Spectrum([1.0, 0.0, 0.0])
    for alpha in (0.5, 2, 3, 7.2):
        assert renyi(s, alpha) == pytest.approx(0.0, abs=1e-12)


def test_renyi_uniform_is_log_d():
    s = Spectrum([0.25] * 4)
    for alpha in (0.5, 2, 3):
        assert renyi(s, alpha) == pytest.approx(np.log(4), abs=1e-12)


def test_renyi_two_level_closed_form():
    p = 0.37
    s = Spectrum([p, 1 - p])
    want = -np.log(p**2 + (1 - p) ** 2)
    assert abs(renyi(s, 2) - want) < 1e-12


def test_renyi_rejects_bad_alpha():
    s = Spectrum([0.5, 0.5])
    with pytest.raises(ValueError):
        renyi(s, 0)
    with pytest.raises(ValueError):
        renyi(s, -2)
    with pytest.raises(ValueError):
        renyi(s, 1)


def test_renyi_monotone_in_alpha():
    for _ in range(100):
        s = random_spectrum(5)
        vals = [renyi(s, a) for a in (0.5, 2, 3, 4)]
        assert all(vals[i] >= vals[i + 1] - 1e-12 for i in range(3))


# ------------------------------------------------------------- von Neumann


def test_von_neumann_cases():
    assert von_neumann(Spectrum([1.0, 0.0])) == 0.0
    assert von_neumann(Spectrum([0.5, 0.5])) == pytest.approx(np.log(2), abs=1e-12)


def test_von_neumann_is_renyi_limit():
    for _ in range(5):
        s = random_spectrum(4)
        below = renyi(s, 1 - 1e-5)
        above = renyi(s, 1 + 1e-5)
        svn = von_neumann(s)
        assert abs(below - svn) < 1e-3
        assert abs(above - svn) < 1e-3


def test_product_state_has_zero_entropy():
    psi = random_pure_state((2,), seed=1)
    prod = np.outer(psi.data, random_pure_state((3,), seed=2).data)
    from tninv import Tensor

    rho = density_from_pure(Tensor(prod))
    red = partial_trace(rho, (2, 3), [0])
    s = Spectrum.from_density(red)
    assert von_neumann(s) == pytest.approx(0.0, abs=1e-10)
    for alpha in (0.5, 2, 3):
        assert renyi(s, alpha) == pytest.approx(0.0, abs=1e-10)


# -------------------------------------------------------- invariant bridge


def test_renyi_from_invariant_trivial():
    assert renyi_from_invariant(1.0, 2) == 0.0
    assert renyi_from_invariant(1.0, 5) == 0.0


def test_renyi_from_invariant_bell():
    assert renyi_from_invariant(0.5, 2) == pytest.approx(np.log(2), abs=1e-12)


def test_renyi_from_invariant_rejects():
    with pytest.raises(ValueError):
        renyi_from_invariant(0.0, 2)
    with pytest.raises(ValueError):
        renyi_from_invariant(-0.5, 2)
    with pytest.raises(ValueError):
        renyi_from_invariant(0.5, 1)
    with pytest.raises(ValueError):
        renyi_from_invariant(0.5, 2.5)


def test_renyi_from_invariant_matches_spectrum():
    psi = random_pure_state((2,) * 5, seed=77)
    red = partial_trace(density_from_pure(psi), (2,) * 5, [0, 1])
    spec = Spectrum.from_density(red)
    j3 = pure_jk(psi, ([0, 1], [2, 3, 4]), 3)
    assert abs(renyi_from_invariant(j3, 3) - renyi(spec, 3)) < 1e-9


# ----------------------------------------------------- characteristic poly


def test_char_poly_maximally_mixed_qubit():
    rel = char_poly_relation(np.eye(2) / 2)
    a, b = rel.coeffs.coeffs
    assert a == pytest.approx(-1.0, abs=1e-12)
    assert b == pytest.approx(0.25, abs=1e-12)
    assert rel.residual == pytest.approx(0.0, abs=1e-14)


def test_char_poly_random_dim4():
    for seed in range(20):
        rho = random_reduced(4, 4, seed)
        rel = char_poly_relation(rho)
        assert rel.residual <= 1e-8
        assert rel.trace_residual <= 1e-9  # traced Cayley-Hamilton
        assert abs(rel.residual - rel.trace_residual) < 1e-10


def test_char_poly_pure_reduced_state():
    psi = random_pure_state((4,), seed=4)
    rho = density_from_pure(psi)
    rel = char_poly_relation(rho)
    # all tr(rho^k) = 1: the polynomial evaluated at 1 vanishes
    assert rel.residual < 1e-10


def test_char_poly_rejects_large_dimension():
    with pytest.raises(ValueError):
        char_poly_relation(np.eye(9) / 9)


# --------------------------------------------------------------- J_k solve


def test_schmidt_from_jk_bell():
    sig = schmidt_from_jk([1.0, 0.5])
    assert np.allclose(sig**2, [0.5, 0.5], atol=1e-12)


def test_schmidt_from_jk_product():
    sig = schmidt_from_jk([1.0, 1.0])
    assert np.allclose(sig**2, [1.0, 0.0], atol=1e-12)


def test_schmidt_from_jk_rejects_inconsistent():
    with pytest.raises(ValueError):
        schmidt_from_jk([1.0, 1.5])  # J2 > J1^2
    with pytest.raises(ValueError):
        schmidt_from_jk([1.0, 0.4])  # J1^2 > 2 J2


def test_schmidt_from_jk_roundtrip_d3():
    sig = np.array([0.7, 0.6, np.sqrt(1 - 0.49 - 0.36)])
    j = [float(np.sum(sig ** (2 * k))) for k in (1, 2, 3)]
    rec = schmidt_from_jk(j)
    back = [float(np.sum(rec ** (2 * k))) for k in (1, 2, 3)]
    assert np.max(np.abs(np.array(back) - np.array(j))) < 1e-8
    assert np.allclose(rec, np.sort(sig)[::-1], atol=1e-8)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_schmidt_from_jk_roundtrip_random(d):
    for seed in range(5):
        psi = random_pure_state((d, d + 1), seed=seed)
        sig = schmidt(psi, ([0], [1])).sigma
        j = [float(np.sum(sig ** (2 * k))) for k in range(1, d + 1)]
        rec = schmidt_from_jk(j)
        assert np.max(np.abs(rec - np.sort(sig)[::-1])) < 1e-8


def test_schmidt_from_jk_limits():
    with pytest.raises(ValueError):
        schmidt_from_jk([])
    with pytest.raises(ValueError):
        schmidt_from_jk([1.0] * 9)
