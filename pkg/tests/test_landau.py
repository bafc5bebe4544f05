"""Compression matrices, Jacobi spectra, oracle equivalence, and the
asymptotic ratio sequences they feed."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from landaucap.chebyshev import CapacityEstimate, capacity_estimate
from landaucap.errors import NonConvergenceError
from landaucap.landau import (
    LandauBasisSpec,
    _creation_pow,
    lemma1_sequences,
    level_q_matrix,
    lll_matrix,
    radial_oracle,
    rescaled_weight,
    spectrum,
    theorem_predictions,
    toeplitz_spectrum,
)
from landaucap.orthopoly import monic_orthogonalize, rho_estimates
from landaucap.region import Annulus, Disc, Polygon, region_key
from landaucap.weight import Constant, Generic, Radial, Weight, mixed_moments

UNIT_DISC = Weight(Disc(0j, 1.0), Constant(1.0))
SQUARE = Polygon((-0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j, -0.5 + 0.5j))


def g(a, x):
    return mp.gammainc(a, 0, x)


def q1_diag(n, r2):
    """Closed form for the level-1 diagonal over a centered disc."""
    if n == 0:
        return g(2, r2)
    return (n * n * g(n, r2) - 2 * n * g(n + 1, r2) + g(n + 2, r2)) / mp.factorial(n)


# ------------------------------------------------------------- basis spec

def test_basis_spec_validation():
    with pytest.raises(ValueError, match="nonnegative integer"):
        LandauBasisSpec(-1, 2.0, 4)
    with pytest.raises(ValueError, match="nonnegative integer"):
        LandauBasisSpec(1.5, 2.0, 4)
    with pytest.raises(ValueError, match="b0 must be positive"):
        LandauBasisSpec(0, 0.0, 4)
    with pytest.raises(ValueError, match="N must be >= q"):
        LandauBasisSpec(2, 2.0, 1)
    with pytest.raises(ValueError, match="N must be >= q"):
        level_q_matrix(UNIT_DISC, 2, 2.0, 1, 64)


# ------------------------------------------------------- ground-level matrix

def test_lll_disc_diagonal_closed_form():
    with mp.workprec(160):
        for r in (0.5, 1.0, 2.0):
            v = Weight(Disc(0j, r), Constant(1.0))
            T = lll_matrix(v, 2.0, 10, 128)
            r2 = mp.mpf(r) ** 2
            for j in range(11):
                exact = g(j + 1, r2) / mp.factorial(j)
                assert abs(T[j, j] - exact) / exact < mp.mpf(10) ** -30
            for j in range(11):
                for k in range(11):
                    if j != k:
                        assert T[j, k] == 0


def test_lll_t00_value():
    T = lll_matrix(UNIT_DISC, 2.0, 0, 128)
    with mp.workprec(160):
        exact = 1 - mp.exp(-1)
        assert abs(T[0, 0] - exact) / exact < mp.mpf(10) ** -35


def test_lll_generic_path_matches_radial():
    Tg = lll_matrix(UNIT_DISC, 2.0, 8, 128, method="generic")
    Tr = lll_matrix(UNIT_DISC, 2.0, 8, 128)
    with mp.workprec(160):
        diag_rel = max(abs(Tg[j, j] - Tr[j, j]) / abs(Tr[j, j]) for j in range(9))
        assert diag_rel < mp.mpf(10) ** -30
        # dense-path off-diagonals are rounding dust at the working floor
        maxdiag = max(abs(Tr[j, j]) for j in range(9))
        off = max(abs(Tg[j, k]) for j in range(9) for k in range(9) if j != k)
        assert off < mp.mpf(10) ** -35 * maxdiag


def test_lll_diagonal_bounded_by_ess_sup():
    w = Weight(SQUARE, Constant(0.75))
    T = lll_matrix(w, 2.0, 8, 128)
    with mp.workprec(128):
        for j in range(9):
            assert mp.re(T[j, j]) <= mp.mpf("0.75") * (1 + mp.mpf(10) ** -30)
            assert mp.re(T[j, j]) > 0


# ------------------------------------------------------------ level-q matrix

def test_creation_rule():
    assert _creation_pow(5, 0) == {(5, 0): 1}
    assert _creation_pow(5, 1) == {(4, 0): 5, (5, 1): -1}
    assert _creation_pow(0, 2) == {(0, 2): 1}
    assert _creation_pow(2, 2) == {(0, 0): 2, (1, 1): -4, (2, 2): 1}


def test_level_q_zero_identical_to_lll():
    v = Weight(Disc(0.4 + 0.1j, 0.7), Constant(1.0))
    A = lll_matrix(v, 2.0, 6, 128)
    B = level_q_matrix(v, 0, 2.0, 6, 128)
    for j in range(7):
        for k in range(7):
            assert A[j, k] == B[j, k]


def test_level_q1_disc_diagonal_closed_form():
    with mp.workprec(160):
        for r in (1.0, 1.3):
            v = Weight(Disc(0j, r), Constant(1.0))
            T = level_q_matrix(v, 1, 2.0, 8, 128)
            r2 = mp.mpf(r) ** 2
            for n in range(9):
                exact = q1_diag(n, r2)
                assert abs(T[n, n] - exact) / exact < mp.mpf(10) ** -25
            for j in range(9):
                for k in range(9):
                    if j != k:
                        assert T[j, k] == 0


def test_level_q1_unit_disc_tie():
    # the first three level-1 diagonal entries coincide at radius 1
    T = level_q_matrix(UNIT_DISC, 1, 2.0, 4, 128)
    with mp.workprec(160):
        exact = 1 - 2 * mp.exp(-1)
        for n in range(3):
            assert abs(T[n, n] - exact) / exact < mp.mpf(10) ** -30
        assert abs(T[3, 3] - exact) / exact > mp.mpf("0.01")


def test_level_q1_generic_path_matches_closed_form():
    T = level_q_matrix(UNIT_DISC, 1, 2.0, 6, 128, method="generic")
    with mp.workprec(160):
        for n in range(7):
            exact = q1_diag(n, mp.mpf(1))
            assert abs(T[n, n] - exact) / exact < mp.mpf(10) ** -25


def test_level_q2_closed_form_and_hermiticity():
    T = level_q_matrix(UNIT_DISC, 2, 2.0, 4, 128)
    with mp.workprec(160):
        # creation applied twice to z^0 gives conj(z)^2, so T00 = gamma(3,1)/2!
        exact = g(3, 1) / 2
        assert abs(T[0, 0] - exact) / exact < mp.mpf(10) ** -25
    v = Weight(Disc(0.3 + 0j, 0.8), Constant(1.0))
    D = level_q_matrix(v, 2, 2.0, 5, 128)
    with mp.workprec(256):  # above assembly precision, so conj is exact
        amax = max(abs(D[j, k]) for j in range(6) for k in range(6))
        for j in range(6):
            for k in range(6):
                assert D[j, k] == mp.conj(D[k, j])
            assert abs(mp.im(D[j, j])) <= mp.mpf(10) ** -35 * amax


# ----------------------------------------------------------------- spectrum

def test_spectrum_diagonal_exact():
    m = mp.matrix([[3, 0, 0], [0, 1, 0], [0, 0, 2]])
    sp = spectrum(m, 128)
    with mp.workprec(128):
        assert sp.log_eigs == (mp.log(3), mp.log(2), mp.log(1))
    assert sp.trusted_count == 3
    assert sp.matrix_residual == 0.0


def test_spectrum_2x2_complex_closed_form():
    m = [[mp.mpf(2), mp.mpc(0, 1)], [mp.mpc(0, -1), mp.mpf(1)]]
    sp = spectrum(m, 128)
    with mp.workprec(128):
        lam = ((3 + mp.sqrt(5)) / 2, (3 - mp.sqrt(5)) / 2)
        for got, want in zip(sp.eigenvalues(), lam):
            assert abs(got - want) / want < mp.mpf(10) ** -30


def test_spectrum_rejects_bad_input():
    with pytest.raises(ValueError, match="not Hermitian"):
        spectrum([[1.0, 0.5], [0.0, 1.0]], 64)
    with pytest.raises(ValueError, match="square"):
        spectrum([[1.0, 0.5]], 64)


def test_spectrum_trusted_floor():
    sp = toeplitz_spectrum(UNIT_DISC, 0, 2.0, 20, 48)
    eigs = sp.eigenvalues()
    with mp.workprec(48):
        floor = eigs[0] * mp.mpf(10) ** (-mp.mpf(48) / 3)
        recount = sum(1 for e in eigs if e > floor)
    assert sp.trusted_count == recount
    assert 0 < sp.trusted_count < 21
    trusted = eigs[: sp.trusted_count]
    assert all(e > 0 for e in trusted)
    assert all(a >= b for a, b in zip(trusted, trusted[1:]))


def test_spectrum_determinism_and_spec_field():
    v = Weight(Disc(0.5 + 0.2j, 0.8), Constant(1.0))
    s1 = toeplitz_spectrum(v, 1, 2.0, 7, 128)
    s2 = toeplitz_spectrum(v, 1, 2.0, 7, 128)
    assert s1.log_eigs == s2.log_eigs
    assert s1.spec == LandauBasisSpec(1, 2.0, 7)


def test_offcenter_continuity_at_small_shift():
    base = toeplitz_spectrum(UNIT_DISC, 0, 2.0, 10, 128)
    shifted = toeplitz_spectrum(Weight(Disc(1e-6 + 0j, 1.0), Constant(1.0)), 0, 2.0, 10, 128)
    with mp.workprec(128):
        for n in range(10):
            drift = abs(shifted.eigenvalues()[n] - base.eigenvalues()[n])
            assert drift < mp.mpf(10) ** -4


def test_truncation_interlacing():
    v = Weight(Disc(0.4 + 0j, 0.9), Constant(1.0))
    small = toeplitz_spectrum(v, 0, 2.0, 10, 128)
    large = toeplitz_spectrum(v, 0, 2.0, 15, 128)
    with mp.workprec(128):
        slack = 1 + mp.mpf(10) ** -25
        for n in range(10):
            assert small.eigenvalues()[n] <= large.eigenvalues()[n] * slack


def test_s1_below_ess_sup():
    v = Weight(Disc(0.2 + 0.1j, 1.1), Constant(0.6))
    sp = toeplitz_spectrum(v, 0, 2.0, 8, 128)
    with mp.workprec(128):
        assert sp.eigenvalues()[0] <= mp.mpf("0.6") * (1 + mp.mpf(10) ** -30)


# ------------------------------------------------------------ radial oracle

def test_radial_oracle_closed_values():
    sp = radial_oracle(UNIT_DISC, 2.0, 5)
    with mp.workprec(160):
        eigs = sp.eigenvalues()
        assert abs(eigs[0] - (1 - mp.exp(-1))) < mp.mpf(10) ** -30
        assert abs(eigs[1] - (1 - 2 * mp.exp(-1))) < mp.mpf(10) ** -30
    assert abs(float(eigs[0]) - 0.632120558829) < 1e-12
    assert abs(float(eigs[1]) - 0.264241117657) < 1e-12


def test_radial_oracle_requires_centered_radial():
    for w in (
        Weight(Disc(0.3 + 0j, 1.0), Constant(1.0)),
        Weight(SQUARE, Constant(1.0)),
        Weight(Disc(0j, 1.0), Generic(lambda z: 1.0 + 0 * abs(z), label="flat")),
    ):
        with pytest.raises(ValueError, match="oracle requires centered radial weight"):
            radial_oracle(w, 2.0, 4)


def test_radial_oracle_profile_quadrature():
    v = Weight(Disc(0j, 1.0), Radial(lambda r: r * r, poly_degree=2, label="rsq"))
    sp = radial_oracle(v, 2.0, 6, 192)
    with mp.workprec(256):
        exact = sorted((g(n + 2, 1) / mp.factorial(n) for n in range(7)), reverse=True)
        for a, b in zip(sp.eigenvalues(), exact):
            assert abs(a - b) / b < mp.mpf(10) ** -30


def test_radial_oracle_annulus():
    v = Weight(Annulus(0j, 0.5, 1.2), Constant(1.0))
    sp = radial_oracle(v, 2.0, 6, 160)
    with mp.workprec(224):
        # square the same binary doubles the annulus was built from
        lo2, hi2 = mp.mpf(0.5) ** 2, mp.mpf(1.2) ** 2
        exact = sorted(((g(n + 1, hi2) - g(n + 1, lo2)) / mp.factorial(n) for n in range(7)), reverse=True)
        for a, b in zip(sp.eigenvalues(), exact):
            assert abs(a - b) / b < mp.mpf(10) ** -30


def test_oracle_equivalence_of_spectrum():
    # contract tolerance 1e-8; dense path included for the unit radius
    for r in (0.5, 1.0, 2.0):
        v = Weight(Disc(0j, r), Constant(1.0))
        sp = toeplitz_spectrum(v, 0, 2.0, 16, 192)
        orc = radial_oracle(v, 2.0, 16, 192)
        nt = min(sp.trusted_count, orc.trusted_count)
        assert nt > 10
        with mp.workprec(192):
            for a, b in zip(sp.eigenvalues()[:nt], orc.eigenvalues()[:nt]):
                assert abs(a - b) / b < mp.mpf(10) ** -8
    dense = spectrum(lll_matrix(UNIT_DISC, 2.0, 12, 128, method="generic"), 128)
    orc = radial_oracle(UNIT_DISC, 2.0, 12, 128)
    with mp.workprec(128):
        nt = min(dense.trusted_count, orc.trusted_count)
        for a, b in zip(dense.eigenvalues()[:nt], orc.eigenvalues()[:nt]):
            assert abs(a - b) / b < mp.mpf(10) ** -30


def test_level_q_oracle_closed_form_q1():
    # Laguerre form must reproduce the direct expansion of |n z^(n-1) - zbar z^n|^2
    orc = radial_oracle(UNIT_DISC, 2.0, 10, 192, q=1)
    with mp.workprec(256):
        one = mp.mpf(1)
        vals = [g(2, one)]
        for n in range(1, 11):
            vals.append((n * n * g(n, one) - 2 * n * g(n + 1, one) + g(n + 2, one)) / mp.factorial(n))
        exact = sorted(vals, reverse=True)
        for a, b in zip(orc.eigenvalues(), exact):
            assert abs(a - b) / b < mp.mpf(10) ** -30
    assert orc.spec.q == 1


def test_level_q_oracle_matches_matrix():
    # independent derivations: Laguerre quadrature vs creation-coefficient assembly
    cases = [
        (UNIT_DISC, 1, 2.0, 16, 192),
        (UNIT_DISC, 2, 2.0, 12, 192),
        (Weight(Annulus(0j, 0.5, 1.2), Constant(1.0)), 1, 3.0, 8, 160),
        (Weight(Disc(0j, 1.0), Radial(lambda r: r * r, poly_degree=2, label="rsq")), 1, 2.0, 8, 160),
    ]
    for w, q, b0, N, p in cases:
        sp = toeplitz_spectrum(w, q, b0, N, p)
        orc = radial_oracle(w, b0, N, p, q=q)
        nt = min(sp.trusted_count, orc.trusted_count)
        assert nt > N // 2
        with mp.workprec(p):
            for a, b in zip(sp.eigenvalues()[:nt], orc.eigenvalues()[:nt]):
                assert abs(a - b) / b < mp.mpf(10) ** -8


def test_level_q_oracle_validation():
    with pytest.raises(ValueError, match="truncation N must be >= q"):
        radial_oracle(UNIT_DISC, 2.0, 1, 128, q=2)
    with pytest.raises(ValueError, match="q must be a nonnegative integer"):
        radial_oracle(UNIT_DISC, 2.0, 8, 128, q=-1)


# --------------------------------------------------------- field rescaling

def test_rescaled_weight_geometry():
    v = Weight(Disc(0.3 + 0j, 0.8), Constant(1.0))
    u = rescaled_weight(v, 8.0)  # eta = 2
    assert u.support == Disc(0.6 + 0j, 1.6)
    assert rescaled_weight(v, 2.0) is v
    with pytest.raises(ValueError, match="b0 must be positive"):
        rescaled_weight(v, 0.0)


def test_rescaling_consistency_against_direct_normalization():
    # same spectrum from the internal b0 -> 2 reduction and from normalizing
    # the field-b0 Gaussian moments directly (reduction exact, quadrature not)
    b0 = 3.7
    v = Weight(Disc(0.3 + 0j, 0.8), Constant(1.0))
    sp_int = toeplitz_spectrum(v, 0, b0, 8, 128)
    G = mixed_moments(v, "gaussian", maxdeg=8, precision_bits=128, b0=b0, method="generic")
    with mp.workprec(148):
        T = mp.matrix(9, 9)
        for j in range(9):
            for k in range(9):
                T[j, k] = G.raw_entry(j, k) * mp.e ** (
                    (mp.mpf(j + k + 2) / 2) * mp.log(mp.mpf(b0) / 2)
                    - mp.log(mp.pi)
                    - (mp.loggamma(j + 1) + mp.loggamma(k + 1)) / 2
                )
    sp_dir = spectrum(T, 128)
    with mp.workprec(128):
        nt = min(sp_int.trusted_count, sp_dir.trusted_count)
        assert nt > 5
        for a, b in zip(sp_int.eigenvalues()[:nt], sp_dir.eigenvalues()[:nt]):
            assert abs(a - b) / b < mp.mpf(10) ** -10


def test_general_b0_radial_closed_form():
    # b0 = 5 on the unit disc: s_{n+1} = gamma(n+1, 5/2)/n!
    with mp.workprec(256):
        exact = sorted((g(n + 1, mp.mpf(5) / 2) / mp.factorial(n) for n in range(7)), reverse=True)
    orc = radial_oracle(UNIT_DISC, 5.0, 6)
    mat = toeplitz_spectrum(UNIT_DISC, 0, 5.0, 6, 128)
    with mp.workprec(160):
        for a, b in zip(orc.eigenvalues(), exact):
            assert abs(a - b) / b < mp.mpf(10) ** -35
        for a, b in zip(mat.eigenvalues(), exact):
            assert abs(a - b) / b < mp.mpf(10) ** -12


# ------------------------------------------------------- asymptotic reports

def test_lemma1_first_entry_closed_forms():
    rep = lemma1_sequences(UNIT_DISC, 2.0, 12, 128)
    with mp.workprec(160):
        s2 = 1 - 2 * mp.exp(-1)
        m1 = mp.pi / 2
        assert abs(rep.lhs_sequence[0] - s2) / s2 < mp.mpf(10) ** -30
        assert abs(rep.rhs_sequence[0] - m1) / m1 < mp.mpf(10) ** -30
        assert abs(rep.ratio_sequence[0] - s2 / m1) / (s2 / m1) < mp.mpf(10) ** -25
    assert rep.n_values[0] == 1
    assert all(r > 0 for r in rep.ratio_sequence)


def test_lemma1_disc_window_and_trend():
    rep = lemma1_sequences(UNIT_DISC, 2.0, 40, 256)
    assert rep.trusted_n_max == 40
    with mp.workprec(256):
        # independent closed-form oracle: ratio_n = (gamma(n+1,1) (n+1)/pi)^(1/n)
        for n in (10, 20, 30):
            oracle = (g(n + 1, 1) * (n + 1) / mp.pi) ** (mp.mpf(1) / n)
            got = rep.ratio_sequence[n - 1]
            assert abs(got - oracle) / oracle < mp.mpf(10) ** -10
        r30 = rep.ratio_sequence[29]
        assert mp.mpf("0.85") < r30 < mp.mpf("1.15")
        # |ratio - 1| decreasing over the last third of trusted n
        tail = rep.ratio_sequence[-(len(rep.ratio_sequence) // 3):]
        gaps = [abs(r - 1) for r in tail]
        for a, b in zip(gaps, gaps[1:]):
            assert b <= a + mp.mpf(10) ** -3


def test_lemma1_validation_and_trust_error():
    with pytest.raises(ValueError, match="need N >= 4"):
        lemma1_sequences(UNIT_DISC, 2.0, 3, 128)
    tiny = Weight(Disc(0j, 0.05), Constant(1.0))
    with pytest.raises(NonConvergenceError, match="raise precision to extend the trusted spectral tail"):
        lemma1_sequences(tiny, 2.0, 8, 32)


def test_theorem_predictions_disc():
    v = Weight(Disc(0j, 1.3), Constant(1.0))
    plain = mixed_moments(v, "plain", maxdeg=40, precision_bits=256)
    rho = rho_estimates(monic_orthogonalize(plain))
    preds = theorem_predictions(v, 0, 2.0, rho, 1.3)
    with mp.workprec(256):
        rho_true = mp.mpf("1.69")
        t1 = preds["theorem1"]
        assert abs(t1["extrapolated"] - rho_true) / rho_true < mp.mpf("0.015")
        assert abs(t1["limsup"] - rho_true) / rho_true < mp.mpf("0.08")
        assert abs(t1["liminf"] - rho_true) / rho_true < mp.mpf("0.08")
        assert t1["limsup"] >= t1["liminf"]
        assert abs(preds["theorem2"]["limit"] - rho_true) < mp.mpf(10) ** -10
        t3 = preds["theorem3"]
        assert abs(t3["extrapolated"] - rho_true ** 2) / rho_true ** 2 < mp.mpf("0.03")
        la = preds["log_asymptote"]
        assert la["nlogn_coefficient"] == -1
        assert abs(la["linear_coefficient"] - 2 * mp.log(mp.mpf("1.3"))) < mp.mpf(10) ** -12
    # squares are formed at the precision in effect when predictions were made
    assert preds["theorem3"]["limsup"] == preds["theorem1"]["limsup"] ** 2
    assert preds["provenance"]["support"] == region_key(Disc(0j, 1.3))


def test_theorem_predictions_provenance_mismatch():
    v = Weight(Disc(0j, 1.3), Constant(1.0))
    plain = mixed_moments(v, "plain", maxdeg=20, precision_bits=128)
    rho = rho_estimates(monic_orthogonalize(plain))
    other = Weight(SQUARE, Constant(1.0))
    with pytest.raises(ValueError, match="provenance does not match this weight"):
        theorem_predictions(other, 0, 2.0, rho, 0.59)
    stale = CapacityEstimate([4], [0.6], [True], 0.6, [4], region_key=region_key(Disc(0j, 0.5)))
    with pytest.raises(ValueError, match="provenance does not match supp"):
        theorem_predictions(v, 0, 2.0, rho, stale)
    untagged = CapacityEstimate([4], [1.29], [True], 1.29, [4], region_key=None)
    preds = theorem_predictions(v, 0, 2.0, rho, untagged)
    assert abs(float(preds["theorem2"]["limit"]) - 1.29**2) < 1e-10


def test_theorem_predictions_square_q1():
    w = Weight(SQUARE, Constant(1.0))
    cap = capacity_estimate(SQUARE, degrees=(4, 8, 12, 16))
    plain = mixed_moments(w, "plain", maxdeg=16, precision_bits=128)
    rho = rho_estimates(monic_orthogonalize(plain))
    preds = theorem_predictions(w, 1, 2.0, rho, cap)
    known = 0.5901702995080481  # capacity of a unit-side square
    t2 = float(preds["theorem2"]["limit"])
    assert abs(t2 - float(mp.mpf(cap.extrapolated) ** 2)) < 1e-15
    assert abs(t2 - known**2) / known**2 < 0.1
    assert preds["q"] == 1


def test_theorem_predictions_rejects_bad_capacity():
    v = Weight(Disc(0j, 1.0), Constant(1.0))
    plain = mixed_moments(v, "plain", maxdeg=20, precision_bits=128)
    rho = rho_estimates(monic_orthogonalize(plain))
    with pytest.raises(ValueError, match="capacity must be positive"):
        theorem_predictions(v, 0, 2.0, rho, 0.0)


# ---------------------------------------------------------------- properties

@settings(max_examples=6, deadline=None)
@given(
    r=st.floats(min_value=0.4, max_value=1.6),
    a=st.floats(min_value=-0.4, max_value=0.4),
)
def test_spectrum_properties_random_discs(r, a):
    v = Weight(Disc(complex(a, 0), r), Constant(1.0))
    T = lll_matrix(v, 2.0, 6, 96)
    with mp.workprec(96):
        amax = max(abs(T[j, k]) for j in range(7) for k in range(7))
        for j in range(7):
            for k in range(7):
                assert abs(T[j, k] - mp.conj(T[k, j])) <= mp.mpf(10) ** -48 * amax
    sp = spectrum(T, 96)
    eigs = sp.eigenvalues()[: sp.trusted_count]
    assert sp.trusted_count >= 1
    with mp.workprec(96):
        assert all(e > 0 for e in eigs)
        assert all(x >= y for x, y in zip(eigs, eigs[1:]))
        assert eigs[0] <= 1 + mp.mpf(10) ** -25
