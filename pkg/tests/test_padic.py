import math
import random
from fractions import Fraction

import pytest

from hermlab.padic import (
    ENUMERATION_BOUND,
    ExactLocal,
    InexactDivision,
    LocalField,
    LocalMatrix,
    PrecisionError,
    ResidueElem,
    ResourceLimit,
    assert_unitary,
    classify_g_orbit,
    classify_k_orbit,
    diagonalize_x1,
    hensel_norm_solve,
    invariant_factors,
    is_member_X,
    j_matrix,
    k1_cell_counts,
    monte_carlo_omega1,
    norm_count,
    norm_residual,
    omega_n1_closed,
    random_k,
    sample_k1_haar,
    smallest_nonresidue,
    t_diag,
    x_lambda,
)
from hermlab.scalars import QFraction, QLaurent
from hermlab.spherical import omega_rank1_s_form

F3 = LocalField(3)
F5 = LocalField(5)


# -- scalar models ----------------------------------------------------------------


def test_field_validation():
    with pytest.raises(ValueError):
        LocalField(4)
    with pytest.raises(ValueError):
        LocalField(2)
    with pytest.raises(ValueError):
        LocalField(3, eps=4)  # 4 = 2^2 is a square mod 3... and everywhere
    assert smallest_nonresidue(3) == 2
    assert smallest_nonresidue(5) == 2
    assert smallest_nonresidue(7) == 3


def test_exact_local_algebra():
    x = ExactLocal(F3, Fraction(1, 2), 3)
    y = ExactLocal(F3, 2, Fraction(-1, 5))
    assert (x + y) - y == x
    assert x * y == y * x
    assert (x * y) * x.inverse() == y * (x * x.inverse())
    assert x * x.inverse() == ExactLocal(F3, 1)
    # norm is multiplicative and real
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.trace() == Fraction(1)
    assert x.conj().conj() == x
    # valuation of a product adds
    assert (x * y).valuation() == x.valuation() + y.valuation()


def test_exact_valuation():
    assert ExactLocal(F3, 9, 27).valuation() == 2
    assert ExactLocal(F3, Fraction(1, 3)).valuation() == -1
    assert ExactLocal(F3, 0, 6).valuation() == 1
    assert ExactLocal(F3, 0).valuation() == math.inf


def test_residue_arithmetic_and_precision():
    a = ResidueElem(F3, 6, 5, 1)
    b = ResidueElem(F3, 4, 2, 7)
    assert (a * b).m == 4  # precision caps at the weaker operand
    assert (a + b).m == 4
    u = a.unit_inverse()
    assert (a * u) == ResidueElem(F3, 6, 1)
    # dividing by pi costs certified digits
    c = ResidueElem(F3, 6, 9)
    assert c.val() == 2
    d = c.div_pi_power(2)
    assert d.m == 4 and d == ResidueElem(F3, 4, 1)
    with pytest.raises(PrecisionError):
        ResidueElem(F3, 3, 27).val()  # reads 0 mod 27: could hide deeper divisibility
    with pytest.raises(PrecisionError):
        ResidueElem(F3, 3, 9).div_pi_power(2)  # would leave < 2 digits
    with pytest.raises(InexactDivision):
        ResidueElem(F3, 5, 1) / ResidueElem(F3, 5, 3)


def test_residue_division_restores_pi_powers():
    num = ResidueElem(F3, 8, 18, 9)  # valuation 2... (18,9) = 9*(2,1), v=2
    den = ResidueElem(F3, 8, 3)
    quo = num / den
    assert quo * den == num.reduce(quo.m)


def test_norm_counts_frozen():
    # unit target, r = 0: 1 - q^-1 - q^-2
    assert norm_count(3, 1, 0) == Fraction(5, 9)
    assert norm_count(5, 1, 0) == Fraction(19, 25)
    # deeper shells: (1 - q^-2) q^-r
    assert norm_count(3, 1, 1) == Fraction(8, 27)
    assert norm_count(3, 2, 2) == Fraction(8, 81)
    assert norm_count(5, 3, 2) == Fraction(24, 625)


def test_norm_count_completeness():
    # the shell masses plus the undecided residual fill the whole torus exactly
    for p, xi, R in [(3, 1, 3), (3, 2, 4), (5, 1, 2)]:
        total = sum(norm_count(p, xi, r) for r in range(R + 1))
        assert total + norm_residual(p, xi, R + 1) == 1
        q = Fraction(p)
        assert norm_residual(p, xi, R + 1) == q ** -(R + 1) * (1 + 1 / q)


def test_norm_count_resource_guard():
    with pytest.raises(ResourceLimit):
        norm_count(997, 1, 3)
    with pytest.raises(ValueError):
        norm_count(3, 3, 0)  # target must be a unit


def test_hensel_norm_solve():
    rng = random.Random(11)
    for field in (F3, F5):
        p = field.p
        for _ in range(12):
            t = rng.randrange(1, p**4)
            if t % p == 0:
                t += 1
            alpha = hensel_norm_solve(field, t, 6)
            assert alpha.norm() == ResidueElem(field, alpha.m, t)
    # Fraction targets with unit denominator work too
    alpha = hensel_norm_solve(F3, Fraction(5, 7), 8)
    assert alpha.norm() == ResidueElem(F3, alpha.m, Fraction(5, 7))


# -- matrices ---------------------------------------------------------------------


def test_matrix_algebra_and_star():
    k = random_k(F3, 2, seed=3)
    m = random_k(F3, 2, seed=4)
    assert (k @ m).star() == m.star() @ k.star()
    assert_unitary(k @ m)
    j = j_matrix(F3, 5, "exact")
    assert j @ j == LocalMatrix.identity(F3, 5, "exact")


def test_matrix_shift_normalization():
    x = x_lambda(F3, 1, (2,))
    r = x.to_residue(8)
    assert r.shift == 2
    assert r == x.to_residue(10)  # equality sees through different shifts
    assert x.det() == ExactLocal(F3, 1)


def test_matmul_precision_cap():
    # a zero entry known only mod 3^2 must cap the certified digits of any
    # sum it participates in, even though it contributes no term
    a = LocalMatrix.from_values(
        F3, "residue", [[ResidueElem(F3, 2, 0), ResidueElem(F3, 9, 1)],
                        [ResidueElem(F3, 9, 1), ResidueElem(F3, 9, 0)]])
    b = LocalMatrix.from_values(
        F3, "residue", [[ResidueElem(F3, 9, 1), ResidueElem(F3, 9, 0)],
                        [ResidueElem(F3, 9, 0), ResidueElem(F3, 9, 1)]])
    prod = a @ b
    assert prod.rows[0][0].m == 2
    assert prod.rows[1][0].m == 9


def test_matrix_json_roundtrip():
    for mat in (
        x_lambda(F3, 2, (3, 1)),
        x_lambda(F5, 1, (2,), model="residue", prec=7),
        random_k(F3, 2, seed=9),
    ):
        again = LocalMatrix.from_json_dict(mat.to_json_dict())
        assert again == mat
        assert again.model == mat.model and again.shift == mat.shift


# -- the hermitian space ------------------------------------------------------------


def test_membership():
    assert is_member_X(x_lambda(F3, 1, (0,)))
    assert is_member_X(x_lambda(F3, 2, (3, 1)))
    assert is_member_X(x_lambda(F5, 2, (2, 2)))
    # integral hermitian but the wrong characteristic polynomial
    bad = LocalMatrix.diagonal(F3, [Fraction(3), Fraction(1), Fraction(3)], "exact")
    assert not is_member_X(bad)
    notherm = LocalMatrix.from_values(F3, "exact", [[0, 0, 1], [0, 1, 1], [1, 0, 0]])
    assert not is_member_X(notherm)


def test_random_k_is_unitary_with_trivial_factors():
    for field, n, seed in [(F3, 1, 0), (F3, 2, 1), (F5, 2, 2), (F3, 3, 3)]:
        k = random_k(field, n, seed=seed)
        assert_unitary(k)
        assert invariant_factors(k) == [0] * (2 * n + 1)
        assert k.det().norm() == 1


def test_classification_roundtrip():
    rng = random.Random(0)
    lams = {1: [(0,), (1,), (2,), (3,)], 2: [(0, 0), (1, 0), (1, 1), (2, 1), (3, 0)]}
    for n, lamlist in lams.items():
        for lam in lamlist:
            for trial in range(4):
                k = random_k(F3, n, seed=rng.randrange(10**6))
                x = k.act(x_lambda(F3, n, lam))
                assert is_member_X(x)
                assert classify_k_orbit(x) == lam
                # residue model agrees when given enough digits (elimination
                # spends them fast: the deepest case here needs 16)
                xr = x.to_residue(18)
                assert classify_k_orbit(xr) == lam


def test_classification_insufficient_precision():
    x = random_k(F3, 1, seed=8).act(x_lambda(F3, 1, (3,)))
    with pytest.raises(PrecisionError):
        classify_k_orbit(x.to_residue(3))


def test_g_orbit_parity_survives_torus_mixing():
    # the full-group invariant only sees |lambda| mod 2, so mixing by the
    # bigger torus must not change it even though the k-orbit moves
    x = x_lambda(F3, 2, (1, 0))
    assert classify_g_orbit(x) == 1
    t = t_diag(F3, [Fraction(3), Fraction(1, 9)])
    y = t.act(x)
    assert classify_g_orbit(y) == 1
    assert classify_k_orbit(y) != classify_k_orbit(x)
    assert classify_g_orbit(x_lambda(F3, 2, (2, 0))) == 0


# -- Haar sampling on the small unitary group ------------------------------------


def test_k1_cell_counts_frozen():
    big, small, union = k1_cell_counts(3)
    assert (big, small, union) == (23328, 864, 24192)
    # |U3| over the residue field: q^3 (q+1)(q^2-1)(q^3+1)
    q = 3
    assert union == q**3 * (q + 1) * (q**2 - 1) * (q**3 + 1)
    assert big == (q**2 - 1) * (q + 1) * q**6
    assert small == (q**2 - 1) * (q + 1) * q**3


def test_sampler_products_stay_in_group():
    for seed in range(40):
        g = sample_k1_haar(F3, 6, seed=seed)
        assert_unitary(g)
        assert g.det().norm().val() == 0


def test_sampler_cell_frequency():
    # P(big cell) = 1/(1+q^-3) = 27/28; check a 3-sigma band at modest n
    n, hits = 4000, 0
    for seed in range(4000):
        g = sample_k1_haar(F3, 4, seed=f"cell:{seed}")
        if g.rows[2][2].val() == 0:
            hits += 1
    want = 27 / 28
    sigma = math.sqrt(want * (1 - want) / n)
    assert abs(hits / n - want) < 3 * sigma


# -- the defining integral ----------------------------------------------------------


def test_mc_degenerate_exponent_is_exactly_one():
    out = monte_carlo_omega1(1, 0.0, 500, 6, seed=0)
    assert out["estimate"] == 1.0
    assert out["closed_form"] == pytest.approx(1.0, abs=1e-12)


def test_closed_form_matches_exact_series():
    # float evaluation against the exact rational expression at q = 3
    q = QLaurent.gen()
    for ell in range(4):
        for s in (1, 2, 3):
            u = QFraction(q ** (-s))
            exact = omega_rank1_s_form(ell, u).eval(Fraction(3))
            assert exact.im == 0
            assert omega_n1_closed(ell, s, 3) == pytest.approx(float(exact.re), rel=1e-12)


def test_mc_matches_closed_form():
    for ell, s in [(0, 1.0), (1, 1.0), (2, 0.5)]:
        out = monte_carlo_omega1(ell, s, 4000, 8, seed=123)
        # a few replacement draws are allowed; more than 1% would have raised
        assert out["saturated"] <= 40
        err = abs(out["estimate"] - out["closed_form"])
        assert err < 3 * out["stderr"] + 1e-12


def test_mc_is_deterministic():
    a = monte_carlo_omega1(1, 1.0, 300, 8, seed=42)
    b = monte_carlo_omega1(1, 1.0, 300, 8, seed=42)
    assert a["estimate"] == b["estimate"]
    assert a["histogram"] == b["histogram"]


def test_mc_saturation_guard():
    # at working precision 2 every valuation >= 1 is uncertifiable, so the
    # replacement budget must blow up for deep orbits
    with pytest.raises(PrecisionError):
        monte_carlo_omega1(2, 1.0, 200, 2, seed=0)


# -- constructive diagonalization ----------------------------------------------------


def bordered_form(field, m, ell, r):
    """The deep-corner family: antidiagonal ones plus a rank-one hermitian
    border with prescribed valuations (constraint solved for s)."""
    p = field.p
    s = Fraction(-2 - p ** (m + ell) * 2 * r)
    v = [Fraction(p**m), s, p**ell * r * s]
    rows = [
        [(Fraction(1) if i + j == 2 else Fraction(0)) + v[i] * v[j] / s for j in range(3)]
        for i in range(3)
    ]
    return LocalMatrix.from_values(field, "exact", rows)


def vanishing_corner_form(field, f):
    f = Fraction(f)
    return LocalMatrix.from_values(
        field, "exact", [[0, 0, 1], [0, -1, f], [1, f, -f * f / 2]]
    )


def test_diagonalize_representative():
    k, ell = diagonalize_x1(x_lambda(F3, 1, (2,)), prec=12)
    assert ell == 2
    assert_unitary(k)


def test_diagonalize_bordered_examples():
    x = bordered_form(F3, 1, 1, 1)
    assert is_member_X(x)
    k, ell = diagonalize_x1(x, prec=14)
    assert ell == 0
    # deeper corners still land where the invariant-factor oracle says
    for field in (F3, F5):
        for m, el, r in [(2, 1, 1), (2, 2, 1), (3, 1, 2)]:
            x = bordered_form(field, m, el, r)
            assert is_member_X(x)
            want = classify_k_orbit(x)[0]
            k, got = diagonalize_x1(x, prec=16)
            assert got == want


def test_diagonalize_vanishing_corner_family():
    for field in (F3, F5):
        p = field.p
        for f in (0, p, p * p, Fraction(1, p), 1):
            x = vanishing_corner_form(field, f)
            assert is_member_X(x)
            want = classify_k_orbit(x)[0]
            k, got = diagonalize_x1(x, prec=14)
            assert got == want


def test_diagonalize_roundtrips():
    for p, field in ((3, F3), (5, F5)):
        for ell in range(4):
            for trial in range(3):
                seed = 1000 * p + 10 * ell + trial
                x = random_k(field, 1, seed=seed).act(x_lambda(field, 1, (ell,)))
                xr = x.to_residue(12)
                k, got = diagonalize_x1(xr)
                assert got == ell
                y = k.act(xr)
                pw = Fraction(p)
                for i, want in enumerate([pw**ell, Fraction(1), pw**-ell]):
                    e = y.rows[i][i]
                    assert e == e._coerce(want * pw**y.shift, e.m)
                for i in range(3):
                    for j in range(3):
                        if i != j:
                            assert y.rows[i][j].is_zero()


def test_diagonalize_precision_retry():
    # a saturated corner raises with a usable retry hint instead of lying
    x = x_lambda(F3, 1, (3,))
    prec, rounds = 3, 0
    while True:
        try:
            k, ell = diagonalize_x1(x.to_residue(prec))
            break
        except PrecisionError as e:
            assert e.required > prec
            prec = e.required
            rounds += 1
    assert ell == 3 and rounds >= 1


def test_diagonalize_rejects_larger_sizes():
    with pytest.raises(ValueError):
        diagonalize_x1(x_lambda(F3, 2, (1, 0)), prec=10)
