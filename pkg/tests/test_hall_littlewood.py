import itertools
import random
from fractions import Fraction

import pytest

from hermlab.hall_littlewood import (
    c_function,
    check_partition,
    p_poly,
    q_poly,
    spec_params,
    w_lambda_value,
    w_poly,
    w_tilde,
    whole_group_value,
)
from hermlab.scalars import QFraction, QLaurent
from hermlab.torus import TorusPoly
from hermlab.weyl import enumerate_group, orbit, poincare_poly, stabilizer

Q = QLaurent.gen()


def partitions_with(max_part, max_len):
    """All partitions with parts <= max_part and length <= max_len."""
    out = [()]
    for length in range(1, max_len + 1):
        for combo in itertools.combinations_with_replacement(
            range(max_part, 0, -1), length
        ):
            out.append(tuple(sorted(combo, reverse=True)))
    return sorted(set(out))


def test_check_partition():
    assert check_partition((2, 1), 3) == (2, 1, 0)
    with pytest.raises(ValueError):
        check_partition((1, 2), 2)
    with pytest.raises(ValueError):
        check_partition((1, 1, 1), 2)
    with pytest.raises(ValueError):
        check_partition((-1,), 1)


# frozen small values, both parities
def test_qpoly_rank1_frozen():
    assert q_poly(1, "odd", ()) == TorusPoly.const(1, 1 - Q**-2)
    assert q_poly(1, "even", ()) == TorusPoly.const(1, 1 + Q**-1)
    x = TorusPoly.monomial(1, (1,))
    xi = TorusPoly.monomial(1, (-1,))
    assert q_poly(1, "odd", (1,)) == x + xi
    assert q_poly(1, "even", (1,)) == x + xi
    assert q_poly(1, "odd", (2,)) == x**2 + xi**2 + TorusPoly.const(1, 1 + Q**-2)
    assert q_poly(1, "even", (2,)) == x**2 + xi**2 + TorusPoly.const(1, 1 - Q**-1)


def test_qpoly_symmetric():
    for n, lam in [(1, (2,)), (2, (1,)), (2, (2, 1)), (3, (1, 1, 0))]:
        for parity in ("odd", "even"):
            f = q_poly(n, parity, lam)
            assert f.is_symmetric(enumerate_group(n))


def test_qpoly_top_coefficient_is_stabilizer_series():
    # coefficient of x^lam in q_poly equals the stabilizer Poincare series
    for n, lam in [(1, (1,)), (2, (1, 1)), (2, (2, 0)), (3, (2, 1, 0))]:
        for parity in ("odd", "even"):
            f = q_poly(n, parity, lam)
            top = f.coeff(check_partition(lam, n))
            assert top == QFraction(w_lambda_value(lam, n, parity))


def test_macdonald_constant():
    # the empty-partition orbit sum collapses to the whole-group series
    for n in (1, 2, 3):
        for parity in ("odd", "even"):
            f = q_poly(n, parity, ())
            assert f == TorusPoly.const(n, whole_group_value(n, parity))


def test_ppoly_normalization():
    for n in (1, 2):
        for parity in ("odd", "even"):
            assert p_poly(n, parity, ()) == TorusPoly.const(n, 1)
            for lam in [(1,), (1, 1), (2, 1)]:
                lam = check_partition(lam, n) if len(lam) <= n else None
                if lam is None:
                    continue
                f = p_poly(n, parity, lam)
                assert f.coeff(lam) == QFraction(1)


def test_degeneracy_at_unit_parameters():
    # with both parameters set to 1 the kernel collapses and the orbit sum
    # degenerates to |stabilizer| times the plain orbit sum
    one = QLaurent.const(1)
    for n, lam in [(1, (2,)), (2, (1, 0)), (2, (2, 1)), (3, (1, 1, 0))]:
        f = q_poly(n, None, lam, t_short=one, t_long=one)
        k = len(stabilizer(lam, n))
        expect = TorusPoly.zero(n)
        for e in orbit(lam, n):
            expect = expect + TorusPoly.monomial(n, e, k)
        assert f == expect


def test_symmetrized_kernel_matches_qpoly_at_points():
    # q_poly equals the sum over the group of x^lam * kernel evaluated at
    # the transformed point (rational x, q symbolic)
    rng = random.Random(23)
    n = 2
    ts, tl = spec_params("odd")
    ker = c_function(n, ts, tl)
    for lam in [(1, 0), (1, 1), (2, 1)]:
        f = q_poly(2, "odd", lam)
        for _ in range(3):
            xs = [Fraction(rng.randrange(2, 40), rng.randrange(2, 40)) for _ in range(n)]
            if len({abs(x) for x in xs}) < n or any(x == 1 for x in xs):
                continue  # stay away from kernel poles
            total = QFraction(0)
            for g in enumerate_group(n):
                gx = [
                    xs[g.perm[i]] if g.signs[i] == 1 else Fraction(1, 1) / xs[g.perm[i]]
                    for i in range(n)
                ]
                mono = QFraction(1)
                for x, a in zip(gx, lam):
                    mono = mono * QFraction(QLaurent.const(Fraction(x)))**a
                total = total + mono * ker.eval_exact(gx)
            assert total == f.eval_exact(xs)


def test_qpoly_cached():
    a = q_poly(2, "odd", (1, 1))
    b = q_poly(2, "odd", (1, 1))
    assert a is b


def test_w_poly_values():
    t = -(Q**-1)
    assert w_poly(0, t) == QLaurent.const(1)
    assert w_poly(1, t) == 1 + Q**-1
    assert w_poly(2, t).eval(Fraction(3)) == (1 + Q**-1).eval(Fraction(3)) * (
        1 - Q**-2
    ).eval(Fraction(3))


def test_w_tilde_frozen_rank1():
    t = -(Q**-1)
    assert w_tilde((), 1, t) == w_poly(1, t) * w_poly(2, t)
    assert w_tilde((1,), 1, t) == (1 + Q**-1) * (1 + Q**-1)


# closed form vs brute-force stabilizer enumeration, odd side:
#   poincare(stab) * (1-t)^(n+1) == w_tilde(t)   at t = -1/q
def test_w_tilde_matches_stabilizer_series_odd():
    t = -(Q**-1)
    one_minus_t = QLaurent.const(1) - t
    for n in (1, 2, 3):
        for lam in partitions_with(3, n):
            brute = w_lambda_value(lam, n, "odd")
            assert brute * one_minus_t ** (n + 1) == w_tilde(lam, n, t)


# even side closed form: w_{m0}^2 * prod_{v>=1} w_{m_v} / (1-t)^n
def test_even_stabilizer_closed_form():
    from hermlab.hall_littlewood import part_multiplicities

    t = -(Q**-1)
    one_minus_t = QLaurent.const(1) - t
    for n in (1, 2, 3):
        for lam in partitions_with(2, n):
            mult = part_multiplicities(lam, n)
            m0 = mult.get(0, 0)
            closed = w_poly(m0, t) * w_poly(m0, t)
            for v, m in mult.items():
                if v >= 1:
                    closed = closed * w_poly(m, t)
            brute = w_lambda_value(lam, n, "even")
            assert brute * one_minus_t**n == closed


def test_w_lambda_trivial_stabilizer():
    assert w_lambda_value((2, 1), 2, "odd") == QLaurent.const(1)
    assert w_lambda_value((3, 2, 1), 3, "even") == QLaurent.const(1)


def test_spec_params():
    ts, tl = spec_params("odd")
    assert ts == -(Q**-1) and tl == -(Q**-2)
    ts, tl = spec_params("even")
    assert ts == -(Q**-1) and tl == Q**-1
    with pytest.raises(ValueError):
        spec_params("both")
