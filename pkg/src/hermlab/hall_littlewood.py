"""Symmetric orbit sums with parameter on the n-torus.

The central object is ``q_poly``: the parameter-deformed orbit sum attached
to a partition, computed by symmetrizing a product kernel over the signed
permutations and then stripping the universal binomial denominator by exact
division.  ``p_poly`` renormalizes by the stabilizer counting series so the
leading orbit coefficient is 1.

Two specializations of the (short, long) parameters occur throughout, tied
to the residue side being odd- or even-dimensional; ``spec_params`` fixes
them once and for all:

    short  t_s = -1/q          (both cases)
    long   t_l = -1/q^2  (odd)     or     1/q  (even)
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from .scalars import QFraction, QLaurent
from .torus import Binomial, FactoredRational, TorusPoly, binomial_div_exact
from .weyl import (
    enumerate_group,
    long_positive_roots,
    poincare_poly,
    positive_roots,
    short_positive_roots,
    stabilizer,
)

PARITIES = ("odd", "even")


def spec_params(parity: str) -> Tuple[QLaurent, QLaurent]:
    """The (short, long) parameter pair as exact Laurent polynomials in q."""
    q = QLaurent.gen()
    if parity == "odd":
        return -(q**-1), -(q**-2)
    if parity == "even":
        return -(q**-1), q**-1
    raise ValueError(f"parity must be 'odd' or 'even', not {parity!r}")


def check_partition(lam: Sequence[int], n: int) -> Tuple[int, ...]:
    """Validate and pad a partition to exactly n parts."""
    lam = tuple(int(x) for x in lam)
    if any(a < 0 for a in lam):
        raise ValueError(f"negative part in {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"parts must be weakly decreasing: {lam}")
    if len(lam) > n and any(a != 0 for a in lam[n:]):
        raise ValueError(f"partition {lam} has more than {n} nonzero parts")
    return (lam + (0,) * n)[:n]


def c_function(n: int, t_short: QLaurent, t_long: QLaurent) -> FactoredRational:
    """The one-term kernel whose group symmetrization gives the orbit sums:

        prod over positive roots a of (1 - t_a x^(-a)) / (1 - x^(-a)).
    """
    num = []
    den = []
    for a in short_positive_roots(n):
        neg = tuple(-v for v in a)
        num.append(Binomial(t_short, neg))
        den.append(Binomial(1, neg))
    for a in long_positive_roots(n):
        neg = tuple(-v for v in a)
        num.append(Binomial(t_long, neg))
        den.append(Binomial(1, neg))
    return FactoredRational(1, num, den)


@lru_cache(maxsize=None)
def _q_poly_cached(n: int, lam: Tuple[int, ...], t_short: QLaurent, t_long: QLaurent) -> TorusPoly:
    # kernel cleared of denominators:
    #   T = x^(-lam) * prod(1 - t_a x^a) * prod(1 - x^(-a))   over positive roots a
    # Summing the exponent-relabeled copies of T over the whole group gives
    #   N = q_poly * prod over ALL roots b of (1 - x^b),
    # so 2 n^2 exact binomial divisions finish the job.
    T = TorusPoly.monomial(n, tuple(-v for v in lam))
    for a in short_positive_roots(n):
        T = T * Binomial(t_short, a).as_poly()
    for a in long_positive_roots(n):
        T = T * Binomial(t_long, a).as_poly()
    for a in positive_roots(n):
        T = T * Binomial(1, tuple(-v for v in a)).as_poly()

    acc: dict[Tuple[int, ...], QFraction] = {}
    terms = list(T.terms())
    for g in enumerate_group(n):
        for e, c in terms:
            e2 = g.act_vector(e)
            s = acc.get(e2)
            acc[e2] = c if s is None else s + c
    N = TorusPoly(n, acc)

    out = N
    for a in positive_roots(n):
        out = binomial_div_exact(out, 1, a)
        out = binomial_div_exact(out, 1, tuple(-v for v in a))
    return out


def q_poly(
    n: int,
    parity: str | None,
    lam: Sequence[int],
    t_short: QLaurent | None = None,
    t_long: QLaurent | None = None,
) -> TorusPoly:
    """The parameter orbit sum for a partition (at a parity specialization,
    or at explicitly supplied parameters).

    >>> str(q_poly(1, "odd", (1,)))
    'x + x^{-1}'
    >>> str(q_poly(1, "odd", ()))
    '1 - q^{-2}'
    """
    if (t_short is None) != (t_long is None):
        raise ValueError("supply both parameters or neither")
    if t_short is None:
        if parity is None:
            raise ValueError("need a parity when no explicit parameters are given")
        t_short, t_long = spec_params(parity)
    lam = check_partition(lam, n)
    return _q_poly_cached(n, lam, t_short, t_long)


def w_poly(m: int, t: QLaurent) -> QLaurent:
    """prod_{i=1..m} (1 - t^i); the empty product for m = 0.

    >>> q = QLaurent.gen()
    >>> w_poly(2, -(q**-1)).eval(Fraction(3))
    GaussianRational(32/27, 0)
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = QLaurent.const(1)
    for i in range(1, m + 1):
        out = out * (QLaurent.const(1) - t**i)
    return out


def part_multiplicities(lam: Sequence[int], n: int) -> dict[int, int]:
    """Multiplicity of each value among the n padded parts (0 included)."""
    lam = check_partition(lam, n)
    mult: dict[int, int] = {}
    for a in lam:
        mult[a] = mult.get(a, 0) + 1
    return mult


def w_tilde(lam: Sequence[int], n: int, t: QLaurent) -> QLaurent:
    """The stabilizer counting series in closed form:

        w_tilde = w_{m0 + 1} * prod over all values v >= 0 of w_{m_v},

    where m_v is the multiplicity of the part v (m0 counts zero parts).

    >>> q = QLaurent.gen()
    >>> w_tilde((), 1, q) == w_poly(1, q) * w_poly(2, q)
    True
    >>> w_tilde((1,), 1, q) == (1 - q) * (1 - q)
    True
    """
    mult = part_multiplicities(lam, n)
    m0 = mult.get(0, 0)
    out = w_poly(m0 + 1, t)
    for v, m in mult.items():
        out = out * w_poly(m, t)
    return out


def w_lambda_value(lam: Sequence[int], n: int, parity: str) -> QLaurent:
    """Poincare series of the stabilizer of the partition, at the parity
    specialization.  Computed by direct enumeration (the closed form via
    ``w_tilde`` is checked against this in the test suite).

    >>> w_lambda_value((), 1, "odd").eval(Fraction(3))
    GaussianRational(8/9, 0)
    """
    t_short, t_long = spec_params(parity)
    lam = check_partition(lam, n)
    return poincare_poly(stabilizer(lam, n), t_short, t_long)


def whole_group_value(n: int, parity: str) -> QLaurent:
    """Poincare series of the full signed-permutation group at the parity
    specialization (equals the constant orbit sum q_poly of the empty
    partition)."""
    return w_lambda_value((), n, parity)


def p_poly(n: int, parity: str, lam: Sequence[int]) -> TorusPoly:
    """Orbit sum normalized so x^lam has coefficient 1:  q_poly / W_lam.

    >>> str(p_poly(1, "odd", ()))
    '1'
    >>> str(p_poly(1, "even", (2,)))
    'x^2 + 1 - q^{-1} + x^{-2}'
    """
    lam = check_partition(lam, n)
    w = w_lambda_value(lam, n, parity)
    return q_poly(n, parity, lam) * QFraction(QLaurent.const(1), w)
