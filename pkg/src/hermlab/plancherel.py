"""Quadrature on the compact torus: orthogonality, transform, inversion.

The measure is the absolutely continuous one with density

    (1/(2^n n!)) * w_n(-1/q) w_m'(-1/q) / (1+1/q)^m' *
        prod over positive roots a of |1 - x^a|^2 / |1 - t_a x^a|^2

against the normalized Haar measure of the n-torus (m' is the half-size of
the space).  Everything in this module is numerical -- uniform grids and
numpy -- while the expected values it is checked against come from the
exact layers.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from .hall_littlewood import (
    check_partition,
    p_poly,
    spec_params,
    w_lambda_value,
    w_poly,
    w_tilde,
    whole_group_value,
)
from .scalars import QFraction, QLaurent
from .spherical import (
    PhasedScalar,
    SpaceConfig,
    SphericalValue,
    phase_power,
    psi,
)
from .torus import FactoredRational, TorusPoly
from .weyl import long_positive_roots, positive_roots, short_positive_roots


class QuadratureGrid:
    """The uniform N^n grid on [0, 2pi)^n; a mean over it integrates
    trigonometric polynomials of degree < N exactly."""

    __slots__ = ("n", "N", "thetas")

    def __init__(self, n: int, N: int):
        if N < 2:
            raise ValueError("need at least two nodes per circle")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "N", N)
        axes = np.indices((N,) * n).reshape(n, -1).T * (2 * np.pi / N)
        object.__setattr__(self, "thetas", axes)  # shape (N^n, n)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("QuadratureGrid is immutable")

    def poly_values(self, f: TorusPoly, q0: float) -> np.ndarray:
        out = np.zeros(len(self.thetas), dtype=complex)
        for e, c in f.terms():
            out += c.eval_float(q0) * np.exp(1j * (self.thetas @ np.array(e)))
        return out

    def factored_values(self, fr: FactoredRational, q0: float) -> np.ndarray:
        out = np.full(len(self.thetas), complex(fr.front.eval_float(q0)))
        for b in fr.num:
            out *= 1 - b.coef.eval_float(q0) * np.exp(1j * (self.thetas @ np.array(b.alpha)))
        for b in fr.den:
            out /= 1 - b.coef.eval_float(q0) * np.exp(1j * (self.thetas @ np.array(b.alpha)))
        return out

    def spherical_values(
        self, sv: SphericalValue, q0: float, shift: Sequence[float] | None = None
    ) -> np.ndarray:
        thetas = self.thetas if shift is None else self.thetas + np.asarray(shift)
        num = np.zeros(len(thetas), dtype=complex)
        for e, c in sv.numerator.terms():
            num += c.eval_float(q0) * np.exp(1j * (thetas @ np.array(e)))
        den = np.full(len(thetas), complex(sv.boundary.front.eval_float(q0)))
        for b in sv.boundary.num:
            den *= 1 - b.coef.eval_float(q0) * np.exp(1j * (thetas @ np.array(b.alpha)))
        for b in sv.boundary.den:
            den /= 1 - b.coef.eval_float(q0) * np.exp(1j * (thetas @ np.array(b.alpha)))
        return sv.prefactor.eval_float(q0) * num / den


def measure_constant(n: int, parity: str, q0: Fraction) -> Fraction:
    """The exact front constant of the density."""
    q = QLaurent.gen()
    t = -(q**-1)
    mp = SpaceConfig(n, parity).half_size
    w_n = w_poly(n, t).eval(Fraction(q0)).re
    w_mp = w_poly(mp, t).eval(Fraction(q0)).re
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    return (
        Fraction(1, 2**n * fact) * w_n * w_mp / (1 + Fraction(1, q0)) ** mp
    )


def measure_values(grid: QuadratureGrid, parity: str, q0: Fraction) -> np.ndarray:
    """Density values on the grid (a real positive array)."""
    n = grid.n
    qf = float(q0)
    ts, tl = spec_params(parity)
    ts_v = ts.eval_float(qf)
    tl_v = tl.eval_float(qf)
    out = np.full(len(grid.thetas), float(measure_constant(n, parity, q0)))
    for a in short_positive_roots(n):
        w = np.exp(1j * (grid.thetas @ np.array(a)))
        out *= (np.abs(1 - w) ** 2) / (np.abs(1 - ts_v * w) ** 2)
    for a in long_positive_roots(n):
        w = np.exp(1j * (grid.thetas @ np.array(a)))
        out *= (np.abs(1 - w) ** 2) / (np.abs(1 - tl_v * w) ** 2)
    return out


def measure_density_point(n: int, parity: str, q0: Fraction, thetas: Sequence[float]) -> float:
    """Density at one point (scalar convenience wrapper).

    >>> round(measure_density_point(1, "odd", Fraction(3), [np.pi / 2]), 10)
    2.25
    """
    ts, tl = spec_params(parity)
    val = float(measure_constant(n, parity, q0))
    qf = float(q0)
    for a in short_positive_roots(n):
        w = np.exp(1j * sum(c * t for c, t in zip(a, thetas)))
        val *= abs(1 - w) ** 2 / abs(1 - ts.eval_float(qf) * w) ** 2
    for a in long_positive_roots(n):
        w = np.exp(1j * sum(c * t for c, t in zip(a, thetas)))
        val *= abs(1 - w) ** 2 / abs(1 - tl.eval_float(qf) * w) ** 2
    return float(val)


def total_mass(n: int, parity: str, q0: Fraction, N: int = 64) -> float:
    grid = QuadratureGrid(n, N)
    return float(np.mean(measure_values(grid, parity, q0)))


def inner_product(
    grid: QuadratureGrid,
    fvals: np.ndarray,
    gvals: np.ndarray,
    dens: np.ndarray,
    conjugate: bool = True,
) -> complex:
    g = np.conj(gvals) if conjugate else gvals
    return complex(np.mean(fvals * g * dens))


def expected_gram_diagonal(lam: Sequence[int], n: int, parity: str, q0: Fraction) -> Fraction:
    """W_0 / W_lam at the parity specialization, exactly."""
    lam = check_partition(lam, n)
    num = whole_group_value(n, parity).eval(Fraction(q0)).re
    den = w_lambda_value(lam, n, parity).eval(Fraction(q0)).re
    return num / den


def gram_matrix(
    lams: Sequence[Sequence[int]], n: int, parity: str, q0: Fraction, N: int = 64
) -> np.ndarray:
    """Pairwise inner products of the normalized orbit sums."""
    grid = QuadratureGrid(n, N)
    dens = measure_values(grid, parity, q0)
    vals = [grid.poly_values(p_poly(n, parity, lam), float(q0)) for lam in lams]
    m = len(lams)
    out = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            out[i, j] = inner_product(grid, vals[i], vals[j], dens)
    return out


def volume(lam: Sequence[int], n: int, parity: str, q0: Fraction) -> Fraction:
    """The exact mass of the orbit labeled by the partition:

        q0 ** (-2 <lam, Re z0>)  *  W_0 / W_lam .

    >>> volume((1,), 1, "odd", Fraction(3))
    Fraction(8, 1)
    """
    lam = check_partition(lam, n)
    z0 = SpaceConfig(n, parity).z0
    expo = -2 * sum((Fraction(l) * p[0] for l, p in zip(lam, z0)), Fraction(0))
    if expo.denominator != 1:
        raise ArithmeticError("orbit exponent failed to be integral")
    return Fraction(q0) ** int(expo) * expected_gram_diagonal(lam, n, parity, q0)


def transform_ch(lam: Sequence[int], n: int, parity: str) -> SphericalValue:
    """The transform of the orbit indicator, exactly:

        q ** (-<lam, z0>)  *  p_poly(lam).

    The W-invariant polynomial part is the normalized orbit sum; the phased
    prefactor undoes the base-point power.
    """
    lam = check_partition(lam, n)
    pre = phase_power(lam, n, parity).inverse()
    return SphericalValue(n, parity, lam, pre, p_poly(n, parity, lam), FactoredRational(1))


def check_plancherel(
    lams: Sequence[Sequence[int]], n: int, parity: str, q0: Fraction, N: int = 64
) -> dict:
    """Pairings of transforms against the expected diagonal orbit masses.

    Returns the worst absolute deviation over all pairs, plus the matrix.
    """
    grid = QuadratureGrid(n, N)
    dens = measure_values(grid, parity, q0)
    vals = [grid.spherical_values(transform_ch(lam, n, parity), float(q0)) for lam in lams]
    m = len(lams)
    mat = np.zeros((m, m), dtype=complex)
    err = 0.0
    for i in range(m):
        for j in range(m):
            got = inner_product(grid, vals[i], vals[j], dens)
            mat[i, j] = got
            want = float(volume(lams[i], n, parity, q0)) if i == j else 0.0
            err = max(err, abs(got - want))
    return {"matrix": mat, "max_error": err}


def check_inversion(
    lams: Sequence[Sequence[int]], n: int, parity: str, q0: Fraction, N: int = 64
) -> dict:
    """Unconjugated pairing of each transform against each plain kernel;
    the result must be the identity matrix."""
    grid = QuadratureGrid(n, N)
    dens = measure_values(grid, parity, q0)
    fvals = [grid.spherical_values(transform_ch(lam, n, parity), float(q0)) for lam in lams]
    pvals = [grid.spherical_values(psi(n, parity, lam), float(q0)) for lam in lams]
    m = len(lams)
    mat = np.zeros((m, m), dtype=complex)
    err = 0.0
    for i in range(m):
        for j in range(m):
            got = inner_product(grid, fvals[i], pvals[j], dens, conjugate=False)
            mat[i, j] = got
            want = 1.0 if i == j else 0.0
            err = max(err, abs(got - want))
    return {"matrix": mat, "max_error": err}


def basis_partitions(n: int) -> list[tuple[int, ...]]:
    """The 2^n partitions used for the evaluation-rank certificate.

    Seeded with the 0/1 partitions, then completed — scanning partitions
    graded by largest part, then weight, then lexicographically — while
    never letting either weight-parity class exceed 2^(n-1).

    >>> basis_partitions(2)
    [(0, 0), (1, 0), (1, 1), (2, 1)]
    """
    target = 2**n
    cap = 2 ** (n - 1)
    sel: list[tuple[int, ...]] = []
    count = {0: 0, 1: 0}
    for k in range(n + 1):
        lam = (1,) * k + (0,) * (n - k)
        sel.append(lam)
        count[k % 2] += 1
    for max_part in range(2, 2 * n + 4):
        if len(sel) == target:
            break
        candidates = [
            lam
            for lam in itertools.product(range(max_part, -1, -1), repeat=n)
            if all(lam[i] >= lam[i + 1] for i in range(n - 1)) and max(lam) == max_part
        ]
        candidates.sort(key=lambda t: (sum(t), t))
        for lam in candidates:
            if lam in sel or count[sum(lam) % 2] >= cap:
                continue
            sel.append(lam)
            count[sum(lam) % 2] += 1
            if len(sel) == target:
                break
    if len(sel) != target:  # pragma: no cover - guard
        raise RuntimeError("basis completion failed")
    return sel


def basis_rank_check(
    n: int, parity: str, q0: Fraction, seed: int = 0, trials: int = 5, tol: float = 1e-6
) -> dict:
    """Evaluate the 2^n kernels at one random point and its half-period
    shifts; the square matrix must be nonsingular.  Degenerate sample points
    are resampled (with the attempt recorded)."""
    rng = random.Random(seed)
    lams = basis_partitions(n)
    kernels = [psi(n, parity, lam) for lam in lams]
    masks = list(np.ndindex(*(2,) * n))
    dets = []
    for _ in range(trials):
        for attempt in range(8):
            thetas = [rng.uniform(0, 2 * np.pi) for _ in range(n)]
            M = np.zeros((2**n, 2**n), dtype=complex)
            for j, ker in enumerate(kernels):
                for k, mask in enumerate(masks):
                    shifted = [t + np.pi * m for t, m in zip(thetas, mask)]
                    M[j, k] = ker.eval_unit(float(q0), shifted)
            d = abs(np.linalg.det(M))
            if d > tol:
                dets.append(d)
                break
        else:
            return {"ok": False, "dets": dets}
    return {"ok": True, "dets": dets}
