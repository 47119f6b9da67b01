"""The hyperoctahedral group (signed permutations) and its root data.

Elements act on integer exponent vectors of length n by permuting
coordinates and flipping signs.  The root system is the usual type-C one:
short roots ``e_i +- e_j`` (i < j) and long roots ``2 e_i``; a root is
positive exactly when its first nonzero coordinate is positive.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence, Tuple

from .scalars import QL_ONE, QLaurent

Vec = Tuple[int, ...]


class SignedPerm:
    """A signed permutation on n letters.

    ``perm`` and ``signs`` are n-tuples; the action on a vector is

        (sigma v)[i] = signs[i] * v[perm[i]]

    >>> s = SignedPerm((1, 0), (1, -1))
    >>> s.act_vector((3, 5))
    (5, -3)
    >>> (s * s.inverse()).is_identity()
    True
    """

    __slots__ = ("perm", "signs")

    def __init__(self, perm: Sequence[int], signs: Sequence[int]):
        perm = tuple(perm)
        signs = tuple(signs)
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {perm}")
        if len(signs) != n or any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be +-1 of length {n}: {signs}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("SignedPerm is immutable")

    @staticmethod
    def identity(n: int) -> "SignedPerm":
        return SignedPerm(tuple(range(n)), (1,) * n)

    @property
    def n(self) -> int:
        return len(self.perm)

    def act_vector(self, v: Sequence[int]) -> Vec:
        return tuple(self.signs[i] * v[self.perm[i]] for i in range(self.n))

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        """Composition: (self * other)(v) = self(other(v))."""
        if not isinstance(other, SignedPerm):
            return NotImplemented
        sp, ss = self.perm, self.signs
        tp, ts = other.perm, other.signs
        return SignedPerm(
            tuple(tp[sp[i]] for i in range(self.n)),
            tuple(ss[i] * ts[sp[i]] for i in range(self.n)),
        )

    def inverse(self) -> "SignedPerm":
        inv = [0] * self.n
        isg = [1] * self.n
        for i, p in enumerate(self.perm):
            inv[p] = i
            isg[p] = self.signs[i]
        return SignedPerm(tuple(inv), tuple(isg))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.signs)

    def __eq__(self, other):
        if not isinstance(other, SignedPerm):
            return NotImplemented
        return self.perm == other.perm and self.signs == other.signs

    def __hash__(self):
        return hash((self.perm, self.signs))

    def __repr__(self):
        return f"SignedPerm({self.perm}, {self.signs})"


def enumerate_group(n: int) -> list[SignedPerm]:
    """All 2^n n! signed permutations; deterministic, identity first.

    >>> [g.is_identity() for g in enumerate_group(2)][:1]
    [True]
    >>> len(enumerate_group(3))
    48
    """
    if not 1 <= n <= 6:
        raise ValueError("group enumeration supported for 1 <= n <= 6")
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            out.append(SignedPerm(perm, signs))
    return out


def coordinate_flip(n: int) -> SignedPerm:
    """The simple sign flip on the last coordinate."""
    return SignedPerm(tuple(range(n)), (1,) * (n - 1) + (-1,))


def simple_reflections(n: int) -> list[SignedPerm]:
    gens = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(SignedPerm(tuple(perm), (1,) * n))
    gens.append(coordinate_flip(n))
    return gens


# -- roots ------------------------------------------------------------------

def short_positive_roots(n: int) -> list[Vec]:
    """e_i - e_j and e_i + e_j for i < j, n(n-1) in total."""
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            minus = [0] * n
            minus[i], minus[j] = 1, -1
            plus = [0] * n
            plus[i], plus[j] = 1, 1
            roots.append(tuple(minus))
            roots.append(tuple(plus))
    return roots


def long_positive_roots(n: int) -> list[Vec]:
    """2 e_i for each i."""
    roots = []
    for i in range(n):
        r = [0] * n
        r[i] = 2
        roots.append(tuple(r))
    return roots


def positive_roots(n: int) -> list[Vec]:
    return short_positive_roots(n) + long_positive_roots(n)


def all_roots(n: int) -> list[Vec]:
    pos = positive_roots(n)
    return pos + [tuple(-c for c in r) for r in pos]


def is_positive_vec(v: Sequence[int]) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


def negated_positive_set(sigma: SignedPerm, include_long: bool) -> list[Vec]:
    """Positive roots sent to negative ones by ``sigma``.

    Always scans the short positive roots; includes the long ones only when
    ``include_long`` is set.

    >>> tau = coordinate_flip(2)
    >>> negated_positive_set(tau, include_long=True)
    [(0, 2)]
    >>> negated_positive_set(tau, include_long=False)
    []
    """
    n = sigma.n
    roots = short_positive_roots(n)
    if include_long:
        roots = roots + long_positive_roots(n)
    return [a for a in roots if not is_positive_vec(sigma.act_vector(a))]


def inversion_counts(sigma: SignedPerm) -> tuple[int, int]:
    """(#short positive roots negated, #long positive roots negated)."""
    n = sigma.n
    s = sum(1 for a in short_positive_roots(n) if not is_positive_vec(sigma.act_vector(a)))
    l = sum(1 for a in long_positive_roots(n) if not is_positive_vec(sigma.act_vector(a)))
    return s, l


def length(sigma: SignedPerm) -> int:
    """Coxeter length = total number of negated positive roots."""
    s, l = inversion_counts(sigma)
    return s + l


def stabilizer(lam: Sequence[int], n: int) -> list[SignedPerm]:
    """Group elements fixing the vector ``lam`` (padded to length n).

    >>> len(stabilizer((1, 1), 2))
    2
    >>> len(stabilizer((0, 0), 2))
    8
    """
    v = tuple(lam) + (0,) * (n - len(lam))
    return [g for g in enumerate_group(n) if g.act_vector(v) == v]


def poincare_poly(elems: Iterable[SignedPerm], t_short: QLaurent, t_long: QLaurent) -> QLaurent:
    """Sum of t_short^(short inversions) * t_long^(long inversions).

    >>> from fractions import Fraction
    >>> w = poincare_poly(enumerate_group(1), QLaurent.const(0), QLaurent.gen())
    >>> str(w)
    'q + 1'
    """
    total = QLaurent()
    for g in elems:
        s, l = inversion_counts(g)
        total = total + t_short**s * t_long**l
    return total


def orbit(lam: Sequence[int], n: int) -> set[Vec]:
    """The full signed-permutation orbit of a vector."""
    v = tuple(lam) + (0,) * (n - len(lam))
    return {g.act_vector(v) for g in enumerate_group(n)}


ONE = QL_ONE  # re-export convenience for callers building Poincare sums
