"""Exact scalar arithmetic.

Three layers, each immutable and hashable where meaningful:

* :class:`GaussianRational` -- numbers a + b*I with rational a, b.
* :class:`QLaurent` -- Laurent polynomials in the parameter ``q`` with
  GaussianRational coefficients.
* :class:`QFraction` -- formal quotients of two QLaurent values.  Equality
  is decided by cross-multiplication; no multivariate gcd is ever taken.

Everything symbolic in this package bottoms out here; no floating point
enters until numeric quadrature explicitly asks for it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rat = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an integer or Fraction, got {type(x).__name__}")


class GaussianRational:
    """An exact complex number with rational real and imaginary parts.

    >>> a = GaussianRational(Fraction(1, 2), 1)
    >>> a * a
    GaussianRational(-3/4, 1)
    >>> a * a.conjugate() == GaussianRational(Fraction(5, 4))
    True
    >>> (a / a) == GaussianRational(1)
    True
    >>> str(GaussianRational(Fraction(2, 3), Fraction(-1, 4)))
    '2/3-1/4*I'
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Rat = 0, im: Rat = 0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("GaussianRational is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def i_power(k: int) -> "GaussianRational":
        """The exact value of I**k.

        >>> [str(GaussianRational.i_power(k)) for k in range(4)]
        ['1', 'I', '-1', '-I']
        """
        return _I_POWERS[k % 4]

    # -- ring/field structure -----------------------------------------
    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = GR_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure ------------------------------------------------------
    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- misc -----------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re) + 1j * float(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        """Serialize as ``a/b+c/d*I`` omitting zero parts."""
        if self.im == 0:
            return str(self.re)
        imag = f"{self.im}*I" if self.im not in (1, -1) else ("I" if self.im == 1 else "-I")
        if self.re == 0:
            return imag
        sign = "+" if (self.im > 0 and not imag.startswith("-")) else ""
        return f"{self.re}{sign}{imag}"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)
_I_POWERS = (GR_ONE, GR_I, GaussianRational(-1), GaussianRational(0, -1))


def _as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a Gaussian rational")


class QLaurent:
    """A Laurent polynomial in the single parameter ``q``.

    Stored as a finitely supported map from integer exponent to nonzero
    :class:`GaussianRational` coefficient.  Immutable and hashable so values
    such as specialization parameters can key memo tables.

    >>> q = QLaurent.gen()
    >>> w2 = (1 + q**-1) * (1 - q**-2)      # (1+q^-1)(1-q^-2)
    >>> w2.eval(Fraction(3))
    GaussianRational(32/27, 0)
    >>> (q - 1) * (q + 1) == q**2 - 1
    True
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, GaussianRational] | None = None):
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                c = _as_gaussian(c)
                if not c.is_zero():
                    clean[int(e)] = c
        object.__setattr__(self, "_c", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("QLaurent is immutable")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def const(x) -> "QLaurent":
        return QLaurent({0: _as_gaussian(x)})

    @staticmethod
    def term(coef, exp: int) -> "QLaurent":
        return QLaurent({exp: _as_gaussian(coef)})

    @staticmethod
    def gen() -> "QLaurent":
        """The generator ``q``."""
        return QLaurent({1: GR_ONE})

    # -- basic queries ----------------------------------------------------
    def items(self):
        return self._c.items()

    def sorted_items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: GR_ONE}

    def coeff(self, e: int) -> GaussianRational:
        return self._c.get(e, GR_ZERO)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return QLaurent.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            s = c.get(e, GR_ZERO) + v
            if s.is_zero():
                c.pop(e, None)
            else:
                c[e] = s
        return QLaurent(c)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: dict[int, GaussianRational] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in o._c.items():
                e = e1 + e2
                s = c.get(e, GR_ZERO) + v1 * v2
                if s.is_zero():
                    c.pop(e, None)
                else:
                    c[e] = s
        return QLaurent(c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self._c) != 1:
                raise InexactDivision("negative power of a non-monomial QLaurent")
            (e, v), = self._c.items()
            return QLaurent({e * k: v ** k})
        out = QL_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "QLaurent":
        """Multiply by q**k."""
        return QLaurent({e + k: v for e, v in self._c.items()})

    def stretch(self, k: int) -> "QLaurent":
        """Reinterpret q as the k-th power of a finer base: q -> r^k."""
        if k <= 0:
            raise ValueError("stretch factor must be positive")
        return QLaurent({e * k: v for e, v in self._c.items()})

    def divexact(self, other: "QLaurent") -> "QLaurent":
        """Exact division; raises :class:`InexactDivision` on a remainder.

        >>> q = QLaurent.gen()
        >>> ((1 - q**2).divexact(1 - q)) == 1 + q
        True
        """
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("division by zero QLaurent")
        if self.is_zero():
            return QL_ZERO
        rem = self
        lead_e = o.max_exp()
        lead_c = o.coeff(lead_e)
        quot: dict[int, GaussianRational] = {}
        while not rem.is_zero():
            e = rem.max_exp() - lead_e
            c = rem.coeff(rem.max_exp()) / lead_c
            if rem.max_exp() - rem.min_exp() < o.max_exp() - o.min_exp() and not (
                rem.max_exp() == rem.min_exp() and o.max_exp() == o.min_exp()
            ):
                # degree span shorter than the divisor's: cannot terminate
                raise InexactDivision("nonzero remainder in QLaurent division")
            quot[e] = c
            rem = rem - o.shift(e) * QLaurent.const(c)
            if not rem.is_zero() and rem.max_exp() - lead_e >= e:
                raise InexactDivision("nonzero remainder in QLaurent division")
        return QLaurent(quot)

    # -- evaluation ---------------------------------------------------------
    def eval(self, q0) -> GaussianRational:
        """Exact substitution q <- q0 (rational or Gaussian rational)."""
        q0 = _as_gaussian(q0)
        if q0.is_zero():
            raise ValueError("cannot evaluate a Laurent polynomial at q = 0")
        total = GR_ZERO
        for e, v in self._c.items():
            total = total + v * q0**e
        return total

    def eval_float(self, q0: float) -> complex:
        return sum(complex(v) * q0**e for e, v in self._c.items())

    # -- misc ----------------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(tuple(sorted(self._c.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"QLaurent({self._c!r})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "q"
            else:
                mono = f"q^{e}" if e >= 0 else f"q^{{{e}}}"
            coef = str(v)
            if mono:
                if coef == "1":
                    coef = ""
                elif coef == "-1":
                    coef = "-"
                elif ("+" in coef[1:]) or ("-" in coef[1:]) or coef.endswith("*I"):
                    coef = f"({coef})*"
                else:
                    coef = f"{coef}*"
            parts.append(f"{coef}{mono}" if mono else coef)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def serialize(self) -> dict:
        """Exponent -> coefficient-string map, used by the structured format."""
        return {str(e): str(v) for e, v in self.sorted_items()}


QL_ZERO = QLaurent()
QL_ONE = QLaurent.const(1)


class InexactDivision(ArithmeticError):
    """An exact division was requested but a remainder survived."""


def _as_qlaurent(x) -> QLaurent:
    if isinstance(x, QLaurent):
        return x
    if isinstance(x, (int, Fraction, GaussianRational)):
        return QLaurent.const(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a QLaurent")


class QFraction:
    """A formal quotient of two Laurent polynomials in q.

    No gcd normalization is performed; equality is cross-multiplication.
    The only simplification attempted is an exact division of the numerator
    by the denominator (cheap and frequently applicable here).

    >>> q = QLaurent.gen()
    >>> QFraction(q - 1, q**2 - q) == QFraction(QL_ONE, q)
    True
    >>> (QFraction(q) / QFraction(q)).eval(Fraction(7))
    GaussianRational(1, 0)
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_qlaurent(num)
        den = QL_ONE if den is None else _as_qlaurent(den)
        if den.is_zero():
            raise ZeroDivisionError("QFraction with zero denominator")
        if not den.is_one() and not num.is_zero():
            try:
                num = num.divexact(den)
                den = QL_ONE
            except InexactDivision:
                pass
        if num.is_zero():
            den = QL_ONE
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("QFraction is immutable")

    __hash__ = None  # equality is not structural; do not use as a dict key

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QFraction):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, QLaurent)):
            return QFraction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return QFraction(self.num + o.num, self.den)
        return QFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QFraction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "QFraction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero QFraction")
        return QFraction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return QFraction(self.num**k, self.den**k)

    # -- structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def conjugate_coeffs(self) -> "QFraction":
        """Conjugate every Gaussian-rational coefficient (q stays real)."""
        cn = QLaurent({e: v.conjugate() for e, v in self.num.items()})
        cd = QLaurent({e: v.conjugate() for e, v in self.den.items()})
        return QFraction(cn, cd)

    def stretch(self, k: int) -> "QFraction":
        """Reinterpret q as the k-th power of a finer base: q -> r^k."""
        return QFraction(self.num.stretch(k), self.den.stretch(k))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    # -- evaluation -------------------------------------------------------------
    def eval(self, q0) -> GaussianRational:
        d = self.den.eval(q0)
        if d.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at q = {q0}")
        return self.num.eval(q0) / d

    def eval_float(self, q0: float) -> complex:
        return self.num.eval_float(q0) / self.den.eval_float(q0)

    def __repr__(self):
        return f"QFraction({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


QF_ZERO = QFraction(0)
QF_ONE = QFraction(1)


def qfrac_eq(a: QFraction, b: QFraction) -> bool:
    """Cross-multiplication equality of two formal fractions."""
    if not isinstance(a, QFraction) or not isinstance(b, QFraction):
        raise TypeError("qfrac_eq expects two QFraction values")
    return a == b


def qlaurent_eval(f: QLaurent, q0) -> GaussianRational:
    """Exact substitution q <- q0 into a Laurent polynomial (q0 != 0)."""
    return f.eval(q0)


def product(factors: Iterable) -> QLaurent:
    """Product of an iterable of QLaurent values (empty product = 1)."""
    out = QL_ONE
    for f in factors:
        out = out * f
    return out
