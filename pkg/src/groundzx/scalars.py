"""Exact arithmetic in Z[i, 1/sqrt2] = Z[w, 1/sqrt2], w = e^{i pi/4}.

An element is stored as four integer coordinates over ``(1, w, w^2, w^3)``
together with a power of sqrt2 in the denominator::

    x = (a0 + a1 w + a2 w^2 + a3 w^3) / sqrt2^k

Elements are kept in canonical form (``k`` minimal), so equality is field
equality.
"""
from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from typing import Iterable, Optional, Union

OMEGA = cmath.exp(1j * math.pi / 4)
_OMEGA_POWERS = tuple(OMEGA**j for j in range(4))
_SQRT2 = math.sqrt(2.0)

Coords = tuple[int, int, int, int]


def _mul_coords(a: Coords, b: Coords) -> Coords:
    # negacyclic convolution, w^4 = -1
    c = [0, 0, 0, 0]
    for i in range(4):
        ai = a[i]
        if not ai:
            continue
        for j in range(4):
            t = ai * b[j]
            if i + j < 4:
                c[i + j] += t
            else:
                c[i + j - 4] -= t
    return (c[0], c[1], c[2], c[3])


def _times_sqrt2(a: Coords) -> Coords:
    a0, a1, a2, a3 = a
    return (a1 - a3, a0 + a2, a1 + a3, a2 - a0)


def _sqrt2_divides(a: Coords) -> bool:
    return (a[0] - a[2]) % 2 == 0 and (a[1] - a[3]) % 2 == 0


def _div_sqrt2(a: Coords) -> Coords:
    a0, a1, a2, a3 = a
    return ((a1 - a3) // 2, (a0 + a2) // 2, (a1 + a3) // 2, (a2 - a0) // 2)


def _canonical(a: Coords, k: int) -> tuple[Coords, int]:
    if not any(a):
        return (0, 0, 0, 0), 0
    while k < 0:
        a = _times_sqrt2(a)
        k += 1
    while k > 0 and _sqrt2_divides(a):
        a = _div_sqrt2(a)
        k -= 1
    return a, k


class ExactScalar:
    """An element of Z[w, 1/sqrt2] in canonical form. Immutable."""

    __slots__ = ("_a", "_k")

    def __init__(self, coords: Iterable[int] = (0, 0, 0, 0), k: int = 0):
        a = tuple(int(c) for c in coords)
        if len(a) != 4:
            raise ValueError("ExactScalar needs exactly four coordinates")
        self._a, self._k = _canonical(a, int(k))  # type: ignore[arg-type]

    @classmethod
    def _raw(cls, a: Coords, k: int) -> "ExactScalar":
        obj = object.__new__(cls)
        obj._a, obj._k = _canonical(a, k)
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "ExactScalar":
        return cls._raw((int(n), 0, 0, 0), 0)

    @classmethod
    def omega_power(cls, j: int) -> "ExactScalar":
        """w^j for any integer j."""
        j %= 8
        sign = 1
        if j >= 4:
            j -= 4
            sign = -1
        a = [0, 0, 0, 0]
        a[j] = sign
        return cls._raw(tuple(a), 0)  # type: ignore[arg-type]

    @classmethod
    def sqrt2_power(cls, e: int) -> "ExactScalar":
        """sqrt2^e for any integer e."""
        return cls._raw((1, 0, 0, 0), -e)

    @classmethod
    def from_gaussian(cls, re_: int, im: int) -> "ExactScalar":
        """re + i*im with integer parts (i = w^2)."""
        return cls._raw((int(re_), 0, int(im), 0), 0)

    # accessors ------------------------------------------------------------

    @property
    def coords(self) -> Coords:
        return self._a

    @property
    def k(self) -> int:
        return self._k

    def is_zero(self) -> bool:
        return not any(self._a)

    def __complex__(self) -> complex:
        return to_complex(self)

    def __hash__(self) -> int:
        return hash((self._a, self._k))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ExactScalar.from_int(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self._a == other._a and self._k == other._k

    def __repr__(self) -> str:
        return f"ExactScalar({self._a}, k={self._k})"

    def __str__(self) -> str:
        return to_text(self)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: Union["ExactScalar", int]) -> "ExactScalar":
        if isinstance(other, int):
            other = ExactScalar.from_int(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return ring_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ring_neg(self)

    def __sub__(self, other: Union["ExactScalar", int]) -> "ExactScalar":
        if isinstance(other, int):
            other = ExactScalar.from_int(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return ring_add(self, ring_neg(other))

    def __rsub__(self, other: int) -> "ExactScalar":
        return ExactScalar.from_int(other) - self

    def __mul__(self, other: Union["ExactScalar", int]) -> "ExactScalar":
        if isinstance(other, int):
            other = ExactScalar.from_int(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return ring_mul(self, other)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        return ring_conj(self)


ZERO = ExactScalar()
ONE = ExactScalar.from_int(1)
I = ExactScalar.omega_power(2)
OMEGA_EXACT = ExactScalar.omega_power(1)
SQRT2 = ExactScalar.sqrt2_power(1)
INV_SQRT2 = ExactScalar.sqrt2_power(-1)


def ring_add(x: ExactScalar, y: ExactScalar) -> ExactScalar:
    a, ka = x.coords, x.k
    b, kb = y.coords, y.k
    while ka < kb:
        a = _times_sqrt2(a)
        ka += 1
    while kb < ka:
        b = _times_sqrt2(b)
        kb += 1
    return ExactScalar._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), ka)


def ring_neg(x: ExactScalar) -> ExactScalar:
    a = x.coords
    return ExactScalar._raw((-a[0], -a[1], -a[2], -a[3]), x.k)


def ring_mul(x: ExactScalar, y: ExactScalar) -> ExactScalar:
    return ExactScalar._raw(_mul_coords(x.coords, y.coords), x.k + y.k)


def ring_conj(x: ExactScalar) -> ExactScalar:
    a0, a1, a2, a3 = x.coords
    return ExactScalar._raw((a0, -a3, -a2, -a1), x.k)


def _zsqrt2_parts(a: Coords) -> tuple[int, int]:
    """For a real element of Z[w] return (p, q) with a = p + q*sqrt2."""
    a0, a1, a2, a3 = a
    # real iff a2 == 0 and a1 == -a3; then a = a0 + a1*(w - w^3) = a0 + a1*sqrt2
    if a2 != 0 or a1 != -a3:
        raise ValueError("element is not in Z[sqrt2]")
    return a0, a1


def ring_divide_exact(num: ExactScalar, den: ExactScalar) -> Optional[ExactScalar]:
    """Return q in the ring with q * den == num, or None if no such q exists.

    The quotient is computed in Q(w) as num * conj(den) * galois(N) / n where
    N = den * conj(den) = p + q sqrt2 and n = p^2 - 2 q^2 is an integer.
    It lies in the ring iff the odd part of n divides every coordinate.
    """
    if den.is_zero():
        raise ZeroDivisionError("ring_divide_exact: division by zero")
    if num.is_zero():
        return ZERO
    norm = _mul_coords(den.coords, ring_conj(den).coords)
    p, q = _zsqrt2_parts(norm)
    galois = (p, -q, 0, q)  # p - q*sqrt2 in w-coordinates
    n = p * p - 2 * q * q
    c = _mul_coords(_mul_coords(num.coords, ring_conj(den).coords), galois)
    sign = 1 if n > 0 else -1
    n = abs(n)
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if any(ci % n for ci in c):
        return None
    c = tuple(sign * ci // n for ci in c)
    # value = c / (2^e) * sqrt2^(kd - kn)
    return ExactScalar._raw(c, 2 * e + num.k - den.k)  # type: ignore[arg-type]


def quotient_in_field(num: ExactScalar, den: ExactScalar) -> tuple[tuple[Fraction, ...], int]:
    """Exact quotient num/den in Q(w) as rational w-coordinates over sqrt2^k."""
    if den.is_zero():
        raise ZeroDivisionError("quotient_in_field: division by zero")
    norm = _mul_coords(den.coords, ring_conj(den).coords)
    p, q = _zsqrt2_parts(norm)
    n = p * p - 2 * q * q
    c = _mul_coords(_mul_coords(num.coords, ring_conj(den).coords), (p, -q, 0, q))
    return tuple(Fraction(ci, n) for ci in c), num.k - den.k


def to_complex(x: ExactScalar) -> complex:
    a = x.coords
    z = sum(complex(a[j]) * _OMEGA_POWERS[j] for j in range(4))
    return z / _SQRT2**x.k


_TEXT_RE = re.compile(
    r"^\(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*,\s*(-?\d+)\s*\)$"
)


def to_text(x: ExactScalar) -> str:
    a0, a1, a2, a3 = x.coords
    return f"(({a0},{a1},{a2},{a3}),{x.k})"


def from_text(text: str) -> ExactScalar:
    m = _TEXT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not an exact scalar: {text!r}")
    *coords, k = (int(g) for g in m.groups())
    return ExactScalar(coords, k)


def from_complex(z: complex, tol: float = 1e-12, max_k: int = 8) -> Optional[ExactScalar]:
    """Recover an exact element from a float if it has a small representation.

    Tries denominators sqrt2^k for k <= max_k and rounds the coordinates.
    """
    z = complex(z)
    for k in range(max_k + 1):
        s = z * _SQRT2**k
        # s = b0 + b1 w + b2 i + b3 w^3; restrict to the Z[i] + w Z[i] lattice
        for b1, b3 in ((0, 0),) + tuple(
            (u, v) for u in range(-4, 5) for v in range(-4, 5) if (u, v) != (0, 0)
        ):
            rest = s - b1 * OMEGA - b3 * OMEGA**3
            b0 = round(rest.real)
            b2 = round(rest.imag)
            cand = ExactScalar((b0, b1, b2, b3), k)
            if abs(to_complex(cand) - z) <= tol:
                return cand
    return None
