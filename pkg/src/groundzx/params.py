"""Node parameters: phases, complex weights, and symbolic template slots.

A :class:`Phase` is either an exact rational multiple of pi or a float in
radians; both are normalised into [0, 2 pi). Complex weights (ZW ``r``, ZH
``a``) are ``ExactScalar`` on the exact backend and ``complex`` otherwise.

Rule templates are built from the same constructors, fed with :class:`Var`
placeholders instead of concrete values; arithmetic on a ``Var`` produces
an :class:`Expr` tree that is evaluated once bindings are known.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

from .scalars import ExactScalar, to_complex as _scalar_to_complex

TWO_PI = 2.0 * math.pi
FLOAT_TOL = 1e-12


class Phase:
    """An angle. Exact phases are Fractions of pi reduced into [0, 2)."""

    __slots__ = ("_pi", "_rad")

    def __init__(self, value: Union[Fraction, int, float, "Phase"] = 0, *, radians: Optional[float] = None):
        if isinstance(value, Phase):
            self._pi, self._rad = value._pi, value._rad
            return
        if radians is not None:
            r = math.fmod(float(radians), TWO_PI)
            if r < 0:
                r += TWO_PI
            if r >= TWO_PI:
                r = 0.0
            self._pi, self._rad = None, r
            return
        if isinstance(value, float):
            raise TypeError("use Phase(radians=x) for float phases, Phase(Fraction) for multiples of pi")
        f = Fraction(value) % 2
        self._pi, self._rad = f, None

    @classmethod
    def pi(cls, num: int, den: int = 1) -> "Phase":
        """The exact phase num*pi/den."""
        return cls(Fraction(num, den))

    @property
    def is_exact(self) -> bool:
        return self._pi is not None

    @property
    def fraction(self) -> Optional[Fraction]:
        """The phase as a multiple of pi, or None for float phases."""
        return self._pi

    @property
    def exact_representable(self) -> bool:
        """True when e^{i phase} lies in Z[w, 1/sqrt2] (multiples of pi/4)."""
        return self._pi is not None and 4 % self._pi.denominator == 0

    def radians(self) -> float:
        if self._pi is not None:
            return float(self._pi) * math.pi
        return self._rad  # type: ignore[return-value]

    def omega_exponent(self) -> int:
        """j with e^{i phase} = w^j; only for exact-representable phases."""
        if not self.exact_representable:
            raise ValueError(f"{self} is not a multiple of pi/4")
        return int(self._pi * 4) % 8  # type: ignore[operator]

    def unit(self) -> complex:
        return cmath.exp(1j * self.radians())

    def exact_unit(self) -> ExactScalar:
        return ExactScalar.omega_power(self.omega_exponent())

    def __neg__(self) -> "Phase":
        if self._pi is not None:
            return Phase(-self._pi)
        return Phase(radians=-self._rad)  # type: ignore[operator]

    def __add__(self, other: Any):
        if isinstance(other, int):
            other = Phase(other)
        if isinstance(other, Phase):
            if self._pi is not None and other._pi is not None:
                return Phase(self._pi + other._pi)
            return Phase(radians=self.radians() + other.radians())
        if isinstance(other, Expr):
            return Add(Const(self), other)
        return NotImplemented

    def __radd__(self, other: Any):
        return self.__add__(other)

    def __sub__(self, other: Any):
        if isinstance(other, (Phase, int)):
            return self + (-Phase(other))
        if isinstance(other, Expr):
            return Add(Const(self), Neg(other))
        return NotImplemented

    def __rsub__(self, other: Any):
        return (-self).__add__(other)

    def __mul__(self, n: Any):
        if isinstance(n, int):
            if self._pi is not None:
                return Phase(self._pi * n)
            return Phase(radians=self._rad * n)  # type: ignore[operator]
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        if self._pi is not None and other._pi is not None:
            return self._pi == other._pi
        d = abs(self.radians() - other.radians())
        return min(d, TWO_PI - d) <= FLOAT_TOL

    def __hash__(self) -> int:
        if self._pi is not None:
            return hash(("phase", self._pi))
        return hash("float-phase")

    def __repr__(self) -> str:
        if self._pi is not None:
            return f"Phase.pi({self._pi.numerator}, {self._pi.denominator})"
        return f"Phase(radians={self._rad!r})"

    def __str__(self) -> str:
        if self._pi is not None:
            n, d = self._pi.numerator, self._pi.denominator
            if n == 0:
                return "0"
            head = "π" if n == 1 else f"{n}π"
            return head if d == 1 else f"{head}/{d}"
        return f"{self._rad:.12g}"


ZERO_PHASE = Phase(0)

Weight = Union[ExactScalar, complex]


def weight_to_complex(w: Weight) -> complex:
    if isinstance(w, ExactScalar):
        return _scalar_to_complex(w)
    return complex(w)


def weights_equal(a: Weight, b: Weight, tol: float = FLOAT_TOL) -> bool:
    if isinstance(a, ExactScalar) and isinstance(b, ExactScalar):
        return a == b
    return abs(weight_to_complex(a) - weight_to_complex(b)) <= tol


def conj_weight(w: Weight) -> Weight:
    if isinstance(w, ExactScalar):
        return w.conjugate()
    return complex(w).conjugate()


# symbolic template parameters ---------------------------------------------


class Expr:
    """Arithmetic over template variables; evaluated against bindings."""

    def eval(self, env: Mapping[str, Any]):
        raise NotImplementedError

    def free_vars(self) -> set[str]:
        raise NotImplementedError

    def __add__(self, other: Any) -> "Expr":
        return Add(self, _lift(other))

    def __radd__(self, other: Any) -> "Expr":
        return Add(_lift(other), self)

    def __sub__(self, other: Any) -> "Expr":
        return Add(self, Neg(_lift(other)))

    def __rsub__(self, other: Any) -> "Expr":
        return Add(_lift(other), Neg(self))

    def __neg__(self) -> "Expr":
        return Neg(self)

    def __mul__(self, other: Any) -> "Expr":
        return Mul(self, _lift(other))

    def __rmul__(self, other: Any) -> "Expr":
        return Mul(_lift(other), self)

    def conjugate(self) -> "Expr":
        return Conj(self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Expr) and type(self) is type(other) and repr(self) == repr(other)

    def __hash__(self) -> int:
        return hash((type(self).__name__, repr(self)))


def _lift(x: Any) -> Expr:
    return x if isinstance(x, Expr) else Const(x)


class Var(Expr):
    def __init__(self, name: str):
        self.name = name

    def eval(self, env):
        if self.name not in env:
            raise KeyError(self.name)
        return env[self.name]

    def free_vars(self):
        return {self.name}

    def __repr__(self):
        return self.name


class Const(Expr):
    def __init__(self, value: Any):
        self.value = value

    def eval(self, env):
        return self.value

    def free_vars(self):
        return set()

    def __repr__(self):
        return repr(self.value)


class Add(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b

    def eval(self, env):
        return self.a.eval(env) + self.b.eval(env)

    def free_vars(self):
        return self.a.free_vars() | self.b.free_vars()

    def __repr__(self):
        return f"({self.a!r} + {self.b!r})"


class Neg(Expr):
    def __init__(self, a: Expr):
        self.a = a

    def eval(self, env):
        return -self.a.eval(env)

    def free_vars(self):
        return self.a.free_vars()

    def __repr__(self):
        return f"-{self.a!r}"


class Mul(Expr):
    def __init__(self, a: Expr, b: Expr):
        self.a, self.b = a, b

    def eval(self, env):
        return self.a.eval(env) * self.b.eval(env)

    def free_vars(self):
        return self.a.free_vars() | self.b.free_vars()

    def __repr__(self):
        return f"({self.a!r} * {self.b!r})"


class Conj(Expr):
    def __init__(self, a: Expr):
        self.a = a

    def eval(self, env):
        v = self.a.eval(env)
        if isinstance(v, Phase):
            return -v
        return conj_weight(v)

    def free_vars(self):
        return self.a.free_vars()

    def __repr__(self):
        return f"conj({self.a!r})"


class Apply(Expr):
    """A named unary function of an expression (e.g. alpha -> e^{i alpha}).

    ``inverse`` (optional) maps a value back, returning None when the value
    is outside the image; it lets the matcher solve for the argument.
    """

    def __init__(self, fn, a: Expr, label: str = "f", inverse=None):
        self.fn, self.a, self.label, self.inverse = fn, a, label, inverse

    def eval(self, env):
        return self.fn(self.a.eval(env))

    def free_vars(self):
        return self.a.free_vars()

    def __repr__(self):
        return f"{self.label}({self.a!r})"


def is_symbolic(x: Any) -> bool:
    return isinstance(x, Expr)


def _divide(a: Any, b: Any) -> Any:
    if isinstance(a, ExactScalar) and isinstance(b, ExactScalar):
        from .scalars import ring_divide_exact

        if b.is_zero:
            return None
        return ring_divide_exact(a, b)
    b = weight_to_complex(b)
    if abs(b) < FLOAT_TOL:
        return None
    return weight_to_complex(a) / b


def solve_for(expr: Expr, target: Any, env: Mapping[str, Any]) -> Optional[tuple[str, Any]]:
    """Solve ``expr == target`` for its single unbound variable.

    Handles nestings of ``v``, ``-v``, ``x + c``, ``x * c`` (c evaluable) and
    invertible :class:`Apply`. Returns (name, value) or None.
    """
    if target is None:
        return None
    if isinstance(expr, Var):
        return expr.name, target
    if isinstance(expr, Neg):
        return solve_for(expr.a, -target, env)
    if isinstance(expr, Conj):
        return solve_for(expr.a, Conj(Const(target)).eval(env), env)
    if isinstance(expr, Apply):
        if expr.inverse is None:
            return None
        return solve_for(expr.a, expr.inverse(target), env)
    if isinstance(expr, (Add, Mul)):
        for var_side, const_side in ((expr.a, expr.b), (expr.b, expr.a)):
            if not (const_side.free_vars() - set(env)):
                c = const_side.eval(env)
                if isinstance(expr, Add):
                    rest = target - c
                elif isinstance(c, int):
                    return None  # phase multiples are not uniquely invertible
                else:
                    rest = _divide(target, c)
                sub = solve_for(var_side, rest, env)
                if sub is not None:
                    return sub
    return None


def values_equal(a: Any, b: Any, tol: float = FLOAT_TOL) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, Phase) or isinstance(b, Phase):
        return isinstance(a, Phase) and isinstance(b, Phase) and a == b
    return weights_equal(a, b, tol)
