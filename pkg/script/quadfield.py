"""
Exact arithmetic in the real quadratic field generated by a metallic mean.

Every number is stored as ``a + b*beta`` with rational ``a`` and ``b`` where
``beta`` is the positive root of ``x**2 - n*x - 1``.  Comparisons, floors and
fractional parts are decided exactly, without floating point.
"""
from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Callable, Dict, List, Tuple, Union

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")

# Continued-fraction convergents of [n; n, n, ...] per n, grown on demand.
_CONVERGENTS: Dict[int, List[Tuple[int, int]]] = {}


class FieldMismatchError(ValueError):
    """Raised when numbers from fields with different ``n`` are combined."""


@dataclass(frozen=True)
class FieldSpec:
    """The field Q(beta) for the n-th metallic mean."""

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    def __call__(self, a: Rational = 0, b: Rational = 0) -> "QuadNum":
        return QuadNum(a, b, self)

    def coerce(self, value: Union["QuadNum", Rational]) -> "QuadNum":
        """Lift a rational into the field; QuadNums must belong to this field."""
        if isinstance(value, QuadNum):
            if value.spec != self:
                raise FieldMismatchError(f"expected n={self.n}, got n={value.spec.n}")
            return value
        return QuadNum(value, 0, self)

    @property
    def zero(self) -> "QuadNum":
        return QuadNum(0, 0, self)

    @property
    def one(self) -> "QuadNum":
        return QuadNum(1, 0, self)

    @property
    def beta(self) -> "QuadNum":
        return QuadNum(0, 1, self)

    @property
    def beta_inv(self) -> "QuadNum":
        """beta**-1 = beta - n."""
        return QuadNum(-self.n, 1, self)

    @property
    def beta_star(self) -> "QuadNum":
        """The conjugate root n - beta = -beta**-1."""
        return QuadNum(self.n, -1, self)

    def beta_float(self) -> float:
        """Display-only approximation of beta."""
        return (self.n + math.sqrt(self.n * self.n + 4)) / 2


@lru_cache(maxsize=None)
def field(n: int) -> FieldSpec:
    """Shared FieldSpec instance for ``n``."""
    return FieldSpec(n)


def _convergent(n: int, k: int) -> Tuple[int, int]:
    table = _CONVERGENTS.setdefault(n, [(n, 1), (n * n + 1, n)])
    while len(table) <= k:
        (p2, q2), (p1, q1) = table[-2], table[-1]
        table.append((n * p1 + p2, n * q1 + q2))
    return table[k]


def floor_scaled(num_a: int, num_b: int, den: int, n: int) -> int:
    """Floor of ``(num_a + num_b*beta) / den`` for integers with ``den > 0``.

    beta is bracketed by consecutive convergents of its continued fraction
    until both ends of the resulting interval share the same integer part.
    """
    if num_b == 0:
        return num_a // den
    k = 0
    while True:
        p_lo, q_lo = _convergent(n, k)
        p_hi, q_hi = _convergent(n, k + 1)
        first = (num_a * q_lo + num_b * p_lo) // (den * q_lo)
        second = (num_a * q_hi + num_b * p_hi) // (den * q_hi)
        if first == second:
            return first
        k += 1


def _common_denominator(a: Fraction, b: Fraction) -> Tuple[int, int, int]:
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return a.numerator * (den // a.denominator), b.numerator * (den // b.denominator), den


@total_ordering
class QuadNum:
    """An exact element ``a + b*beta`` of Q(beta)."""

    __slots__ = ("_a", "_b", "_spec")

    def __init__(self, a: Rational, b: Rational, spec: FieldSpec) -> None:
        self._a = Fraction(a)
        self._b = Fraction(b)
        self._spec = spec

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def spec(self) -> FieldSpec:
        return self._spec

    @property
    def n(self) -> int:
        return self._spec.n

    def __repr__(self) -> str:
        return f"QuadNum({self._a}, {self._b}, n={self._spec.n})"

    def __str__(self) -> str:
        return render(self)

    def __getstate__(self):
        return (self._a, self._b, self._spec)

    def __setstate__(self, state) -> None:
        self._a, self._b, self._spec = state

    # -- coercion -------------------------------------------------------------
    def _coerce(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            if other._spec != self._spec:
                raise FieldMismatchError(
                    f"cannot combine numbers of Q(beta_{self._spec.n}) and Q(beta_{other._spec.n})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(other, 0, self._spec)
        return NotImplemented

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._a == other._a and self._b == other._b

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        # rationals compare equal to int and Fraction, so they must hash alike
        if not self._b:
            return hash(self._a)
        return hash((self._a, self._b, self._spec.n))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def is_zero(self) -> bool:
        return not self._a and not self._b

    def is_rational(self) -> bool:
        return not self._b

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "QuadNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadNum(self._a + other._a, self._b + other._b, self._spec)

    __radd__ = __add__

    def __neg__(self) -> "QuadNum":
        return QuadNum(-self._a, -self._b, self._spec)

    def __sub__(self, other) -> "QuadNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadNum(self._a - other._a, self._b - other._b, self._spec)

    def __rsub__(self, other) -> "QuadNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "QuadNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        # beta**2 = n*beta + 1
        cross = b1 * b2
        return QuadNum(a1 * a2 + cross, a1 * b2 + a2 * b1 + self._spec.n * cross, self._spec)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNum":
        """Image under beta -> n - beta."""
        return QuadNum(self._a + self._b * self._spec.n, -self._b, self._spec)

    def norm(self) -> Fraction:
        a, b = self._a, self._b
        return a * a + a * b * self._spec.n - b * b

    def inverse(self) -> "QuadNum":
        norm = self.norm()
        if not norm:
            raise ZeroDivisionError("division by zero in Q(beta)")
        conj = self.conjugate()
        return QuadNum(conj._a / norm, conj._b / norm, self._spec)

    def __truediv__(self, other) -> "QuadNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QuadNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "QuadNum":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self._spec.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __abs__(self) -> "QuadNum":
        return -self if self.sign() < 0 else self

    # -- order structure ------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``a + b*beta``."""
        a, b = self._a, self._b
        if not b:
            return (a > 0) - (a < 0)
        t = -a / b
        # beta > t  iff  t < 0 or t**2 - n*t - 1 < 0
        beta_above = t < 0 or t * t - self._spec.n * t - 1 < 0
        return (1 if b > 0 else -1) * (1 if beta_above else -1)

    def floor(self) -> int:
        if not self._b:
            return math.floor(self._a)
        num_a, num_b, den = _common_denominator(self._a, self._b)
        return floor_scaled(num_a, num_b, den, self._spec.n)

    def __floor__(self) -> int:
        return self.floor()

    def frac(self) -> "QuadNum":
        return self - self.floor()

    def scaled_integers(self) -> Tuple[int, int, int]:
        """Integers ``(A, B, D)`` with ``self == (A + B*beta) / D`` and ``D > 0``."""
        return _common_denominator(self._a, self._b)

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * self._spec.beta_float()

    def to_json(self) -> Dict[str, str]:
        return {"a": str(self._a), "b": str(self._b)}


def sign(x: QuadNum) -> int:
    return x.sign()


def floor(x: QuadNum) -> int:
    return x.floor()


def frac(x: QuadNum) -> QuadNum:
    return x.frac()


_OPERATORS: Dict[str, Callable[[QuadNum, QuadNum], QuadNum]] = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def arith(x: QuadNum, y: QuadNum, op: str) -> QuadNum:
    """Apply one of ``+ - * /`` (or their typographic forms) to two field elements."""
    try:
        func = _OPERATORS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    if not isinstance(y, QuadNum) or not isinstance(x, QuadNum):
        raise TypeError("arith expects two QuadNum operands")
    return func(x, y)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(text)


def parse(text: str, spec: FieldSpec) -> QuadNum:
    """Parse ``p/q`` or ``p/q +- r/s*beta`` (the ``*`` is optional)."""
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty expression")
    if not body.endswith("beta"):
        return QuadNum(parse_rational(body), 0, spec)
    body = body[: -len("beta")]
    if body.endswith("*"):
        body = body[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        a_text, b_text = body[:cut], body[cut:]
    else:
        a_text, b_text = "", body
    a = parse_rational(a_text) if a_text else Fraction(0)
    if b_text in ("", "+"):
        b = Fraction(1)
    elif b_text == "-":
        b = Fraction(-1)
    else:
        b = parse_rational(b_text)
    return QuadNum(a, b, spec)


def render(x: QuadNum) -> str:
    """Inverse of :func:`parse`."""
    if not x.b:
        return str(x.a)
    coefficient = f"{x.b}*beta"
    if not x.a:
        return coefficient
    if x.b > 0:
        return f"{x.a}+{coefficient}"
    return f"{x.a}-{-x.b}*beta"


def from_json(obj: Dict[str, str], spec: FieldSpec) -> QuadNum:
    try:
        return QuadNum(parse_rational(obj["a"]), parse_rational(obj["b"]), spec)
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed number object {obj!r}: {e}") from e
