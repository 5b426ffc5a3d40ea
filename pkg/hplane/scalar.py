"""
Exact coefficient arithmetic for the hplane engine.

A Scalar is a Laurent polynomial in the central deformation parameters h and
h' (written ``hp`` in text) whose coefficients are Gaussian rationals
a + b*i with a, b exact fractions. Every coefficient in the engine is a
Scalar: algebra elements, forms, tensors and structure constants.

Example:
    >>> from hplane.scalar import Scalar, H, I
    >>> str((1 + I * H / 2) * (1 - I * H / 2))
    '1 + 1/4h^2'
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Tuple, Union

import sympy

from .exceptions import ScalarError

Gaussian = Tuple[Fraction, Fraction]
Powers = Tuple[int, int]
ScalarLike = Union["Scalar", int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)

SYMPY_H = sympy.Symbol("h")
SYMPY_HP = sympy.Symbol("hp")


def _gaussian_mul(a: Gaussian, b: Gaussian) -> Gaussian:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Scalar:
    """Immutable Gaussian-rational Laurent polynomial in h and h'."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[Powers, Gaussian] = None):
        """
        Build a scalar from a term map.

        Args:
            terms: Map (power of h, power of h') -> (real part, imaginary part).
                Zero coefficients are dropped.
        """
        clean = {}
        for powers, (re, im) in (terms or {}).items():
            re, im = Fraction(re), Fraction(im)
            if re or im:
                clean[(int(powers[0]), int(powers[1]))] = (re, im)
        self._terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls, value: Union[int, Fraction], imag: Union[int, Fraction] = 0) -> "Scalar":
        """Scalar with no h dependence."""
        return cls({(0, 0): (Fraction(value), Fraction(imag))})

    @classmethod
    def monomial(cls, h_power: int = 0, hp_power: int = 0, coeff: ScalarLike = 1) -> "Scalar":
        """coeff * h^h_power * hp^hp_power."""
        return cls.coerce(coeff) * cls({(h_power, hp_power): (_ONE, _ZERO)})

    @classmethod
    def coerce(cls, value: ScalarLike) -> "Scalar":
        """Accept ints, fractions and scalars wherever a scalar is expected."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise ScalarError(f"cannot use {type(value).__name__} as a scalar")

    @classmethod
    def parse_rational(cls, text: str) -> "Scalar":
        """Parse ``p`` or ``p/q`` into a constant scalar."""
        try:
            return cls.const(Fraction(text.replace(" ", "")))
        except (ValueError, ZeroDivisionError) as e:
            raise ScalarError(f"invalid rational '{text}': {str(e)}") from e

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Dict[Powers, Gaussian]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_unit(self) -> bool:
        """A single nonzero term is invertible in the Laurent ring."""
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(powers == (0, 0) for powers in self._terms)

    def constant_term(self) -> Gaussian:
        return self._terms.get((0, 0), (_ZERO, _ZERO))

    def min_h_power(self) -> int:
        return min((p[0] for p in self._terms), default=0)

    # -- ring operations ------------------------------------------------

    def __add__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except ScalarError:
            return NotImplemented
        out = dict(self._terms)
        for powers, (re, im) in other._terms.items():
            old = out.get(powers, (_ZERO, _ZERO))
            out[powers] = (old[0] + re, old[1] + im)
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({p: (-re, -im) for p, (re, im) in self._terms.items()})

    def __sub__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except ScalarError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except ScalarError:
            return NotImplemented
        out: Dict[Powers, Gaussian] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                prod = _gaussian_mul(c1, c2)
                old = out.get(key, (_ZERO, _ZERO))
                out[key] = (old[0] + prod[0], old[1] + prod[1])
        return Scalar(out)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """
        Invert a unit.

        Raises:
            ScalarError: If the scalar is zero or has more than one term
        """
        if not self.is_unit():
            raise ScalarError(f"non-invertible scalar: {self}")
        ((a, b), (re, im)), = self._terms.items()
        norm = re * re + im * im
        return Scalar({(-a, -b): (re / norm, -im / norm)})

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except ScalarError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugate with h and h' treated as real."""
        return Scalar({p: (re, -im) for p, (re, im) in self._terms.items()})

    # -- limits and substitutions -----------------------------------------

    def limit_at_zero(self) -> "Scalar":
        """
        Substitute h = h' = 0.

        Raises:
            ScalarError: If a negative power of h or h' is present
        """
        for a, b in self._terms:
            if a < 0 or b < 0:
                raise ScalarError(f"singular limit: {self}")
        return Scalar({(0, 0): self.constant_term()})

    def substitute_hp(self, factor: "Scalar") -> "Scalar":
        """Replace h' by ``factor`` (a scalar in h only, e.g. n*h or n*h/2)."""
        result = ZERO
        for (a, b), coeff in self._terms.items():
            result = result + Scalar({(a, 0): coeff}) * factor ** b
        return result

    def coefficient(self, h_power: int, hp_power: int = 0) -> "Scalar":
        """Constant coefficient of h^h_power hp^hp_power."""
        return Scalar({(0, 0): self._terms.get((h_power, hp_power), (_ZERO, _ZERO))})

    def shift_h(self, power: int) -> "Scalar":
        return Scalar({(a + power, b): c for (a, b), c in self._terms.items()})

    # -- sympy bridge ---------------------------------------------------

    def to_sympy(self) -> sympy.Expr:
        expr = sympy.Integer(0)
        for (a, b), (re, im) in self._terms.items():
            coeff = sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(
                im.numerator, im.denominator
            )
            expr += coeff * SYMPY_H ** a * SYMPY_HP ** b
        return expr

    @classmethod
    def from_sympy(cls, expr: sympy.Expr) -> "Scalar":
        """
        Convert an expanded sympy Laurent polynomial back to a Scalar.

        Raises:
            ScalarError: If the expression is not a Laurent polynomial in h, hp
        """
        out: Dict[Powers, Gaussian] = {}
        for term in sympy.Add.make_args(sympy.expand(expr)):
            coeff: Gaussian = (_ONE, _ZERO)
            h_power = hp_power = 0
            for factor in sympy.Mul.make_args(term):
                if factor.is_Rational:
                    value = Fraction(int(factor.p), int(factor.q))
                    coeff = (coeff[0] * value, coeff[1] * value)
                elif factor == sympy.I:
                    coeff = (-coeff[1], coeff[0])
                elif factor == SYMPY_H:
                    h_power += 1
                elif factor == SYMPY_HP:
                    hp_power += 1
                elif factor.is_Pow and factor.base in (SYMPY_H, SYMPY_HP) and factor.exp.is_Integer:
                    if factor.base == SYMPY_H:
                        h_power += int(factor.exp)
                    else:
                        hp_power += int(factor.exp)
                else:
                    raise ScalarError(f"not a Laurent polynomial in h, hp: {expr}")
            old = out.get((h_power, hp_power), (_ZERO, _ZERO))
            out[(h_power, hp_power)] = (old[0] + coeff[0], old[1] + coeff[1])
        return cls(out)

    # -- comparison and rendering ---------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = [
            format_term(Scalar({(0, 0): coeff}), _format_powers(powers))
            for powers, coeff in sorted(self._terms.items())
        ]
        return join_terms(pieces)

    def sorted_terms(self) -> List[Tuple[Powers, Gaussian]]:
        return sorted(self._terms.items())


def _format_powers(powers: Powers) -> str:
    parts = []
    for name, power in (("h", powers[0]), ("hp", powers[1])):
        if power == 1:
            parts.append(name)
        elif power:
            parts.append(f"{name}^{power}")
    return "*".join(parts)


def _format_gaussian(re: Fraction, im: Fraction) -> str:
    if not im:
        return _format_fraction(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{_format_fraction(im)}*i"
    if not re:
        return imag
    sign = " - " if imag.startswith("-") else " + "
    return f"({_format_fraction(re)}{sign}{imag.lstrip('-')})"


def format_term(coefficient: Scalar, body: str) -> str:
    """
    Render ``coefficient * body`` the way reports print terms.

    Rational coefficients are written in front of the body (``2h``,
    ``-1/2h^2``); imaginary ones are joined with ``*``; scalars with several
    terms are parenthesized when they multiply a body.

    Args:
        coefficient: Nonzero scalar multiplying the body
        body: Rendered monomial, or "" for a bare scalar

    Returns:
        Text of a single term, possibly starting with "-"
    """
    if len(coefficient._terms) > 1:
        return f"({coefficient})*{body}" if body else str(coefficient)
    ((powers, (re, im)),) = coefficient._terms.items()
    mono = _format_powers(powers)
    if mono and body:
        mono = f"{mono}*{body}"
    elif body:
        mono = body
    if not mono:
        return _format_gaussian(re, im)
    if not im:
        if re == 1:
            return mono
        if re == -1:
            return f"-{mono}"
        return f"{_format_fraction(re)}{mono}"
    if not re and im in (1, -1):
        return f"{'-' if im < 0 else ''}i*{mono}"
    return f"{_format_gaussian(re, im)}*{mono}"


def join_terms(pieces: Iterable[str]) -> str:
    """Join rendered terms with `` + `` / `` - ``."""
    text = ""
    for piece in pieces:
        if not text:
            text = piece
        elif piece.startswith("-"):
            text += f" - {piece[1:]}"
        else:
            text += f" + {piece}"
    return text or "0"


ZERO = Scalar()
ONE = Scalar.const(1)
H = Scalar.monomial(1, 0)
HP = Scalar.monomial(0, 1)
I = Scalar.const(0, 1)
