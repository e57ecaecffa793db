"""Exact scalars over the rationals Q and the Gaussian rationals Q(i).

Every quantity in this package is computed with exact arithmetic; there is
no floating point anywhere.  A :class:`Scalar` is either a rational number
(field tag ``"Q"``) or a Gaussian rational ``re + im*i`` (field tag
``"Qi"``).  Arithmetic between scalars of different field tags raises
:class:`~cliffock.errors.InvalidInput`; promotion is always explicit via
:meth:`Scalar.to_field`.

Serialization: rationals render as ``"p/q"`` strings in lowest terms and
Gaussian rationals as ``{"re": "p/q", "im": "r/s"}`` objects.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInput

Q = "Q"
QI = "Qi"

FIELDS = (Q, QI)


def _check_same(a: "Scalar", b: "Scalar") -> None:
    if a.field != b.field:
        raise InvalidInput(f"field mismatch: {a.field} vs {b.field}")


class Scalar:
    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        if im is None:
            self.im = None
        else:
            self.im = im if isinstance(im, Fraction) else Fraction(im)

    @property
    def field(self) -> str:
        return Q if self.im is None else QI

    @staticmethod
    def zero(field: str) -> "Scalar":
        return Scalar(0) if field == Q else Scalar(0, 0)

    @staticmethod
    def one(field: str) -> "Scalar":
        return Scalar(1) if field == Q else Scalar(1, 0)

    @staticmethod
    def i() -> "Scalar":
        return Scalar(0, 1)

    @staticmethod
    def of(value, field: str) -> "Scalar":
        """A scalar with the given rational value in the given field."""
        return Scalar(value) if field == Q else Scalar(value, 0)

    def to_field(self, field: str) -> "Scalar":
        if field == self.field:
            return self
        if field == QI and self.field == Q:
            return Scalar(self.re, 0)
        raise InvalidInput(f"cannot narrow {self.field} scalar to {field}")

    def is_zero(self) -> bool:
        return self.re == 0 and (self.im is None or self.im == 0)

    def is_one(self) -> bool:
        return self.re == 1 and (self.im is None or self.im == 0)

    def __add__(self, other: "Scalar") -> "Scalar":
        _check_same(self, other)
        if self.im is None:
            return Scalar(self.re + other.re)
        return Scalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Scalar") -> "Scalar":
        _check_same(self, other)
        if self.im is None:
            return Scalar(self.re - other.re)
        return Scalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Scalar":
        if self.im is None:
            return Scalar(-self.re)
        return Scalar(-self.re, -self.im)

    def __mul__(self, other: "Scalar") -> "Scalar":
        _check_same(self, other)
        if self.im is None:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "Scalar") -> "Scalar":
        _check_same(self, other)
        if other.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        if self.im is None:
            return Scalar(self.re / other.re)
        n = other.re * other.re + other.im * other.im
        return Scalar(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def inv(self) -> "Scalar":
        return Scalar.one(self.field) / self

    def conj(self) -> "Scalar":
        if self.im is None:
            return self
        return Scalar(self.re, -self.im)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if self.im is None:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"

    def to_json(self):
        if self.im is None:
            return str(self.re)
        return {"re": str(self.re), "im": str(self.im)}

    @staticmethod
    def from_json(data, field: str | None = None) -> "Scalar":
        if isinstance(data, str):
            s = Scalar(_parse_fraction(data))
        elif isinstance(data, dict):
            if set(data) != {"re", "im"}:
                raise InvalidInput(f"bad scalar object keys: {sorted(data)}")
            s = Scalar(_parse_fraction(data["re"]), _parse_fraction(data["im"]))
        elif isinstance(data, int):
            s = Scalar(data)
        else:
            raise InvalidInput(f"cannot parse scalar from {data!r}")
        if field is not None and s.field != field:
            s = s.to_field(field)
        return s


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad rational literal {text!r}") from exc
