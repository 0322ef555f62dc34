"""Base fields: the rationals and prime fields, in infinite or functions-model form."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

RATIONAL = "RationalInfinite"
PRIME_INFINITE = "PrimeInfinite"
FINITE = "Finite"


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldMode:
    """Which scalars are in play and whether indeterminates obey x**q == x.

    ``RationalInfinite`` is Q. ``PrimeInfinite(p)`` stands for an infinite field
    of characteristic p: coefficients live in F_p, polynomial exponents are never
    reduced. ``Finite(q)`` is the q-element field in the functions model.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.p is not None:
                raise FieldError("the rational mode takes no characteristic")
        elif self.kind in (PRIME_INFINITE, FINITE):
            if self.p is None or self.p < 2:
                raise FieldError(f"invalid field size {self.p}")
            if not _is_prime(self.p):
                # prime powers would need extension arithmetic
                raise FieldError(f"only prime fields are supported, got {self.p}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> FieldMode:
        return cls(RATIONAL)

    @classmethod
    def prime_infinite(cls, p: int) -> FieldMode:
        return cls(PRIME_INFINITE, p)

    @classmethod
    def finite(cls, q: int) -> FieldMode:
        return cls(FINITE, q)

    @classmethod
    def parse(cls, text: str) -> FieldMode:
        """Accepts ``Q``, ``F<p>`` (finite) and ``F<p>-inf`` / ``Fp<p>-inf``."""
        t = text.strip()
        if t.upper() in ("Q", "QQ"):
            return cls.rational()
        m = re.fullmatch(r"Fp?(\d+)(-inf)?", t, flags=re.IGNORECASE)
        if not m:
            raise FieldError(f"cannot parse field mode {text!r}")
        p = int(m.group(1))
        return cls.prime_infinite(p) if m.group(2) else cls.finite(p)

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def q(self) -> int | None:
        """Field size when finite, else None."""
        return self.p if self.kind == FINITE else None

    @property
    def size_bound(self) -> int | None:
        """Exclusive exponent bound used by the basis theorems (|K| or None)."""
        return self.q

    def coerce(self, x):
        """Map an int or Fraction into this field's representation."""
        if self.p is None:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def inv(self, x):
        if self.p is None:
            return Fraction(1) / x
        return pow(x, -1, self.p)

    def elements(self):
        if not self.is_finite:
            raise FieldError("only a finite field can be enumerated")
        return range(self.p)

    def label(self) -> str:
        if self.kind == RATIONAL:
            return "Q"
        if self.kind == PRIME_INFINITE:
            return f"F{self.p}-inf"
        return f"F{self.p}"

    def __str__(self):
        return self.label()
