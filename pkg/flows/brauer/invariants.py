"""
Aritmética exata em Q/Z.

Um QZInvariant é uma fração reduzida a/b com 0 <= a < b (zero = 0/1). É o
invariante de Hasse de uma classe de Brauer local. Serializa como "a/b".
"""

import re
from fractions import Fraction
from math import gcd
from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator
from sympy import factorint

from shared.errors import InputError

_INVARIANT_TEXT = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(-?\d+)\s*)?$")


class QZInvariant(BaseModel):
    """Elemento canônico de Q/Z."""

    model_config = ConfigDict(frozen=True)

    numerator: int = Field(ge=0)
    denominator: int = Field(ge=1)

    @model_validator(mode="before")
    @classmethod
    def parse_text(cls, value: Any) -> Any:
        """Aceita "a/b" (ou "a") e reduz mod 1."""
        if isinstance(value, str):
            match = _INVARIANT_TEXT.match(value)
            if not match:
                raise InputError("invalid-invariant", f"invariante malformado: '{value}'")
            num = int(match.group(1))
            den = int(match.group(2)) if match.group(2) is not None else 1
            canonical = reduce(num, den)
            return {"numerator": canonical.numerator, "denominator": canonical.denominator}
        return value

    @model_validator(mode="after")
    def check_canonical(self) -> "QZInvariant":
        # 0/1 é o único zero: gcd(0, b) = b obriga b = 1
        if self.numerator >= self.denominator or gcd(self.numerator, self.denominator) != 1:
            raise InputError(
                "invalid-invariant",
                f"{self.numerator}/{self.denominator} não está na forma canônica",
            )
        return self

    @model_serializer
    def serialize(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


ZERO = QZInvariant(numerator=0, denominator=1)


def reduce(num: int, den: int) -> QZInvariant:
    """
    Representante canônico de num/den mod 1.

    Args:
        num: Numerador (qualquer inteiro)
        den: Denominador (não nulo)

    Returns:
        QZInvariant canônico

    Raises:
        InputError: den = 0 (invalid-denominator)

    Example:
        reduce(6, 8)   -> 3/4
        reduce(13, 12) -> 1/12
    """
    if den == 0:
        raise InputError("invalid-denominator", f"denominador nulo em {num}/{den}")
    value = Fraction(num, den) % 1
    return QZInvariant(numerator=value.numerator, denominator=value.denominator)


def from_fraction(value: Fraction) -> QZInvariant:
    return reduce(value.numerator, value.denominator)


def order(x: QZInvariant) -> int:
    """Ordem aditiva (o denominador)."""
    return x.denominator


def add(x: QZInvariant, y: QZInvariant) -> QZInvariant:
    return from_fraction(x.as_fraction() + y.as_fraction())


def scale(x: QZInvariant, m: int) -> QZInvariant:
    """m·x em Q/Z, com m >= 0."""
    if m < 0:
        raise InputError("invalid-scalar", f"escalar negativo: {m}")
    return from_fraction(x.as_fraction() * m)


def total(values) -> QZInvariant:
    """Soma de uma coleção de invariantes."""
    result = ZERO
    for value in values:
        result = add(result, value)
    return result


def primary_split(x: QZInvariant) -> Dict[int, QZInvariant]:
    """
    Decomposição primária: uma componente de ordem p-potência por primo p
    que divide a ordem de x; as componentes somam x.

    Para N = p^e · m com gcd(p, m) = 1, a componente p é a·m⁻¹ (mod p^e) / p^e.

    Example:
        primary_split(1/12) -> {2: 3/4, 3: 1/3}
    """
    components: Dict[int, QZInvariant] = {}
    for prime, exponent in sorted(factorint(x.denominator).items()):
        prime_power = prime ** exponent
        cofactor = x.denominator // prime_power
        components[prime] = reduce(x.numerator * pow(cofactor, -1, prime_power), prime_power)
    return components
