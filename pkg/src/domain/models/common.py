"""Shared pydantic field types."""

from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Annotated, Union

from pydantic import PlainSerializer


def decimal_to_json(value: Decimal) -> Union[int, float]:
    """Render a decimal as a JSON number, integral values as integers."""
    if value == value.to_integral_value():
        return int(value)
    return float(value)


# Decimal that serializes to a JSON number instead of a string
JsonDecimal = Annotated[Decimal, PlainSerializer(decimal_to_json, return_type=Union[int, float], when_used='json')]


def format_decimal(value: Decimal) -> str:
    """Plain decimal notation, no exponent."""
    return format(value, 'f')


def fraction_to_decimal(value: Fraction) -> Decimal:
    """Exact decimal for fractions whose denominator divides a power of ten."""
    numerator, denominator = value.numerator, value.denominator
    with localcontext() as ctx:
        ctx.prec = max(28, len(str(numerator)) + len(str(denominator)) + 2)
        return Decimal(numerator) / Decimal(denominator)


class FrozenDict(dict):
    """Read-only dict for fields of frozen models; hashable when its values are."""

    def _readonly(self, *args, **kwargs):
        raise TypeError(f"'{type(self).__name__}' object is read-only")

    __setitem__ = __delitem__ = __ior__ = _readonly
    clear = pop = popitem = setdefault = update = _readonly

    def __hash__(self) -> int:
        return hash(frozenset(self.items()))

    def __reduce__(self):
        return type(self), (dict(self),)

    def __repr__(self) -> str:
        return dict.__repr__(self)
