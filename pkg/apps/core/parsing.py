"""
Command-line scalars: rationals as "p/q" or decimals, complex numbers as
"x+yi", vectors as comma lists and substitutions as "a,b;c,d".
"""

import re
from fractions import Fraction
from typing import Tuple

from apps.core.exceptions import SpecError

_NUMBER = re.compile(r'^[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?$')


def parse_rational(text: str) -> Fraction:
    """'3', '-1/4' or '0.25', read exactly."""
    text = str(text).strip()
    if not _NUMBER.match(text):
        raise SpecError(f"cannot read '{text}' as a rational number")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"cannot read '{text}' as a rational number") from exc


def parse_complex(text: str) -> Tuple[Fraction, Fraction]:
    """
    'x+yi' with rational or decimal parts; either part may be missing.

    Examples: 'i', '-i', '2i', '1/3+1/2i', '-0.25+0.25i', '0.5'.
    """
    text = str(text).replace(' ', '')
    if not text:
        raise SpecError("empty complex number")
    if not text.endswith('i'):
        return parse_rational(text), Fraction(0)
    body = text[:-1]
    split = max(body.rfind('+'), body.rfind('-'))
    if split > 0:
        real, imag = body[:split], body[split:]
    else:
        real, imag = '', body
    if imag in ('', '+', '-'):
        imag += '1'
    return (parse_rational(real) if real else Fraction(0)), parse_rational(imag)


def parse_vector(text: str) -> Tuple[Fraction, ...]:
    """'1/2,0,-1'"""
    parts = [p for p in str(text).replace(' ', '').split(',') if p]
    if not parts:
        raise SpecError("empty vector")
    return tuple(parse_rational(p) for p in parts)


def parse_matrix(text: str) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """'a,b;c,d' with integer entries."""
    rows = str(text).replace(' ', '').split(';')
    try:
        entries = [[int(x) for x in row.split(',')] for row in rows]
    except ValueError as exc:
        raise SpecError(f"cannot read '{text}' as an integer matrix") from exc
    if len(entries) != 2 or any(len(r) != 2 for r in entries):
        raise SpecError(f"'{text}' is not a 2x2 matrix")
    return (entries[0][0], entries[0][1]), (entries[1][0], entries[1][1])
