"""Text syntax for polynomial expressions: ``3*a11^2 - 1/2*a12``.

The parser is deliberately small.  An expression is a signed sum of terms;
a term is a ``*``-separated product of rational numbers and ``name^k``
factors.  Parentheses are not supported.
"""
import re
from fractions import Fraction

NAME = r"[A-Za-z][A-Za-z0-9_]*"
_TOKEN = re.compile(
    rf"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>{NAME})|(?P<op>[-+*^])|(?P<bad>\S))"
)


class ParseError(ValueError):
    pass


def parse_rational(text):
    text = text.strip().replace("−", "-")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc
    return int(value) if value.denominator == 1 else value


def _tokens(text):
    pos = 0
    out = []
    text = text.replace("−", "-")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r} in {text!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
    return out


def parse_terms(text):
    """Parse into a list of ``(coefficient, {name: exponent})`` pairs.

    Repeated names inside one term are multiplied; like terms are *not*
    combined here.
    """
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty expression")
    terms = []
    i = 0
    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val = toks[i]
        if kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            i += 1
            expect_term = True
            continue
        if not expect_term:
            raise ParseError(f"missing operator before {val!r} in {text!r}")
        coeff = Fraction(sign)
        powers = {}
        while True:
            if i >= len(toks):
                raise ParseError(f"dangling operator in {text!r}")
            kind, val = toks[i]
            if kind == "num":
                coeff *= Fraction(val)
                i += 1
            elif kind == "name":
                i += 1
                exp = 1
                if i < len(toks) and toks[i] == ("op", "^"):
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise ParseError(f"exponent must be a non-negative integer in {text!r}")
                    exp = int(toks[i + 1][1])
                    i += 2
                powers[val] = powers.get(val, 0) + exp
            else:
                raise ParseError(f"unexpected {val!r} in {text!r}")
            if i < len(toks) and toks[i] == ("op", "*"):
                i += 1
                continue
            break
        if coeff.denominator == 1:
            coeff = int(coeff)
        terms.append((coeff, {k: v for k, v in powers.items() if v}))
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError(f"dangling operator in {text!r}")
    return terms


def format_coeff(c):
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def format_monomial(powers):
    """``[("a11", 2), ("x", 1)]`` -> ``a11^2*x``."""
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in powers if e)


def format_sum(pieces):
    """Join ``(coeff, monomial_text)`` pairs into ``3*a - 1/2*b + 1``."""
    if not pieces:
        return "0"
    out = []
    for k, (c, mono) in enumerate(pieces):
        neg = c < 0
        mag = -c if neg else c
        if mono:
            body = mono if mag == 1 else f"{format_coeff(mag)}*{mono}"
        else:
            body = format_coeff(mag)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
