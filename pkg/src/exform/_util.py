"""Small shared helpers: enumeration budgets and rational formatting."""

import os
from fractions import Fraction
from itertools import chain, combinations

from .errors import InputError


def budget(default):
    """
    Enumeration cap for exhaustive searches.

    The EXFORM_BUDGET environment variable, when set to a positive integer,
    overrides every module's default cap.
    """
    raw = os.environ.get("EXFORM_BUDGET")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"EXFORM_BUDGET must be an integer, got {raw!r}")
    if value <= 0:
        raise InputError("EXFORM_BUDGET must be positive")
    return value


def powerset(iterable):
    """All subsets of the iterable as tuples, smallest first."""
    items = list(iterable)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def parse_rational(text):
    """Parse "num/den" or "num" into an exact Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational: {text!r}")


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def partitions_of(items):
    """All set partitions of the given finite collection, as tuples of frozensets."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in partitions_of(rest):
        for k in range(len(sub)):
            yield sub[:k] + (sub[k] | {first},) + sub[k + 1:]
        yield sub + (frozenset({first}),)
