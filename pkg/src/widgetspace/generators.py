"""Random-but-valid text producers referenced by widget definitions.

A generator takes a seeded ``random.Random`` and the validation context
and returns input text that the widget's resolved validator accepts.
Determinism in the seed is part of the contract; the Random instance is
the only entropy source a generator may touch.
"""

from __future__ import annotations

import calendar
from random import Random
from string import ascii_uppercase, digits

from .textio import NamedRegistry
from .validators import ValidatorContext

_ALNUM = ascii_uppercase + ascii_uppercase.lower() + digits


def gen_date_fbi(rng: Random, ctx: ValidatorContext) -> str:
    year = rng.randint(1900, 2099)
    month = rng.randint(1, 12)
    day = rng.randint(1, calendar.monthrange(year, month)[1])
    return f"{year:04d}{month:02d}{day:02d}"


def gen_sid(rng: Random, ctx: ValidatorContext) -> str:
    return "".join(rng.choice(_ALNUM) for _ in range(rng.randint(6, 12)))


def _letters(rng: Random, lo: int, hi: int) -> str:
    return "".join(rng.choice(ascii_uppercase) for _ in range(rng.randint(lo, hi)))


def gen_name_last(rng: Random, ctx: ValidatorContext) -> str:
    return _letters(rng, 1, 12)


def gen_name_first(rng: Random, ctx: ValidatorContext) -> str:
    return _letters(rng, 1, 12)


def gen_name_middle(rng: Random, ctx: ValidatorContext) -> str:
    # Middle names are optional everywhere; sometimes produce none.
    if rng.random() < 0.3:
        return ""
    return _letters(rng, 1, 12)


def gen_name_suffix(rng: Random, ctx: ValidatorContext) -> str:
    return rng.choice(("", "JR", "SR", "II", "III", "IV"))


def gen_alias_name(rng: Random, ctx: ValidatorContext) -> str:
    return _letters(rng, 3, 10)


def default_generator_registry() -> NamedRegistry:
    r = NamedRegistry("generator")
    r.register("gen-date-fbi", gen_date_fbi)
    r.register("gen-sid", gen_sid)
    r.register("gen-name-last", gen_name_last)
    r.register("gen-name-first", gen_name_first)
    r.register("gen-name-middle", gen_name_middle)
    r.register("gen-name-suffix", gen_name_suffix)
    r.register("gen-alias-name", gen_alias_name)
    return r
