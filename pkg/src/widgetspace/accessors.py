"""Explicit storage accessors that widget definitions can name.

Most widgets bind a table and get synthesized accessors; these are for
the rest. An explicit getter receives ``(db, name, index, locale)`` and
returns a datum; a setter receives the value as a fifth argument.

``person-name-from-fields`` assembles a PersonName from the four
demographics name fields, so a display-only widget can render a full
name that is stored piecemeal.
"""

from __future__ import annotations

from .datum import UNINITIALIZED, PersonName, is_uninitialized, maybe_or_default
from .errors import WrongVariantError
from .textio import NamedRegistry

_TABLE = "demographics"
_PARTS = ("last", "first", "middle", "suffix")


def person_name_getter(db, name, index, locale):
    fields = [db.get(_TABLE, f"name-{part}") for part in _PARTS]
    if all(is_uninitialized(f) for f in fields):
        return UNINITIALIZED
    return PersonName(*(maybe_or_default(f, "") for f in fields))


def person_name_setter(db, name, index, locale, value):
    if not isinstance(value, PersonName):
        raise WrongVariantError(f"expected a name, got {type(value).__name__}")
    for part in _PARTS:
        db.put(_TABLE, f"name-{part}", getattr(value, part))


def default_getter_registry() -> NamedRegistry:
    r = NamedRegistry("getter")
    r.register("person-name-from-fields", person_name_getter)
    return r


def default_setter_registry() -> NamedRegistry:
    r = NamedRegistry("setter")
    r.register("person-name-to-fields", person_name_setter)
    return r
