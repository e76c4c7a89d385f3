"""Validator combinator algebra and the built-in base validators.

A validator expression is a tree: base validators at the leaves, ``And``,
``Or``, and ``Not`` above them. Evaluation reports failure by raising
:class:`ValidationError`; ``Or`` suppresses its children's errors and
signals its own message, ``Not`` inverts its child.

Validators see the input text and a (name, locale, medium) context. The
context deliberately has no occurrence index: rules may vary by
jurisdiction and by usage, never by which occurrence is being checked.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from string import ascii_letters, digits
from typing import Callable, Union

from .errors import (DuplicateNameError, InvalidSpecError, UnknownValidatorError,
                     ValidationError)


@dataclass(frozen=True)
class ValidatorContext:
    """Where an input came from. No index on purpose: rules are index-blind."""

    name: str
    locale: str
    medium: str


@dataclass(frozen=True)
class Base:
    """A reference to a registered base validator, with its arguments."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("'and' needs at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple
    message: str

    def __post_init__(self):
        if not self.children:
            raise ValueError("'or' needs at least one child")
        if not isinstance(self.message, str) or not self.message:
            raise ValueError("'or' requires a non-empty message")


@dataclass(frozen=True)
class Not:
    child: "ValidatorExpr"
    message: str

    def __post_init__(self):
        if not isinstance(self.message, str) or not self.message:
            raise ValueError("'not' requires a non-empty message")


ValidatorExpr = Union[Base, And, Or, Not]


def expand_template(template: str, *args) -> str:
    """Minimal positional template substitution: ~A and ~D insert the next argument."""
    out: list[str] = []
    values = iter(args)
    i = 0
    while i < len(template):
        ch = template[i]
        if ch == "~" and i + 1 < len(template) and template[i + 1] in "AaDd":
            try:
                out.append(str(next(values)))
            except StopIteration:
                raise ValueError(f"template {template!r} needs more arguments") from None
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def validation_error(value: str, template: str, *args):
    """Signal a validation failure with a templated message."""
    raise ValidationError(value, expand_template(template, *args))


BaseImpl = Callable[[ValidatorContext, tuple, str], None]


class ValidatorRegistry:
    """Name -> base validator table with arity bounds.

    Names are case-insensitive. Re-registration requires ``replace=True``
    (hot patching); otherwise duplicates are rejected.
    """

    def __init__(self):
        self._entries: dict[str, tuple[int, int, BaseImpl]] = {}

    def register(self, name: str, min_args: int, max_args: int, impl: BaseImpl,
                 *, replace: bool = False) -> None:
        if not (isinstance(min_args, int) and isinstance(max_args, int)
                and 0 <= min_args <= max_args):
            raise ValueError(f"invalid arity range [{min_args}, {max_args}]")
        key = name.lower()
        if key in self._entries and not replace:
            raise DuplicateNameError(f"validator '{key}' is already registered")
        self._entries[key] = (min_args, max_args, impl)

    def __contains__(self, name: str) -> bool:
        return name.lower() in self._entries

    def names(self) -> list[str]:
        return sorted(self._entries)

    def _lookup(self, name: str) -> tuple[int, int, BaseImpl]:
        try:
            return self._entries[name.lower()]
        except KeyError:
            raise UnknownValidatorError(f"unknown validator '{name}'") from None

    def check_expr(self, expr: ValidatorExpr) -> None:
        """Load-time check: every base name registered, argument counts in range."""
        if isinstance(expr, Base):
            lo, hi, _ = self._lookup(expr.name)
            n = len(expr.args)
            if not lo <= n <= hi:
                raise InvalidSpecError(
                    f"validator '{expr.name}' takes {_arity_text(lo, hi)}, got {n}")
        elif isinstance(expr, And):
            for child in expr.children:
                self.check_expr(child)
        elif isinstance(expr, Or):
            for child in expr.children:
                self.check_expr(child)
        elif isinstance(expr, Not):
            self.check_expr(expr.child)
        else:
            raise TypeError(f"not a validator expression: {expr!r}")

    def validate(self, expr: ValidatorExpr, ctx: ValidatorContext, text: str) -> None:
        """Evaluate ``expr`` against ``text``; raise ValidationError on failure.

        ``And`` stops at the first failing child. ``Or`` succeeds on the
        first passing child and otherwise reports its own message,
        discarding the children's.
        """
        if isinstance(expr, Base):
            lo, hi, impl = self._lookup(expr.name)
            n = len(expr.args)
            if not lo <= n <= hi:
                raise InvalidSpecError(
                    f"validator '{expr.name}' takes {_arity_text(lo, hi)}, got {n}")
            impl(ctx, expr.args, text)
        elif isinstance(expr, And):
            for child in expr.children:
                self.validate(child, ctx, text)
        elif isinstance(expr, Or):
            for child in expr.children:
                try:
                    self.validate(child, ctx, text)
                    return
                except ValidationError:
                    continue
            raise ValidationError(text, expr.message)
        elif isinstance(expr, Not):
            try:
                self.validate(expr.child, ctx, text)
            except ValidationError:
                return
            raise ValidationError(text, expr.message)
        else:
            raise TypeError(f"not a validator expression: {expr!r}")


def _arity_text(lo: int, hi: int) -> str:
    if lo == hi:
        return f"{lo} argument{'s' if lo != 1 else ''}"
    return f"{lo} to {hi} arguments"


# --- built-in base validators ----------------------------------------------

_DIGITS = set(digits)
_LETTERS = set(ascii_letters)
_ALPHABETIC = _LETTERS | {" ", "-"}
_ALPHANUMERIC = _LETTERS | _DIGITS


def _numeric(ctx, args, text):
    for ch in text:
        if ch not in _DIGITS:
            validation_error(text, "The character '~A' is not numeric", ch)


def _length(ctx, args, text):
    lo, hi = args
    if not isinstance(lo, int) or not isinstance(hi, int):
        raise InvalidSpecError("'length' arguments must be integers")
    if len(text) < lo:
        validation_error(text, "Length must be larger than ~D", lo)
    if len(text) > hi:
        validation_error(text, "Length must be smaller than ~D", hi)


def _alphabetic(ctx, args, text):
    for ch in text:
        if ch not in _ALPHABETIC:
            validation_error(text, "The character '~A' is not alphabetic", ch)


def _strictly_alphabetic(ctx, args, text):
    for ch in text:
        if ch not in _LETTERS:
            validation_error(text, "The character '~A' is not alphabetic", ch)


def _alphanumeric(ctx, args, text):
    for ch in text:
        if ch not in _ALPHANUMERIC:
            validation_error(text, "The character '~A' is not alphanumeric", ch)


def _required(ctx, args, text):
    if not text.strip(" "):
        validation_error(text, "Input is required")


def _date(ctx, args, text):
    digits_only = text.replace("/", "")
    if len(digits_only) != 8 or any(ch not in _DIGITS for ch in digits_only):
        validation_error(text, "Input is not a valid date")
    year = int(digits_only[0:4])
    month = int(digits_only[4:6])
    day = int(digits_only[6:8])
    try:
        datetime.date(year, month, day)
    except ValueError:
        validation_error(text, "Input is not a valid date")


def _always_ok(ctx, args, text):
    pass


def default_validator_registry() -> ValidatorRegistry:
    r = ValidatorRegistry()
    r.register("numeric", 0, 0, _numeric)
    r.register("length", 2, 2, _length)
    r.register("alphabetic", 0, 0, _alphabetic)
    r.register("strictly-alphabetic", 0, 0, _strictly_alphabetic)
    r.register("alphanumeric", 0, 0, _alphanumeric)
    r.register("required", 0, 0, _required)
    r.register("date", 0, 0, _date)
    r.register("always-ok", 0, 0, _always_ok)
    return r
