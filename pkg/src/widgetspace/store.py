"""Embedded persistent key-value store with typed absence.

A database is a directory; each table is one text file. Reads of absent
keys return ``UNINITIALIZED`` rather than failing, and a stored
``UNINITIALIZED`` is distinguishable from never-written via
``contains_key``. Writes stay in memory until ``checkpoint``, which
flushes each dirty table with a write-temp-then-rename so a crash can
lose recent writes but never corrupt what a previous checkpoint saved.

Table file format: line one is ``(table <name>)``, then one ``(<key>
<datum>)`` pair per line, sorted by key, UTF-8, LF line endings.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from urllib.parse import quote, unquote

from .datum import UNINITIALIZED, Datum, dumps, is_uninitialized, read_datum, require_valid
from .errors import (CorruptTableError, IndexOutOfRangeError, StoreError,
                     WrongVariantError)
from .sexpr import SexprError, TokenStream, is_valid_symbol, normalize_symbol

_SUFFIX = ".tbl"


class _Table:
    __slots__ = ("name", "entries", "dirty", "version", "lock")

    def __init__(self, name: str, entries: dict[str, Datum] | None = None):
        self.name = name
        self.entries: dict[str, Datum] = entries if entries is not None else {}
        self.dirty = False
        self.version = 0
        self.lock = threading.Lock()


def _filename(table: str) -> str:
    # Percent-encoding keeps distinct table names on distinct files.
    return quote(table, safe="abcdefghijklmnopqrstuvwxyz0123456789-_") + _SUFFIX


def _tablename(filename: str) -> str:
    return unquote(filename[:-len(_SUFFIX)])


def _valid_key(key: str) -> str:
    """Normalized key, rejected unless it can round-trip through a table file."""
    key = normalize_symbol(key)
    if not is_valid_symbol(key):
        raise StoreError(f"invalid key {key!r}")
    return key


class Database:
    """One directory of table files. Operations are linearizable per table."""

    def __init__(self, root: str | Path):
        self._root = Path(root)
        self._root.mkdir(parents=True, exist_ok=True)
        self._tables: dict[str, _Table] = {}
        self._lock = threading.Lock()

    @property
    def root(self) -> Path:
        return self._root

    def get(self, table: str, key: str) -> Datum:
        """The value stored under (table, key); UNINITIALIZED when absent."""
        t = self._table(table)
        with t.lock:
            return t.entries.get(normalize_symbol(key), UNINITIALIZED)

    def contains_key(self, table: str, key: str) -> bool:
        """True iff a value (possibly UNINITIALIZED itself) was stored."""
        t = self._table(table)
        with t.lock:
            return normalize_symbol(key) in t.entries

    def put(self, table: str, key: str, value: Datum) -> None:
        require_valid(value)
        t = self._table(table)
        with t.lock:
            t.entries[_valid_key(key)] = value
            t.dirty = True
            t.version += 1

    def get_indexed(self, table: str, key: str, index: int) -> Datum:
        """One slot of an indexed value. 1-based."""
        if not isinstance(index, int) or index < 1:
            raise IndexOutOfRangeError(f"index must be >= 1, got {index}")
        value = self.get(table, key)
        if is_uninitialized(value):
            return UNINITIALIZED
        if not isinstance(value, tuple):
            raise WrongVariantError(
                f"({table}, {key}) holds a non-sequence; indexed access is invalid")
        if index > len(value):
            raise IndexOutOfRangeError(
                f"index {index} out of range for ({table}, {key}) of size {len(value)}")
        return value[index - 1]

    def put_indexed(self, table: str, key: str, index: int, value: Datum,
                    max_index: int) -> None:
        """Write one slot, materializing an UNINITIALIZED-filled sequence on first use."""
        if not isinstance(max_index, int) or max_index < 1:
            raise ValueError(f"max_index must be >= 1, got {max_index}")
        if not isinstance(index, int) or not 1 <= index <= max_index:
            raise IndexOutOfRangeError(
                f"index {index} out of range [1, {max_index}]")
        require_valid(value)
        t = self._table(table)
        key = _valid_key(key)
        with t.lock:
            current = t.entries.get(key, UNINITIALIZED)
            if is_uninitialized(current):
                slots = [UNINITIALIZED] * max_index
            elif isinstance(current, tuple):
                slots = list(current) + [UNINITIALIZED] * (max_index - len(current))
            else:
                raise WrongVariantError(
                    f"({table}, {key}) holds a non-sequence; indexed access is invalid")
            slots[index - 1] = value
            t.entries[key] = tuple(slots)
            t.dirty = True
            t.version += 1

    def checkpoint(self) -> None:
        """Flush every dirty table atomically. Dirtiness survives I/O failure."""
        with self._lock:
            tables = list(self._tables.values())
        for t in tables:
            with t.lock:
                if not t.dirty:
                    continue
                version = t.version
                text = _render_table(t.name, t.entries)
            self._write_file(_filename(t.name), text)
            with t.lock:
                if t.version == version:
                    t.dirty = False

    def table_names(self) -> list[str]:
        """Tables present on disk or written in memory, sorted."""
        names = {_tablename(p.name) for p in self._root.glob("*" + _SUFFIX)}
        with self._lock:
            names.update(name for name, t in self._tables.items() if t.entries)
        return sorted(names)

    def items(self, table: str) -> list[tuple[str, Datum]]:
        t = self._table(table)
        with t.lock:
            return sorted(t.entries.items())

    def is_empty(self) -> bool:
        return not self.table_names()

    def dump_text(self) -> str:
        """The whole database in the table file format, tables sorted by name."""
        return "".join(_render_table(name, dict(self.items(name)))
                       for name in self.table_names())

    def restore_text(self, text: str, filename: str = "<dump>") -> None:
        """Load a dump into memory, replacing the named tables wholesale."""
        for name, entries in _parse_tables(text, filename).items():
            t = self._table(name)
            with t.lock:
                t.entries = entries
                t.dirty = True
                t.version += 1

    def clear_all(self) -> None:
        """Drop every table, in memory and on disk."""
        with self._lock:
            self._tables.clear()
        for path in self._root.glob("*" + _SUFFIX):
            path.unlink()

    # -- internals -----------------------------------------------------

    def _table(self, name: str) -> _Table:
        name = normalize_symbol(name)
        if not is_valid_symbol(name):
            raise StoreError(f"invalid table name {name!r}")
        with self._lock:
            t = self._tables.get(name)
            if t is None:
                t = self._load_table(name)
                self._tables[name] = t
            return t

    def _load_table(self, name: str) -> _Table:
        path = self._root / _filename(name)
        if not path.exists():
            return _Table(name)
        text = path.read_text(encoding="utf-8")
        tables = _parse_tables(text, path.name)
        if list(tables) != [name]:
            raise CorruptTableError(
                f"file declares table {list(tables)!r}, expected '{name}'",
                filename=path.name, offset=0)
        return _Table(name, tables[name])

    def _write_file(self, filename: str, text: str) -> None:
        path = self._root / filename
        tmp = self._root / f".{filename}.tmp.{os.getpid()}"
        try:
            with open(tmp, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        finally:
            if tmp.exists():
                tmp.unlink()


def _render_table(name: str, entries: dict[str, Datum]) -> str:
    lines = [f"(table {name})"]
    for key in sorted(entries):
        lines.append(f"({key} {dumps(entries[key])})")
    return "\n".join(lines) + "\n"


def _parse_tables(text: str, filename: str) -> dict[str, dict[str, Datum]]:
    """Parse one or more concatenated table sections. Line-oriented."""
    tables: dict[str, dict[str, Datum]] = {}
    current: dict[str, Datum] | None = None
    offset = 0
    for line in text.split("\n"):
        if line.strip():
            try:
                name = _parse_header(line)
                if name is not None:
                    if name in tables:
                        raise CorruptTableError(f"table '{name}' declared twice",
                                                filename=filename, offset=offset)
                    current = tables.setdefault(name, {})
                else:
                    if current is None:
                        raise CorruptTableError("missing (table ...) header",
                                                filename=filename, offset=offset)
                    key, value = _parse_pair(line)
                    if key in current:
                        raise CorruptTableError(f"duplicate key '{key}'",
                                                filename=filename, offset=offset)
                    current[key] = value
            except SexprError as e:
                raise CorruptTableError(str(e), filename=filename,
                                        offset=offset + e.offset) from None
        offset += len(line.encode("utf-8")) + 1
    return tables


def _parse_header(line: str) -> str | None:
    """The table name iff the line has exactly the shape '(table <symbol>)'.

    Anything else, including entry pairs whose key happens to be
    'table', falls through to the pair parser.
    """
    ts = TokenStream.from_text(line)
    toks = []
    while not ts.at_end():
        toks.append(ts.next())
    if (len(toks) == 4 and toks[0].kind == "(" and toks[3].kind == ")"
            and toks[1].kind == "atom" and toks[1].value == "table"
            and toks[2].kind == "atom"):
        name = normalize_symbol(str(toks[2].value))
        if is_valid_symbol(name):
            return name
    return None


def _parse_pair(line: str) -> tuple[str, Datum]:
    ts = TokenStream.from_text(line)
    ts.expect("(")
    key_tok = ts.expect("atom", "a key symbol")
    key = normalize_symbol(str(key_tok.value))
    if not is_valid_symbol(key):
        raise SexprError(f"invalid key '{key}'", key_tok.offset, key_tok.line, key_tok.col)
    value = read_datum(ts)
    ts.expect(")")
    if not ts.at_end():
        tok = ts.peek()
        raise SexprError("trailing content after entry", tok.offset, tok.line, tok.col)
    return key, value
