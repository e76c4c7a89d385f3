"""Command-line surface.

Subcommands: ``schema load``, ``schema lint``, ``locales``, ``set``,
``get``, ``show``, ``gen``, ``dump``, ``restore``. Exit codes: 0 success,
1 validation failure, 2 schema or resolution error, 3 I/O, corruption,
or lock contention, 4 usage error.

``schema load`` compiles sources into a workspace file so later commands
need no schema arguments. The workspace is a pure cache: deleting it and
re-loading the same sources reproduces identical behavior. One process
at a time may touch a database directory, enforced by a lock file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from .datum import dumps, is_uninitialized
from .errors import (DatabaseLockedError, MalformedEncodingError, ParseError,
                     ResolutionError, SchemaError, StoreError, ValidationError)
from .registry import WidgetCoord, WidgetRegistry
from .store import Database

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SCHEMA = 2
EXIT_IO = 3
EXIT_USAGE = 4

ENV_DB = "WIDGETSPACE_DB"
ENV_WORKSPACE = "WIDGETSPACE_WORKSPACE"
DEFAULT_WORKSPACE = "widgetspace.ws"


class _UsageFault(Exception):
    """A post-parse usage problem (missing --db, bad field syntax, ...)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.handler(args)
    except _UsageFault as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(str(e), file=sys.stderr)
        return EXIT_VALIDATION
    except (SchemaError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except (StoreError, MalformedEncodingError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


def entry():
    sys.exit(main())


# -- argument plumbing ---------------------------------------------------


def field_spec(text: str):
    """Parse 'name' or 'name.index' into (name, index)."""
    name, sep, idx = text.partition(".")
    if not name:
        raise argparse.ArgumentTypeError(f"empty field name in {text!r}")
    if not sep:
        return name, 1
    if not idx.isdigit() or int(idx) < 1:
        raise argparse.ArgumentTypeError(
            f"field index must be a positive integer, got {text!r}")
    return name, int(idx)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="widgetspace",
        description="Jurisdiction-aware structured records: define, validate, "
                    "store, and render them.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    schema = sub.add_parser("schema", help="load or lint schema sources")
    schema_sub = schema.add_subparsers(dest="action", required=True, metavar="action")

    load = schema_sub.add_parser("load", help="compile sources into a workspace")
    load.add_argument("files", nargs="+", metavar="FILE")
    load.add_argument("--workspace", help="workspace file to write")
    load.add_argument("--check-only", action="store_true",
                      help="validate and report without writing the workspace")
    load.set_defaults(handler=cmd_schema_load)

    lint = schema_sub.add_parser("lint", help="check sources and surface warnings")
    lint.add_argument("files", nargs="+", metavar="FILE")
    lint.set_defaults(handler=cmd_schema_lint)

    locales = sub.add_parser("locales", help="list the locale tree")
    locales.add_argument("--workspace", help="workspace file to read")
    locales.add_argument("--tree", action="store_true",
                         help="indent children under their parents")
    locales.set_defaults(handler=cmd_locales)

    set_p = sub.add_parser("set", help="validate, parse, and store one field")
    _common_data_flags(set_p, medium=True)
    set_p.add_argument("value", metavar="VALUE")
    set_p.set_defaults(handler=cmd_set)

    get_p = sub.add_parser("get", help="read and format one field")
    _common_data_flags(get_p, medium=True)
    get_p.set_defaults(handler=cmd_get)

    show = sub.add_parser("show", help="render every widget visible at a locale")
    show.add_argument("--workspace", help="workspace file to read")
    show.add_argument("--db", help=f"database directory (default ${ENV_DB})")
    show.add_argument("--locale", required=True)
    show.add_argument("--medium", required=True)
    show.set_defaults(handler=cmd_show)

    gen = sub.add_parser("gen", help="produce seeded random input for a field")
    gen.add_argument("--workspace", help="workspace file to read")
    gen.add_argument("--locale", required=True)
    gen.add_argument("--field", required=True, type=field_spec)
    gen.add_argument("--medium", required=True)
    gen.add_argument("--seed", required=True, type=int)
    gen.set_defaults(handler=cmd_gen)

    dump = sub.add_parser("dump", help="export the whole database to one file")
    dump.add_argument("--db", help=f"database directory (default ${ENV_DB})")
    dump.add_argument("out", metavar="OUT")
    dump.set_defaults(handler=cmd_dump)

    restore = sub.add_parser("restore", help="import a dump into a database")
    restore.add_argument("--db", help=f"database directory (default ${ENV_DB})")
    restore.add_argument("--force", action="store_true",
                         help="replace a non-empty database")
    restore.add_argument("input", metavar="IN")
    restore.set_defaults(handler=cmd_restore)

    return parser


def _common_data_flags(p: argparse.ArgumentParser, *, medium: bool) -> None:
    p.add_argument("--workspace", help="workspace file to read")
    p.add_argument("--db", help=f"database directory (default ${ENV_DB})")
    p.add_argument("--locale", required=True)
    p.add_argument("--field", required=True, type=field_spec,
                   help="field name, optionally with .index (alias.2)")
    if medium:
        p.add_argument("--medium", required=True)


def _workspace_path(args) -> Path:
    if getattr(args, "workspace", None):
        return Path(args.workspace)
    env = os.environ.get(ENV_WORKSPACE)
    return Path(env) if env else Path(DEFAULT_WORKSPACE)


def _db_path(args) -> Path:
    if getattr(args, "db", None):
        return Path(args.db)
    env = os.environ.get(ENV_DB)
    if not env:
        raise _UsageFault(f"no database directory: pass --db or set ${ENV_DB}")
    return Path(env)


def _load_workspace(args) -> WidgetRegistry:
    path = _workspace_path(args)
    if not path.exists():
        raise SchemaError(
            f"no schema workspace at '{path}' (run 'widgetspace schema load' first)")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SchemaError(f"workspace '{path}' is unreadable: {e}") from None
    if not isinstance(data, dict) or data.get("version") != 1 or "state" not in data:
        raise SchemaError(f"workspace '{path}' has an unsupported layout")
    registry = WidgetRegistry()
    registry.import_state(data["state"])
    return registry


@contextmanager
def _locked_db(args):
    root = _db_path(args)
    root.mkdir(parents=True, exist_ok=True)
    lock = root / "lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise DatabaseLockedError(
            f"database at '{root}' is in use (stale? remove '{lock}')") from None
    try:
        os.write(fd, f"{os.getpid()}\n".encode("ascii"))
        os.close(fd)
        yield Database(root)
    finally:
        try:
            lock.unlink()
        except FileNotFoundError:
            pass


# -- command handlers ------------------------------------------------------


def cmd_schema_load(args) -> int:
    registry = WidgetRegistry()
    report = registry.load_schema_files(args.files)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(report.summary())
    if not args.check_only:
        path = _workspace_path(args)
        payload = {"version": 1,
                   "summary": {"locales": report.locales, "widgets": report.widgets},
                   "state": registry.export_state()}
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(payload, indent=1), encoding="utf-8")
        os.replace(tmp, path)
    return EXIT_OK


def cmd_schema_lint(args) -> int:
    registry = WidgetRegistry()
    report = registry.load_schema_files(args.files)
    print(report.summary())
    for warning in report.warnings:
        print(f"warning: {warning}")
    return EXIT_OK


def cmd_locales(args) -> int:
    registry = _load_workspace(args)
    tree = registry.locales
    if args.tree:
        root = tree.root
        if root is not None:
            _print_subtree(tree, root, 0)
    else:
        for locale in sorted(tree.locales()):
            print(locale)
    return EXIT_OK


def _print_subtree(tree, locale: str, depth: int) -> None:
    print("  " * depth + locale)
    for child in tree.children(locale):
        _print_subtree(tree, child, depth + 1)


def cmd_set(args) -> int:
    registry = _load_workspace(args)
    name, index = args.field
    with _locked_db(args) as db:
        coord = WidgetCoord(name=name, locale=args.locale, medium=args.medium,
                            index=index)
        value = registry.parse_and_set(db, coord, args.value)
        db.checkpoint()
    print(dumps(value))
    return EXIT_OK


def cmd_get(args) -> int:
    registry = _load_workspace(args)
    name, index = args.field
    with _locked_db(args) as db:
        coord = WidgetCoord(name=name, locale=args.locale, medium=args.medium,
                            index=index)
        result = registry.get_and_format(db, coord)
    print(dumps(result) if is_uninitialized(result) else result)
    return EXIT_OK


def cmd_show(args) -> int:
    registry = _load_workspace(args)
    with _locked_db(args) as db:
        for name in registry.widget_names_at(args.locale):
            try:
                storage = registry.resolve_storage(name, args.locale)
            except ResolutionError:
                continue
            if storage.getter is None:
                continue
            label = registry.resolve_heading(name, args.locale, args.medium) or name
            for index in range(1, storage.max_index + 1):
                coord = WidgetCoord(name=name, locale=args.locale,
                                    medium=args.medium, index=index)
                try:
                    result = registry.get_and_format(db, coord)
                except ResolutionError:
                    break  # no formatter for this medium anywhere in the chain
                shown = dumps(result) if is_uninitialized(result) else result
                tag = f"{label}.{index}" if storage.max_index > 1 else label
                print(f"{tag}: {shown}")
    return EXIT_OK


def cmd_gen(args) -> int:
    registry = _load_workspace(args)
    name, _ = args.field
    print(registry.generate_random(name, args.locale, args.medium, args.seed))
    return EXIT_OK


def cmd_dump(args) -> int:
    with _locked_db(args) as db:
        text = db.dump_text()
    Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_restore(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    with _locked_db(args) as db:
        if not db.is_empty() and not args.force:
            raise StoreError(
                f"database at '{db.root}' is not empty; pass --force to replace it")
        if args.force:
            db.clear_all()
        db.restore_text(text, filename=args.input)
        db.checkpoint()
    return EXIT_OK
