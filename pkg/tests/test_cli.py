"""End-to-end command-line behavior, one subprocess per invocation."""

import json

import pytest

from widgetspace import fixture_paths

from conftest import run_cli

ALL_FIXTURES = [str(p) for p in fixture_paths()]


@pytest.fixture(scope="session")
def ws(tmp_path_factory):
    """A workspace compiled once from all bundled schema files."""
    root = tmp_path_factory.mktemp("ws")
    path = root / "widgetspace.ws"
    code, out, err = run_cli(
        ["schema", "load", *ALL_FIXTURES, "--workspace", str(path)], cwd=root)
    assert code == 0, err
    return path


def ws_args(ws):
    return ["--workspace", str(ws)]


class TestSchemaLoad:
    def test_report_two_files(self, tmp_path):
        code, out, err = run_cli(
            ["schema", "load", *ALL_FIXTURES[:2],
             "--workspace", str(tmp_path / "w.ws")], cwd=tmp_path)
        assert code == 0
        assert out == "locales: 8, widgets: 13\n"

    def test_report_all_files(self, tmp_path):
        code, out, _ = run_cli(
            ["schema", "load", *ALL_FIXTURES,
             "--workspace", str(tmp_path / "w.ws")], cwd=tmp_path)
        assert code == 0
        assert out == "locales: 8, widgets: 17\n"

    def test_workspace_file_layout(self, ws):
        data = json.loads(ws.read_text())
        assert data["version"] == 1
        assert data["summary"] == {"locales": 8, "widgets": 17}
        assert {pair[0] for pair in data["state"]["locales"]} >= {
            "common", "arkansas", "wisconsin"}

    def test_check_only_writes_nothing(self, tmp_path):
        target = tmp_path / "w.ws"
        code, out, _ = run_cli(
            ["schema", "load", *ALL_FIXTURES, "--check-only",
             "--workspace", str(target)], cwd=tmp_path)
        assert code == 0
        assert "widgets: 17" in out
        assert not target.exists()

    def test_schema_error_exit_2(self, tmp_path):
        bad = tmp_path / "bad.scm"
        bad.write_text("(locale x :parent ghost)\n")
        code, out, err = run_cli(
            ["schema", "load", str(bad), "--workspace", str(tmp_path / "w.ws")],
            cwd=tmp_path)
        assert code == 2
        assert err.startswith("error: ")
        assert "ghost" in err

    def test_missing_file_exit_3(self, tmp_path):
        code, _, err = run_cli(
            ["schema", "load", str(tmp_path / "absent.scm"),
             "--workspace", str(tmp_path / "w.ws")], cwd=tmp_path)
        assert code == 3
        assert err.startswith("error: ")

    def test_lint_reports_warnings_without_writing(self, tmp_path):
        src = tmp_path / "s.scm"
        src.write_text("(locale root :parent none)\n"
                       "(widget floating root :output ((default identity)))\n")
        code, out, _ = run_cli(["schema", "lint", str(src)], cwd=tmp_path)
        assert code == 0
        assert "locales: 1, widgets: 1" in out
        assert "warning:" in out
        assert not (tmp_path / "widgetspace.ws").exists()


class TestLocales:
    def test_flat_sorted(self, ws, tmp_path):
        code, out, _ = run_cli(["locales", *ws_args(ws)], cwd=tmp_path)
        assert code == 0
        assert out.splitlines() == sorted([
            "common", "united-states", "colorado", "park-county-co",
            "minnesota", "ramsey-county-mn", "arkansas", "wisconsin"])

    def test_tree_indentation(self, ws, tmp_path):
        code, out, _ = run_cli(["locales", "--tree", *ws_args(ws)], cwd=tmp_path)
        assert code == 0
        assert out == ("common\n"
                       "  united-states\n"
                       "    colorado\n"
                       "      park-county-co\n"
                       "    minnesota\n"
                       "      ramsey-county-mn\n"
                       "    arkansas\n"
                       "    wisconsin\n")

    def test_without_workspace_exit_2(self, tmp_path):
        code, _, err = run_cli(
            ["locales", "--workspace", str(tmp_path / "none.ws")], cwd=tmp_path)
        assert code == 2
        assert "schema load" in err

    def test_corrupt_workspace_exit_2(self, tmp_path):
        bad = tmp_path / "bad.ws"
        bad.write_text("{not json")
        code, _, err = run_cli(["locales", "--workspace", str(bad)], cwd=tmp_path)
        assert code == 2
        assert "unreadable" in err

    def test_wrong_version_exit_2(self, tmp_path):
        bad = tmp_path / "bad.ws"
        bad.write_text(json.dumps({"version": 99, "state": {}}))
        code, _, err = run_cli(["locales", "--workspace", str(bad)], cwd=tmp_path)
        assert code == 2
        assert "unsupported" in err


class TestSetGet:
    def test_set_prints_stored_datum(self, ws, tmp_path):
        code, out, err = run_cli(
            ["set", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "dob",
             "--medium", "ls1100-entry", "20100704"], cwd=tmp_path)
        assert (code, err) == (0, "")
        assert out == "(date 2010 7 4)\n"

    def test_get_prints_formatted_text(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        run_cli(["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "dob", "--medium", "ls1100-entry", "20100704"],
                cwd=tmp_path)
        code, out, _ = run_cli(
            ["get", *ws_args(ws), *db, "--locale", "arkansas",
             "--field", "dob", "--medium", "ar-arrest"], cwd=tmp_path)
        assert code == 0
        assert out == "7/4/2010\n"

    def test_get_unset_prints_marker(self, ws, tmp_path):
        code, out, _ = run_cli(
            ["get", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "dob",
             "--medium", "ar-arrest"], cwd=tmp_path)
        assert code == 0
        assert out == "#uninit\n"

    def test_validation_failure_exit_1_verbatim_message(self, ws, tmp_path):
        code, out, err = run_cli(
            ["set", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "sid",
             "--medium", "ls1100-entry", "ab!12"], cwd=tmp_path)
        assert code == 1
        assert out == ""
        assert err == "The character '!' is not alphanumeric\n"

    def test_no_parser_exit_2(self, ws, tmp_path):
        code, _, err = run_cli(
            ["set", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "sid",
             "--medium", "transmission", "ab12cd"], cwd=tmp_path)
        assert code == 2
        assert err == "error: No formatter/parser specified.\n"

    def test_no_formatter_exit_2(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        run_cli(["set", *ws_args(ws), *db, "--locale", "wisconsin",
                 "--field", "name-last", "--medium", "ls1100-entry", "Doe"],
                cwd=tmp_path)
        code, _, err = run_cli(
            ["get", *ws_args(ws), *db, "--locale", "minnesota",
             "--field", "sid", "--medium", "transmission"], cwd=tmp_path)
        assert code == 2
        assert err == "error: No storage specified.\n"

    def test_indexed_field_syntax(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        code, out, _ = run_cli(
            ["set", *ws_args(ws), *db, "--locale", "arkansas",
             "--field", "alias.2", "--medium", "transmission", "Smith"],
            cwd=tmp_path)
        assert code == 0
        assert out == '"Smith"\n'
        code, out, _ = run_cli(
            ["get", *ws_args(ws), *db, "--locale", "arkansas",
             "--field", "alias.2", "--medium", "transmission"], cwd=tmp_path)
        assert (code, out) == (0, "Smith\n")
        code, out, _ = run_cli(
            ["get", *ws_args(ws), *db, "--locale", "arkansas",
             "--field", "alias.1", "--medium", "transmission"], cwd=tmp_path)
        assert (code, out) == (0, "#uninit\n")

    def test_index_out_of_range_exit_2(self, ws, tmp_path):
        code, _, err = run_cli(
            ["set", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "alias.3",
             "--medium", "transmission", "X"], cwd=tmp_path)
        assert code == 2
        assert "out of range" in err

    def test_bad_field_index_exit_4(self, ws, tmp_path):
        code, _, err = run_cli(
            ["get", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "alias.x",
             "--medium", "transmission"], cwd=tmp_path)
        assert code == 4

    def test_failed_set_persists_nothing(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        run_cli(["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "sid", "--medium", "ls1100-entry", "bad!"],
                cwd=tmp_path)
        assert list((tmp_path / "db").glob("*.tbl")) == []


class TestEnvDefaults:
    def test_env_vars_replace_flags(self, ws, tmp_path):
        env = {"WIDGETSPACE_DB": str(tmp_path / "db"),
               "WIDGETSPACE_WORKSPACE": str(ws)}
        code, out, _ = run_cli(
            ["set", "--locale", "arkansas", "--field", "sid",
             "--medium", "ls1100-entry", "ab12cd"], cwd=tmp_path, env_extra=env)
        assert (code, out) == (0, '"ab12cd"\n')
        code, out, _ = run_cli(
            ["get", "--locale", "arkansas", "--field", "sid",
             "--medium", "ls1100-entry"], cwd=tmp_path, env_extra=env)
        assert (code, out) == (0, "AB12CD\n")

    def test_missing_db_exit_4(self, ws, tmp_path):
        code, _, err = run_cli(
            ["get", *ws_args(ws), "--locale", "arkansas",
             "--field", "dob", "--medium", "ar-arrest"], cwd=tmp_path,
            env_extra={"WIDGETSPACE_DB": ""})
        assert code == 4
        assert "error: no database directory" in err


class TestUsageErrors:
    def test_unknown_command(self, tmp_path):
        code, _, err = run_cli(["frobnicate"], cwd=tmp_path)
        assert code == 4

    def test_missing_required_flag(self, ws, tmp_path):
        code, _, _ = run_cli(
            ["get", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--field", "dob", "--medium", "x"], cwd=tmp_path)
        assert code == 4

    def test_no_arguments(self, tmp_path):
        code, _, _ = run_cli([], cwd=tmp_path)
        assert code == 4


class TestLocking:
    def test_held_lock_exit_3(self, ws, tmp_path):
        db_dir = tmp_path / "db"
        db_dir.mkdir()
        (db_dir / "lock").write_text("12345\n")
        code, _, err = run_cli(
            ["get", *ws_args(ws), "--db", str(db_dir), "--locale", "arkansas",
             "--field", "dob", "--medium", "ar-arrest"], cwd=tmp_path)
        assert code == 3
        assert "in use" in err

    def test_lock_released_after_run(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        for _ in range(2):
            code, _, err = run_cli(
                ["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "sid", "--medium", "ls1100-entry", "ab12cd"],
                cwd=tmp_path)
            assert code == 0, err
        assert not (tmp_path / "db" / "lock").exists()

    def test_lock_released_after_failure(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        run_cli(["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "sid", "--medium", "ls1100-entry", "bad!"],
                cwd=tmp_path)
        assert not (tmp_path / "db" / "lock").exists()


class TestShow:
    def test_renders_visible_widgets(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        run_cli(["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "dob", "--medium", "ls1100-entry", "20100704"],
                cwd=tmp_path)
        run_cli(["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "name-last", "--medium", "ls1100-entry", "Doe"],
                cwd=tmp_path)
        code, out, _ = run_cli(
            ["show", *ws_args(ws), *db, "--locale", "arkansas",
             "--medium", "transmission"], cwd=tmp_path)
        assert code == 0
        lines = out.splitlines()
        assert "Date of Birth: 20100704" in lines
        assert "Last Name: Doe" in lines
        assert "Alias.1: #uninit" in lines
        assert "Alias.2: #uninit" in lines
        assert "Name: Doe," in lines
        assert "State ID Number: #uninit" in lines


class TestGen:
    def test_deterministic_across_processes(self, ws, tmp_path):
        args = ["gen", *ws_args(ws), "--locale", "arkansas", "--field", "sid",
                "--medium", "ls1100-entry", "--seed", "42"]
        code1, out1, _ = run_cli(args, cwd=tmp_path)
        code2, out2, _ = run_cli(args, cwd=tmp_path)
        assert code1 == code2 == 0
        assert out1 == out2
        assert out1.strip()

    def test_generated_value_is_accepted_by_set(self, ws, tmp_path):
        _, out, _ = run_cli(
            ["gen", *ws_args(ws), "--locale", "arkansas", "--field", "sid",
             "--medium", "ls1100-entry", "--seed", "7"], cwd=tmp_path)
        code, _, err = run_cli(
            ["set", *ws_args(ws), "--db", str(tmp_path / "db"),
             "--locale", "arkansas", "--field", "sid",
             "--medium", "ls1100-entry", out.strip()], cwd=tmp_path)
        assert code == 0, err

    def test_missing_generator_exit_2(self, ws, tmp_path):
        code, _, err = run_cli(
            ["gen", *ws_args(ws), "--locale", "arkansas",
             "--field", "subject-name", "--medium", "x", "--seed", "1"],
            cwd=tmp_path)
        assert code == 2
        assert err.startswith("error: ")


class TestDumpRestore:
    def _populate(self, ws, tmp_path, db):
        for field, medium, value in [
            ("dob", "ls1100-entry", "20100704"),
            ("sid", "ls1100-entry", "ab12cd"),
            ("alias.1", "transmission", "Smith"),
        ]:
            code, _, err = run_cli(
                ["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", field, "--medium", medium, value], cwd=tmp_path)
            assert code == 0, err

    def test_round_trip_to_fresh_database(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        self._populate(ws, tmp_path, db)
        out_file = tmp_path / "backup.widgetdump"
        code, _, err = run_cli(["dump", *db, str(out_file)], cwd=tmp_path)
        assert code == 0, err
        assert "(table demographics)" in out_file.read_text()

        db2 = ["--db", str(tmp_path / "db2")]
        code, _, err = run_cli(["restore", *db2, str(out_file)], cwd=tmp_path)
        assert code == 0, err
        code, out, _ = run_cli(
            ["get", *ws_args(ws), *db2, "--locale", "arkansas",
             "--field", "sid", "--medium", "ls1100-entry"], cwd=tmp_path)
        assert (code, out) == (0, "AB12CD\n")

    def test_restore_refuses_non_empty_without_force(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        self._populate(ws, tmp_path, db)
        dump_file = tmp_path / "d.widgetdump"
        run_cli(["dump", *db, str(dump_file)], cwd=tmp_path)
        code, _, err = run_cli(["restore", *db, str(dump_file)], cwd=tmp_path)
        assert code == 3
        assert "--force" in err

    def test_restore_force_replaces(self, ws, tmp_path):
        db = ["--db", str(tmp_path / "db")]
        self._populate(ws, tmp_path, db)
        dump_file = tmp_path / "d.widgetdump"
        run_cli(["dump", *db, str(dump_file)], cwd=tmp_path)
        run_cli(["set", *ws_args(ws), *db, "--locale", "arkansas",
                 "--field", "sid", "--medium", "ls1100-entry", "zz99zz"],
                cwd=tmp_path)
        code, _, err = run_cli(
            ["restore", *db, "--force", str(dump_file)], cwd=tmp_path)
        assert code == 0, err
        code, out, _ = run_cli(
            ["get", *ws_args(ws), *db, "--locale", "arkansas",
             "--field", "sid", "--medium", "transmission"], cwd=tmp_path)
        assert (code, out) == (0, "ab12cd\n")

    def test_restore_corrupt_dump_exit_3(self, ws, tmp_path):
        bad = tmp_path / "bad.widgetdump"
        bad.write_text("(k 1)\n")
        code, _, err = run_cli(
            ["restore", "--db", str(tmp_path / "db"), str(bad)], cwd=tmp_path)
        assert code == 3
        assert "bad.widgetdump" in err

    def test_restore_missing_file_exit_3(self, ws, tmp_path):
        code, _, _ = run_cli(
            ["restore", "--db", str(tmp_path / "db"),
             str(tmp_path / "absent.widgetdump")], cwd=tmp_path)
        assert code == 3
