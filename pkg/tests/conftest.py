import os
import subprocess
import sys
from pathlib import Path

import pytest

from widgetspace import Database, load_fixture_registry

SRC = Path(__file__).resolve().parent.parent / "src"


@pytest.fixture
def registry():
    """A fresh registry with all bundled fixture schemas loaded."""
    reg, _ = load_fixture_registry()
    return reg


@pytest.fixture
def db(tmp_path):
    return Database(tmp_path / "db")


def run_cli(args, *, cwd, env_extra=None):
    """Run the CLI in a subprocess; returns (exit_code, stdout, stderr)."""
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    env.update(env_extra or {})
    proc = subprocess.run(
        [sys.executable, "-m", "widgetspace", *args],
        cwd=cwd, env=env, capture_output=True, text=True, timeout=60)
    return proc.returncode, proc.stdout, proc.stderr
