"""Shared fixtures"""

import pytest

from config import config
from tracecore.models import PatternKind
from tracecore.parser import write_trace_file
from .factories import sequential, synthetic


@pytest.fixture(autouse=True)
def isolated_runtime_config(monkeypatch):
    """Tests never pick up a developer's .env"""
    monkeypatch.setattr(config, "config_path", "")
    monkeypatch.setattr(config, "threads", 2)
    monkeypatch.setattr(config, "log_level", "WARNING")


@pytest.fixture
def seq_trace():
    return sequential(1024)


@pytest.fixture
def stencil_trace():
    return synthetic(PatternKind.STENCIL1D, array_bytes=64 * 1024, name="jacobi1d")


@pytest.fixture
def diagonal_trace():
    return synthetic(PatternKind.DIAGONAL, matrix_dim=128, name="gramschmidt")


@pytest.fixture
def trace_file(tmp_path):
    """Write a trace and return its path"""
    def write(trace, name=None, compress=False):
        path = tmp_path / (name or f"{trace.name}.trc")
        write_trace_file(trace, path, compress=compress)
        return path
    return write


@pytest.fixture
def cli(capsys):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)"""
    from cli.app import run

    def invoke(*argv):
        code = run([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return invoke
