import contextlib
import importlib

import pytest

from tempus import uniform

_BACKENDS = ["_kernels_py"]
try:
    importlib.import_module("tempus._kernels")
    _BACKENDS.append("_kernels")
except ImportError:
    pass

_ACCEPTANCE = []


@pytest.fixture(params=_BACKENDS)
def kernels(request):
    return importlib.import_module(f"tempus.{request.param}")


@pytest.fixture
def zgrid():
    """The integer segment {0, ..., 10}."""
    return uniform(0, 10, 1)


@pytest.fixture
def criterion():
    """Record one acceptance criterion's pass/fail for the end-of-run summary.

    The context value is a list; strings appended to it are shown next to the verdict.
    """
    @contextlib.contextmanager
    def record(label):
        notes = []
        try:
            yield notes
        except BaseException as exc:
            notes.append(f"{type(exc).__name__}: {str(exc)[:120]}")
            _ACCEPTANCE.append((label, False, "; ".join(notes)))
            raise
        _ACCEPTANCE.append((label, True, "; ".join(notes)))
        print(f"{label}: PASS" + (f" ({'; '.join(notes)})" if notes else ""))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, note in _ACCEPTANCE:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
