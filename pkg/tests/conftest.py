import importlib

import pytest

from disparity_audit import _pykernels


def _backends():
    out = [pytest.param(_pykernels, id="python")]
    try:
        out.append(pytest.param(importlib.import_module("disparity_audit._ckernels"), id="cython"))
    except ImportError:
        out.append(
            pytest.param(None, id="cython", marks=pytest.mark.skip(reason="extension not built"))
        )
    return out


@pytest.fixture(params=_backends())
def backend(request):
    """Each available kernel implementation in turn."""
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
