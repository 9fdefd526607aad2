import socket

import pytest

import helpers


@pytest.fixture
def no_network(monkeypatch):
    """Fail the test on any attempt to open a socket."""

    def deny(*args, **kwargs):
        raise AssertionError("network operation attempted in an offline test")

    monkeypatch.setattr(socket, "socket", deny)
    monkeypatch.setattr(socket, "create_connection", deny)


@pytest.fixture
def pointer_fixtures(tmp_path):
    """Fixture store recorded from the canned provider for the pointer lecture."""
    return helpers.record_pointer_fixtures(tmp_path)


@pytest.fixture
def golden_bytes():
    if not helpers.GOLDEN_PACKAGE.exists():
        pytest.fail("golden package missing; run `python tests/regen_golden.py`")
    return helpers.GOLDEN_PACKAGE.read_bytes()


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {name}: {'PASS' if report.passed else 'FAIL'}")
