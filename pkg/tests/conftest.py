import pytest


class ScriptedRng:
    """Hands out a fixed list of blocks, in order, to reproduce worked examples."""

    def __init__(self, draws):
        self.draws = list(draws)

    def block(self, bits):
        value = self.draws.pop(0)
        assert value >> bits == 0
        return value

    def bytes(self, n):
        raise AssertionError("scripted rng only supplies blocks")


@pytest.fixture
def scripted():
    return ScriptedRng


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; assert after recording."""

    def record(label, ok, detail=""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
