import pytest

from posturenav.worldgen.presets import Preset, preset_world


@pytest.fixture(scope="session")
def preset_worlds():
    """One world per benchmark preset at seed 1, generated once per session."""
    return {p: preset_world(p, 1) for p in (Preset.CORRIDOR, Preset.ROOM, Preset.COMPLEX1, Preset.COMPLEX2)}


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""
    lines = request.config.acceptance_lines

    def record(number: int, ok: bool, detail: str, seconds: float, limit: float):
        within = seconds < limit
        line = (f"{'PASS' if ok and within else 'FAIL'} criterion {number:2d}: {detail} "
                f"[{seconds:.1f} s, limit {limit:g} s]")
        lines.append(line)
        print(line)
        return ok and within

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config.acceptance_lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
