import numpy as np
import pytest

from helpers import natural_image_paths
from prunedastc.fileio import read_image


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def astcenc():
    return pytest.importorskip("astc_encoder")


@pytest.fixture(scope="session")
def natural_images():
    images = [(p.stem, read_image(p)) for p in natural_image_paths() if p.exists()]
    if len(images) < 3:
        pytest.skip("fewer than three sample photographs available")
    return images


# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        if n in ACCEPTANCE:
            title, ok, detail = ACCEPTANCE[n]
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d} {title}: {detail}")
        else:
            terminalreporter.write_line(f"[----] {n:2d} not run")
