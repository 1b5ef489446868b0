import hypothesis
import pytest

from eplz import _rk

hypothesis.settings.register_profile(
    "eplz", deadline=None, max_examples=40, derandomize=True
)
hypothesis.settings.load_profile("eplz")


@pytest.fixture(scope="session", autouse=True)
def compiled_kernel():
    """JIT-compile the stepper once so runtime assertions measure the solver."""
    _rk.warmup()
