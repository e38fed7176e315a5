import pytest

from radcount import load_bundled

BUNDLED = ("zero", "square-well", "annulus", "gaussian", "bump",
           "counterexample", "counterexample-damped",
           "counterexample-damped-strong")


@pytest.fixture(scope="session")
def catalog():
    """The bundled instances, loaded once per session."""
    return {name: load_bundled(name) for name in BUNDLED}
