import numpy as np
import pytest
from threadpoolctl import threadpool_limits

from ptgeom.evolution import evolve
from ptgeom.models import (
    OscillatorModel,
    floquet_cyclic_state,
    spin_great_circle_scenario,
    two_level_loop,
    two_level_model,
)


@pytest.fixture(autouse=True, scope="session")
def _single_threaded_blas():
    # small dense matrices: multi-threaded BLAS only adds sync overhead
    with threadpool_limits(limits=1):
        yield


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def osc_model():
    return OscillatorModel(n=60, omega_d=0.3, delta=1.0)


@pytest.fixture(scope="session")
def pt_scenario(osc_model):
    H, W, path, psi0 = osc_model.pt_scenario()
    return {"H": H, "W": W, "path": path, "psi0": psi0, "model": osc_model}


@pytest.fixture(scope="session")
def pt_record(pt_scenario):
    s = pt_scenario
    return evolve(s["H"], s["W"], s["path"], s["psi0"], 1500)


@pytest.fixture(scope="session")
def hermitian_record(osc_model):
    H, W, path, psi0 = osc_model.hermitian_scenario()
    return evolve(H, W, path, psi0, 1500), H


@pytest.fixture(scope="session")
def two_level_scenario():
    H, W = two_level_model(1.0, 0.4)
    path = two_level_loop()
    psi0 = floquet_cyclic_state(H, W, path, 3000)
    return {"H": H, "W": W, "path": path, "psi0": psi0}


@pytest.fixture(scope="session")
def two_level_record(two_level_scenario):
    s = two_level_scenario
    return evolve(s["H"], s["W"], s["path"], s["psi0"], 3000)


@pytest.fixture(scope="session")
def spin_scenario():
    H, W, path, psi0 = spin_great_circle_scenario(tau=2.0)
    return {"H": H, "W": W, "path": path, "psi0": psi0}


@pytest.fixture(scope="session")
def spin_record(spin_scenario):
    s = spin_scenario
    return evolve(s["H"], s["W"], s["path"], s["psi0"], 1200)


@pytest.fixture(scope="session")
def osc_section(osc_model):
    return osc_model.section()
