import importlib.resources
import json

import pytest

from qe2 import ncalg


def preset_dict(name):
    ref = importlib.resources.files("qe2") / "presets" / f"{name}.json"
    return json.loads(ref.read_text())


def load_preset_tower(name, validate=True):
    return ncalg.load_tower(preset_dict(name), validate=validate)


@pytest.fixture(scope="session")
def qe2_tower():
    return load_preset_tower("qe2-nonstd")


@pytest.fixture(scope="session")
def fun_e2_tower():
    return load_preset_tower("fun-e2")


@pytest.fixture(scope="session")
def cylinder_tower():
    return load_preset_tower("quantum-cylinder")


@pytest.fixture(scope="session")
def qplane_tower():
    return load_preset_tower("quantum-plane")
