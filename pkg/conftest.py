import json

import numpy as np
import pytest

from haar_affine.chaos.chaos1 import Chaos1
from haar_affine.config import settings
from haar_affine.dyadic.stepfn import DyadicStep, haar
from haar_affine.models import ScalarMode


@pytest.fixture
def rng():
    """Seeded generator for reproducible random data."""
    return np.random.default_rng(settings.seed)


@pytest.fixture
def third_symbol():
    """f^(z) = 1 - z/3, exact."""
    return Chaos1.polynomial(["1", "-1/3"])


@pytest.fixture
def half_symbol():
    """f^(z) = 1 - z/2, exact."""
    return Chaos1.polynomial(["1", "-1/2"])


@pytest.fixture
def shift_symbol():
    """f = h_2, the elementary shift: f^(z) = z."""
    return Chaos1.polynomial(["0", "1"])


@pytest.fixture
def h2_step():
    """h_2 at level 6."""
    return haar(2, 6)


@pytest.fixture
def mixed_step():
    """A mean-zero exact step function at level 3 with rational values."""
    return DyadicStep.from_values(["1", "-1/2", "3/4", "0", "-2", "1/4", "1/2", "0"], ScalarMode.EXACT)


@pytest.fixture
def symbol_file(tmp_path):
    """Write a symbol document to a temporary file and return its path."""

    def write(document):
        path = tmp_path / "symbol.json"
        path.write_text(json.dumps(document))
        return str(path)

    return write


@pytest.fixture
def step_file(tmp_path):
    """Write a step function document to a temporary file and return its path."""

    def write(level, values):
        path = tmp_path / "step.json"
        path.write_text(json.dumps({"level": level, "values": values}))
        return str(path)

    return write


@pytest.fixture
def override_settings(monkeypatch):
    """Temporarily change fields of the global settings object."""

    def apply(**fields):
        for name, value in fields.items():
            monkeypatch.setattr(settings, name, value)

    return apply
