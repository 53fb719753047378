from __future__ import annotations

import math

import numpy as np
import pytest

from polylab import create_lab
from polylab.current import GreenEvaluator
from polylab.lattice import Lattice

RHO = complex(0.5, math.sqrt(3) / 2)


@pytest.fixture
def square_lattice() -> Lattice:
    return Lattice.from_tau(1j)


@pytest.fixture
def hexagonal_lattice() -> Lattice:
    return Lattice.from_tau(RHO)


@pytest.fixture(scope="session")
def square_green() -> GreenEvaluator:
    return GreenEvaluator.for_tau(1j)


@pytest.fixture(scope="session")
def hexagonal_green() -> GreenEvaluator:
    return GreenEvaluator.for_tau(RHO)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def lab(monkeypatch, tmp_path):
    monkeypatch.setenv("LAB_CONFIG", "testing")
    return create_lab("testing")
