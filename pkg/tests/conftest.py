import numpy as np
import pytest

from delayrd.model import (
    ForcingSpec,
    Grid,
    NonlinearitySpec,
    ProblemParameters,
)
from delayrd.model import evaluate_forcing
from delayrd.semigroup import Field, field_norm


@pytest.fixture
def grid():
    return Grid(half_length=16.0, points=512)


@pytest.fixture
def fine_grid():
    return Grid(half_length=16.0, points=4096)


def unit_forcing_amplitude(grid: Grid) -> float:
    """Amplitude making the grid L2 norm of the standard Gaussian bump 1."""
    raw = evaluate_forcing(ForcingSpec(kind="gaussian_bump", amplitude=1.0), grid.nodes)
    return 1.0 / field_norm(Field(raw, grid))


def dissipative_params(grid: Grid) -> ProblemParameters:
    """mu=2, sigma=0.1, tau=0.5, L_f=1 with ||g|| = 1 on the given grid."""
    return ProblemParameters(
        mu=2.0,
        sigma=0.1,
        tau=0.5,
        lf=1.0,
        forcing=ForcingSpec(kind="gaussian_bump", amplitude=unit_forcing_amplitude(grid)),
        nonlinearity=NonlinearitySpec(kind="scaled_tanh", scale=1.0),
    )


def heat_only_params(mu: float = 2.0) -> ProblemParameters:
    """sigma = 0, f = 0, g = 0: the pure damped heat flow."""
    return ProblemParameters(
        mu=mu, sigma=0.0, tau=0.5, lf=0.0,
        forcing=ForcingSpec(), nonlinearity=NonlinearitySpec(),
    )


@pytest.fixture
def dissipative(grid):
    return dissipative_params(grid)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
