"""Shared scenes and data matrices."""

import warnings

import numpy as np
import pytest
from scipy import integrate

from submig.config import preset
from submig.smatrix import assemble


def quad_bessel_j(s, z):
    """Oracle J_s(z) = (1/pi) int_0^pi cos(s t - z sin t) dt, complex z allowed."""
    with warnings.catch_warnings():
        # roundoff warnings fire once the requested tolerance hits machine precision
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda t: np.cos(s * t - z * np.sin(t)).real, 0, np.pi,
                            epsabs=1e-14, epsrel=1e-13, limit=400)[0]
        im = integrate.quad(lambda t: np.cos(s * t - z * np.sin(t)).imag, 0, np.pi,
                            epsabs=1e-14, epsrel=1e-13, limit=400)[0]
    return (re + 1j * im) / np.pi


@pytest.fixture(scope="session")
def example1():
    return preset("example1").scene()


@pytest.fixture(scope="session")
def example2():
    return preset("example2").scene()


@pytest.fixture(scope="session")
def example3():
    return preset("example3").scene()


@pytest.fixture(scope="session")
def born1(example1):
    return assemble(example1, "born")


@pytest.fixture(scope="session")
def born2(example2):
    return assemble(example2, "born")


@pytest.fixture(scope="session")
def born3(example3):
    return assemble(example3, "born")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
