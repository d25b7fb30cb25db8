"""Fixtures shared across the suite: the reference parameter set used by
the quantitative checks (r=0.04, q=0, sigma=0.5, b=100, a=0, R=0.7, T=2,
T1=1, E=0.9)."""

import pytest

from credit_pricer import BondSpec, MarketParams, OptionKind, OptionSpec


@pytest.fixture(scope="session")
def market():
    return MarketParams(r=0.04, q=0.0, sigma=0.5)


@pytest.fixture(scope="session")
def bond():
    return BondSpec(T=2.0, a=0.0, b=100.0, R=0.7)


@pytest.fixture(scope="session")
def put_spec():
    return OptionSpec(T1=1.0, E=0.9, kind=OptionKind.PUT)


@pytest.fixture(scope="session")
def call_spec():
    return OptionSpec(T1=1.0, E=0.9, kind=OptionKind.CALL)
