from __future__ import annotations

import pytest

from bgdc.kinematics import k3_fixture, random_kinematics


@pytest.fixture
def k3():
    return k3_fixture()


@pytest.fixture(params=[0, 1, 2])
def cfg5(request):
    return random_kinematics(5, request.param)


@pytest.fixture(params=[0, 1])
def free5(request):
    # no momentum conservation, so every subset of 1..5 is a valid pole
    return random_kinematics(5, request.param, conserve_momentum=False, independent_eps_bar=True)
