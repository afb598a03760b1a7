import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fullgroup_lab import (
    build_ball,
    builtin_action,
    diametral_geodesic,
    fit_line_chart,
    half_space,
    make_element,
)


@pytest.fixture(scope="session")
def odometer():
    return builtin_action("odometer")


@pytest.fixture(scope="session")
def grigorchuk():
    return builtin_action("grigorchuk")


@pytest.fixture(scope="session")
def dihedral():
    return builtin_action("dihedral")


@pytest.fixture(scope="session")
def odo_ball_200(odometer):
    return build_ball(odometer, 200)


@pytest.fixture(scope="session")
def odo_chart_200(odo_ball_200):
    return fit_line_chart(odo_ball_200)


@pytest.fixture(scope="session")
def odo_half_200(odo_chart_200):
    return half_space(odo_chart_200)


@pytest.fixture(scope="session")
def odo_seg_200(odo_ball_200):
    return diametral_geodesic(odo_ball_200)


@pytest.fixture(scope="session")
def pair_swap(odometer):
    return make_element(odometer, [("0", ("t",)), ("1", ("t_inv",))])


@pytest.fixture(scope="session")
def quad_swap(odometer):
    """Depth-2 kernel element: swaps 4k <-> 4k+2, fixes odd integers."""
    return make_element(odometer, [("00", ("t", "t")), ("01", ("t_inv", "t_inv")),
                                   ("10", ()), ("11", ())])
