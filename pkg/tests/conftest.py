import sys

import pytest
from hypothesis import settings

from koszulpole.koszul import Hypersurface
from koszulpole.parse import parse_poly
from koszulpole.points import PointSet
from koszulpole.poly import RingCtx

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")

FP1 = "x*(x^2*y+x*y^2+z^3)"
FP2 = "x^2*y^2+x*z^3+y*z^3"
FP3 = "x^3*z^4+x*y^5*z+x^7+y^7"
COLLINEAR = "(x^3+y^3+z^3)*x"
CPRIME = "x^2*y^2+y^2*z^2+x^2*z^2-2*x*y*z*(x+y+z)-(2*x*y+3*y*z+4*x*z)^2"
SEXTIC = "x^2*(x+z)^2*(x-z)^2-y^2*(y-z)^2*(y^2+2*z^2)"
SEXTIC_NODES = [(0, 0, 1), (1, 0, 1), (-1, 0, 1), (0, 1, 1), (1, 1, 1), (-1, 1, 1)]
ONE_NODE_SURFACE = "(x^2+y^2+z^2)*w^2+x^4+y^4+z^4"
CAYLEY = "x*y*z+x*y*w+x*z*w+y*z*w"


@pytest.fixture
def ctx3():
    return RingCtx(3)


@pytest.fixture
def ctx4():
    return RingCtx(4)


def hyper(text, nvars=3, nodes=None, factors=()):
    ctx = RingCtx(nvars)
    pts = PointSet.build(ctx, nodes) if nodes is not None else None
    return Hypersurface(parse_poly(text, ctx), tuple(parse_poly(t, ctx) for t in factors), (), pts)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
