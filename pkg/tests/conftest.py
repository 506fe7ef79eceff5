import random

import pytest

from arcgeo.fields import FieldSpec, is_prime
from arcgeo.plane import ProjPoint, standard_frame


@pytest.fixture
def rng():
    return random.Random(20240813)


def pt(spec, a, b, c):
    return ProjPoint((spec.element(a), spec.element(b), spec.element(c)))


def frame_blocked_arc(p):
    """The frame 4-arc with its three diagonal points, verified."""
    from arcgeo.arcs import verify_gha

    spec = FieldSpec(p)
    white = standard_frame(spec)
    black = (pt(spec, 1, 1, 0), pt(spec, 1, 0, 1), pt(spec, 0, 1, 1))
    return verify_gha(white, black)


def all_specs_up_to(bound):
    """Every supported field spec with order <= bound."""
    specs = []
    for p in range(2, bound + 1):
        if not is_prime(p):
            continue
        h = 1
        while p ** h <= bound and h <= 4:
            specs.append(FieldSpec(p, h))
            h += 1
    return specs
