import itertools
import random

import pytest

from arcgeo.cylinder import (
    AffineSet3D,
    affine_set_from_json,
    check_weight_identities,
    dualize,
    gen_collinear,
    gen_example,
    gen_quadrangle,
    gen_two_lines,
    make_cylinder,
    plane_residues,
    project_and_weight,
    random_cylinder,
    select_projection_center,
    verify_weighted_config,
    weighted_config_from_json,
)
from arcgeo.errors import VerificationError
from arcgeo.fields import FieldSpec
from arcgeo.plane import ProjPoint, collinear, standard_frame

from conftest import pt


def axis_cylinder(spec):
    d = (spec.zero(), spec.zero(), spec.one())
    base = [(spec.from_index(i), spec.zero(), spec.zero()) for i in range(spec.order)]
    return make_cylinder(spec, d, base)


def test_make_cylinder_axis_aligned():
    g5 = FieldSpec(5)
    cyl = axis_cylinder(g5)
    assert len(cyl.points) == 25
    assert {(p[0].index, p[1].index) for p in cyl.points} == {(i, 0) for i in range(5)}


def test_make_cylinder_validation():
    g5 = FieldSpec(5)
    d = (g5.zero(), g5.zero(), g5.one())
    base4 = [(g5.element(i), g5.zero(), g5.zero()) for i in range(4)]
    with pytest.raises(ValueError):
        make_cylinder(g5, d, base4)
    # base point repeated along the direction
    bad = [(g5.zero(), g5.zero(), g5.element(1))] + [
        (g5.element(i), g5.zero(), g5.zero()) for i in range(4)
    ]
    with pytest.raises(ValueError):
        make_cylinder(g5, d, bad)
    with pytest.raises(ValueError):
        make_cylinder(g5, (g5.zero(),) * 3, base4 + [(g5.element(4), g5.zero(), g5.zero())])


def test_plane_residues_cylinder_all_zero():
    g5 = FieldSpec(5)
    report = plane_residues(axis_cylinder(g5))
    assert report.all_zero and report.violating_plane is None
    assert report.histogram == {0: 155}  # q^3 + q^2 + q affine planes


def test_plane_residues_random_set_violates(rng):
    g5 = FieldSpec(5)
    pool = [
        (g5.from_index(a), g5.from_index(b), g5.from_index(c))
        for a in range(5) for b in range(5) for c in range(5)
    ]
    pts = tuple(rng.sample(pool, 25))
    report = plane_residues(AffineSet3D(g5, pts))
    assert not report.all_zero
    assert report.violating_plane is not None
    assert sum(report.histogram.values()) == 155


def test_plane_residues_doctored_union_exposed():
    g5 = FieldSpec(5)
    cyl = axis_cylinder(g5)
    # remove one full line, add a skew line: still 25 points, residues break
    removed = [p for p in cyl.points if not (p[0].index == 0 and p[1].index == 0)]
    added = [(g5.element(t), g5.element(t), g5.element(t)) for t in range(5)]
    doctored = AffineSet3D(g5, tuple(removed) + tuple(added))
    report = plane_residues(doctored)
    assert not report.all_zero
    assert set(report.histogram) != {0}


def test_projection_from_infinite_direction_point():
    g5 = FieldSpec(5)
    cyl = axis_cylinder(g5)
    center = (g5.zero(), g5.zero(), g5.one(), g5.zero())
    lwm = project_and_weight(cyl, center)
    positive = {l: w for l, w in lwm.weights.items() if w > 0}
    assert len(positive) == 1
    assert set(positive.values()) == {4}  # one line of weight q-1
    assert set(lwm.projected.values()) == {5}  # q copies of each of q points
    assert len(lwm.projected) == 5
    check_weight_identities(lwm)


def test_projection_pencil_sums(rng):
    g5 = FieldSpec(5)
    cyl = random_cylinder(g5, rng)
    center = select_projection_center(cyl)
    lwm = project_and_weight(cyl, center.point)
    assert all(w >= -1 for w in lwm.weights.values())
    check_weight_identities(lwm)
    # total count identity: sum over a pencil of (w+1)q is q^2 + q*mult
    from arcgeo.plane import incident

    some_point = next(iter(lwm.projected))
    pencil = [l for l in lwm.weights if incident(some_point, l)]
    total = sum((lwm.weights[l] + 1) * 5 for l in pencil)
    assert total == 25 + 5 * lwm.projected[some_point]


def test_projection_rejects_bad_centers():
    g5 = FieldSpec(5)
    cyl = axis_cylinder(g5)
    inside = next(iter(cyl.points))
    with pytest.raises(ValueError):
        project_and_weight(cyl, inside)
    with pytest.raises(ValueError):
        # center (0:1:0:0) lies on the plane x = 0
        project_and_weight(cyl, (g5.zero(), g5.one(), g5.zero(), g5.zero()), target="x")


def test_select_projection_center_minimizes_bad_planes():
    g5 = FieldSpec(5)
    cyl = axis_cylinder(g5)
    chosen = select_projection_center(cyl)
    assert chosen.meets_bound and chosen.bad_planes <= 5
    # full-scan oracle: no candidate point does better
    from arcgeo.cylinder import _affine_planes_np, _plane_counts, _points_np
    import numpy as np

    planes = _affine_planes_np(g5)
    counts = _plane_counts(g5, planes, _points_np(cyl))
    bad = planes[counts != 5]
    in_c = set(cyl.points)
    best = None
    for xi in range(5):
        for yi in range(5):
            for zi in range(5):
                cand = (g5.from_index(xi), g5.from_index(yi), g5.from_index(zi))
                if cand in in_c:
                    continue
                acc = (bad[:, 0] * xi + bad[:, 1] * yi + bad[:, 2] * zi + bad[:, 3]) % 5
                n_bad = int((acc == 0).sum())
                best = n_bad if best is None else min(best, n_bad)
    assert chosen.bad_planes == best


def test_select_projection_center_requires_residues():
    g5 = FieldSpec(5)
    pool = [
        (g5.from_index(a), g5.from_index(b), g5.from_index(c))
        for a in range(5) for b in range(5) for c in range(5)
    ]
    # 24 points of the plane x = 0 plus one outside it: residues must break
    bad_set = AffineSet3D(g5, tuple(pool[:24]) + (pool[40],))
    assert not plane_residues(bad_set).all_zero
    with pytest.raises(ValueError):
        select_projection_center(bad_set)


@pytest.mark.parametrize("q", [5, 7])
def test_full_pipeline_randomized(q):
    spec = FieldSpec(q)
    rng = random.Random(q)
    for _ in range(10):
        cyl = random_cylinder(spec, rng)
        assert plane_residues(cyl).all_zero
        center = select_projection_center(cyl)
        assert center.meets_bound
        lwm = project_and_weight(cyl, center.point)
        nonzero = sum(1 for w in lwm.weights.values() if w != 0)
        assert nonzero <= q
        cfg = dualize(lwm)
        pts = list(cfg.white) + [p for p, _ in cfg.black]
        assert len(pts) <= 2 or all(collinear(pts[0], pts[1], p) for p in pts[2:])
        assert cfg.black_total() == cfg.k - 1


# ---------------------------------------------------------------------------
# weighted configurations
# ---------------------------------------------------------------------------


def test_verify_weighted_collinear_instance():
    g7 = FieldSpec(7)
    white = [pt(g7, 0, 0, 1), pt(g7, 1, 0, 1), pt(g7, 2, 0, 1)]
    black = {pt(g7, 3, 0, 1): 1, pt(g7, 4, 0, 1): 1}
    cfg = verify_weighted_config(white, black)
    assert cfg.k == 3 and cfg.black_total() == 2


def test_verify_weighted_quadrangle_instance():
    g5 = FieldSpec(5)
    white = standard_frame(g5)
    black = {pt(g5, 1, 1, 0): 1, pt(g5, 1, 0, 1): 1, pt(g5, 0, 1, 1): 1}
    cfg = verify_weighted_config(white, black)
    assert cfg.black_total() == 3


def test_verify_weighted_single_white():
    g5 = FieldSpec(5)
    cfg = verify_weighted_config([pt(g5, 1, 2, 1)], {})
    assert cfg.k == 1 and cfg.black_total() == 0


def test_verify_weighted_failures():
    g5 = FieldSpec(5)
    white = [pt(g5, 0, 0, 1), pt(g5, 1, 0, 1)]
    with pytest.raises(VerificationError) as err:
        verify_weighted_config(white, {pt(g5, 1, 1, 1): 1})
    assert "line" in err.value.witness
    with pytest.raises(ValueError):
        verify_weighted_config(white, {pt(g5, 0, 0, 1): 1})  # overlap
    with pytest.raises(ValueError):
        verify_weighted_config(white, {pt(g5, 2, 0, 1): 0})  # zero multiplicity
    with pytest.raises(ValueError):
        verify_weighted_config(
            [pt(g5, 0, 0, 1), pt(g5, 1, 0, 1), pt(g5, 2, 0, 1), pt(g5, 3, 0, 1)],
            {pt(g5, 4, 0, 1): 3},
            paper_regime=True,
        )


def test_weighted_config_json_roundtrip():
    g7 = FieldSpec(7)
    cfg = gen_two_lines(g7, 3)
    back = weighted_config_from_json(cfg.to_json_dict())
    assert back.white == cfg.white and back.black == cfg.black


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def test_two_lines_p7_subgroup_of_order_3():
    g7 = FieldSpec(7)
    cfg = gen_two_lines(g7, 3)
    assert cfg.k == 6 and cfg.black_total() == 5
    black = {p.key: m for p, m in cfg.black}
    assert black[(0, 0, 1)] == 2  # the origin with multiplicity n-1
    assert {k for k in black if k != (0, 0, 1)} == {(1, 6, 0), (1, 5, 0), (1, 3, 0)}


def test_two_lines_cosets():
    g7 = FieldSpec(7)
    for rep in range(1, 7):
        cfg = gen_two_lines(g7, 3, coset_rep=rep)
        assert cfg.black_total() == cfg.k - 1


def test_two_lines_validation():
    g7 = FieldSpec(7)
    with pytest.raises(ValueError):
        gen_two_lines(g7, 4)  # 4 does not divide 6
    with pytest.raises(ValueError):
        gen_two_lines(g7, 3, coset_rep=0)
    with pytest.raises(ValueError):
        gen_two_lines(FieldSpec(2, 2), 1)


def test_collinear_generator_bounds():
    g5 = FieldSpec(5)
    cfg = gen_collinear(g5, 3)
    assert cfg.k == 3
    with pytest.raises(ValueError):
        gen_collinear(g5, 4)  # 4 > (5+1)/2


def test_quadrangle_generator_matches_frame():
    g5 = FieldSpec(5)
    cfg = gen_quadrangle(g5)
    assert set(cfg.white) == set(standard_frame(g5))
    assert all(m == 1 for _, m in cfg.black)
    with pytest.raises(ValueError):
        gen_quadrangle(FieldSpec(3))


def test_gen_example_dispatch():
    g5 = FieldSpec(5)
    assert gen_example("collinear", g5, k=2).k == 2
    assert gen_example("two_lines", g5, n=2).k == 4
    assert gen_example("quadrangle", g5).k == 4
    with pytest.raises(ValueError):
        gen_example("other", g5)


def test_affine_set_json_roundtrip():
    g5 = FieldSpec(5)
    cyl = axis_cylinder(g5)
    back = affine_set_from_json(cyl.to_json_dict())
    assert set(back.points) == set(cyl.points)
