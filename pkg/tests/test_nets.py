import itertools

import pytest

from arcgeo.errors import ConsistencyError
from arcgeo.fields import FieldSpec
from arcgeo.nets import (
    BkmReport,
    DualThreeNet,
    bkm_conic_check,
    induced_3net,
    is_dual_3net,
    net_from_json,
    standard_conic_group,
    subgroup_coset_3net,
)
from arcgeo.plane import incident, join, points_on_line

from conftest import frame_blocked_arc, pt


def test_order_one_nets():
    g5 = FieldSpec(5)
    a, b, c = pt(g5, 1, 0, 0), pt(g5, 0, 1, 0), pt(g5, 1, 1, 0)
    assert is_dual_3net({a}, {b}, {c}).ok
    d = pt(g5, 0, 0, 1)
    check = is_dual_3net({a}, {b}, {d})
    assert not check.ok and check.witness is not None
    with pytest.raises(ValueError):
        is_dual_3net({a}, {a}, {b})
    with pytest.raises(ValueError):
        is_dual_3net({a, b}, {c}, {d})


def test_perturbed_net_names_a_witness():
    g7 = FieldSpec(7)
    group = standard_conic_group(g7, "hyperbolic")
    net = subgroup_coset_3net(group, 3)
    a = set(net.a)
    swapped = (a - {max(a)}) | {pt(g7, 1, 3, 2)}
    check = is_dual_3net(swapped, net.b, net.c)
    assert not check.ok
    assert check.witness is not None


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("kind", ["hyperbolic", "elliptic"])
def test_chord_group_axioms_full_table(p, kind):
    group = standard_conic_group(FieldSpec(p), kind)
    expected = p - 1 if kind == "hyperbolic" else p + 1
    assert group.order == expected
    els = group.elements
    table = {(a, b): group.add(a, b) for a in els for b in els}
    # closure comes from the add contract; identity, commutativity, associativity, inverses
    assert all(table[(a, group.identity)] == a for a in els)
    assert all(table[(a, b)] == table[(b, a)] for a in els for b in els)
    assert all(
        table[(a, table[(b, c)])] == table[(table[(a, b)], c)]
        for a in els for b in els for c in els
    )
    assert all(any(table[(a, b)] == group.identity for b in els) for a in els)
    assert max(group.element_order(a) for a in els) == group.order  # cyclic


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("kind", ["hyperbolic", "elliptic"])
def test_chord_addition_matches_brute_force_second_intersection(p, kind):
    """Independent oracle: scan the whole line for its conic points."""
    group = standard_conic_group(FieldSpec(p), kind)
    conic, line, o = group.conic, group.line, group.identity

    def brute_add(a, b):
        chord = conic.tangent_at(a) if a == b else join(a, b)
        r_prime = next(x for x in points_on_line(chord) if incident(x, line))
        through = join(o, r_prime)
        hits = [x for x in points_on_line(through) if conic.contains(x)]
        if len(hits) == 1:
            return o
        return next(x for x in hits if x != o)

    for a in group.elements:
        for b in group.elements:
            assert group.add(a, b) == brute_add(a, b)


def test_conic_group_rejects_tangent_line_and_bad_identity():
    g7 = FieldSpec(7)
    group = standard_conic_group(g7, "hyperbolic")
    tangent = group.conic.tangent_at(group.identity)
    from arcgeo.nets import ConicGroup

    with pytest.raises(ValueError):
        ConicGroup(group.conic, tangent, group.elements[1])
    with pytest.raises(ValueError):
        ConicGroup(group.conic, group.line, pt(g7, 1, 0, 0))  # identity on the line
    with pytest.raises(ValueError):
        standard_conic_group(FieldSpec(2, 2), "hyperbolic")


def test_subgroup_coset_net_p7_cube_roots():
    group = standard_conic_group(FieldSpec(7), "hyperbolic")
    net = subgroup_coset_3net(group, 3)
    assert {p.key for p in net.a} == {(1, 1, 1), (1, 2, 4), (1, 4, 2)}
    assert net.order == 3 and len(net.c) == 3
    assert is_dual_3net(*net.components()).ok
    # every point of the third component lies on the base line
    assert all(incident(p, group.line) for p in net.c)


def test_subgroup_coset_net_p5_elliptic():
    group = standard_conic_group(FieldSpec(5), "elliptic")
    net = subgroup_coset_3net(group, 3)
    assert net.order == 3
    assert is_dual_3net(*net.components()).ok


def test_subgroup_rejects_improper_divisors():
    group = standard_conic_group(FieldSpec(7), "hyperbolic")  # order 6
    with pytest.raises(ValueError):
        subgroup_coset_3net(group, 6)
    with pytest.raises(ValueError):
        subgroup_coset_3net(group, 4)
    with pytest.raises(ValueError):
        subgroup_coset_3net(group, 3, shift=group.identity)


def test_all_cosets_give_nets():
    group = standard_conic_group(FieldSpec(7), "hyperbolic")
    net = subgroup_coset_3net(group, 3)
    for shift in group.elements:
        if shift in net.a:
            continue
        other = subgroup_coset_3net(group, 3, shift=shift)
        assert is_dual_3net(*other.components()).ok


def test_bkm_conic_check_on_subgroup_nets():
    for p, kind, n in [(7, "hyperbolic", 3), (11, "elliptic", 3), (11, "elliptic", 4), (13, "hyperbolic", 4)]:
        group = standard_conic_group(FieldSpec(p), kind)
        net = subgroup_coset_3net(group, n)
        report = bkm_conic_check(net)
        assert report.c_collinear and report.big_enough
        assert report.status == "conic"
        assert report.irreducible and report.contains_all
        # the fitted conic is the one carrying the group
        assert report.conic == group.conic


def test_bkm_too_small_and_not_collinear():
    g7 = FieldSpec(7)
    group = standard_conic_group(g7, "hyperbolic")
    net = subgroup_coset_3net(group, 2)
    report = bkm_conic_check(net)
    assert report.status == "too-small" and report.conic is None
    # braid the components so the last one is not collinear
    triangle = DualThreeNet(
        frozenset({pt(g7, 1, 0, 0), pt(g7, 1, 1, 2), pt(g7, 0, 1, 3)}),
        frozenset({pt(g7, 0, 1, 0), pt(g7, 1, 2, 5), pt(g7, 1, 4, 1)}),
        frozenset({pt(g7, 0, 0, 1), pt(g7, 1, 5, 6), pt(g7, 1, 3, 3)}),
    )
    report = bkm_conic_check(triangle)
    assert isinstance(report, BkmReport)
    assert not report.c_collinear and report.status == "c-not-collinear"


def test_induced_net_from_quadrangle_two_blocker_line():
    cfg = frame_blocked_arc(5)
    line = join(cfg.black[0], cfg.black[1])
    net = induced_3net(cfg, line, 0)
    assert net.order == 2
    assert is_dual_3net(*net.components()).ok
    assert net.c <= set(cfg.black)


def test_induced_net_single_blocker_line_is_collinear_triple():
    cfg = frame_blocked_arc(7)
    from arcgeo.plane import all_lines

    line = next(
        l for l in all_lines(cfg.spec)
        if sum(1 for b in cfg.black if incident(b, l)) == 1
        and not any(incident(w, l) for w in cfg.white)
    )
    net = induced_3net(cfg, line, 0)
    assert net.order == 1
    (a,), (b,), (c,) = (tuple(comp) for comp in net.components())
    from arcgeo.plane import collinear

    assert collinear(a, b, c)


def test_induced_net_fails_structurally_on_even_q_black_line():
    from arcgeo.search import SearchTask, run_search

    cfg = run_search(SearchTask(order=8, k=8)).classes[0]
    line = join(cfg.black[0], cfg.black[1])
    with pytest.raises(ConsistencyError):
        induced_3net(cfg, line, 0)


def test_net_json_roundtrip():
    group = standard_conic_group(FieldSpec(7), "hyperbolic")
    net = subgroup_coset_3net(group, 3)
    back = net_from_json(net.to_json_dict())
    assert back == net
