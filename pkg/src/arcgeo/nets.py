"""Dual 3-nets in PG(2,q), the chord group on a conic, and conic containment checks.

The chord construction puts an abelian group on the points of an irreducible
conic off a fixed line: chords (tangents for a doubled point) are traded
against the line and re-intersected with the conic through the identity.
Subgroup plus coset then yields a dual 3-net whose third component lives on
the line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ConsistencyError
from .plane import (
    Conic,
    ProjLine,
    ProjPoint,
    collinear,
    conic_through,
    incident,
    join,
    meet,
    point_from_json,
    point_to_json,
    points_on_line,
)
from .fields import field_from_order
from . import arcs as _arcs


@dataclass(frozen=True)
class DualThreeNet:
    """Three disjoint equal-size point sets with the line-transversality property."""

    a: frozenset
    b: frozenset
    c: frozenset

    def __post_init__(self):
        if not (self.a and self.b and self.c):
            raise ValueError("net components must be nonempty")
        if len(self.a) != len(self.b) or len(self.b) != len(self.c):
            raise ValueError("net components must have equal sizes")
        if self.a & self.b or self.a & self.c or self.b & self.c:
            raise ValueError("net components must be pairwise disjoint")

    @property
    def order(self):
        return len(self.a)

    def components(self):
        return (self.a, self.b, self.c)

    def to_json_dict(self):
        spec = next(iter(self.a)).spec
        return {
            "q": spec.order,
            "h": spec.h,
            "A": [point_to_json(p) for p in sorted(self.a)],
            "B": [point_to_json(p) for p in sorted(self.b)],
            "C": [point_to_json(p) for p in sorted(self.c)],
        }


def net_from_json(obj):
    spec = field_from_order(obj["q"])
    comps = tuple(
        frozenset(point_from_json(spec, p) for p in obj[key]) for key in ("A", "B", "C")
    )
    return DualThreeNet(*comps)


@dataclass(frozen=True)
class NetCheck:
    ok: bool
    witness: ProjLine | None


def is_dual_3net(a, b, c):
    """Exhaustively check the transversality property over all cross-component lines.

    Returns a NetCheck; on failure the witness is a line meeting two components
    but not each component exactly once.
    """
    comps = (frozenset(a), frozenset(b), frozenset(c))
    net = DualThreeNet(*comps)  # validates sizes and disjointness
    for x, y in itertools.combinations(net.components(), 2):
        for p in x:
            for q in y:
                line = join(p, q)
                for comp in net.components():
                    if sum(1 for r in comp if incident(r, line)) != 1:
                        return NetCheck(False, line)
    return NetCheck(True, None)


# ---------------------------------------------------------------------------
# the chord group on an irreducible conic
# ---------------------------------------------------------------------------


class ConicGroup:
    """Abelian group on the points of an irreducible conic off a line.

    The line must be secant (group order q-1, hyperbolic) or external (group
    order q+1, elliptic) to the conic; the tangent case is rejected.  Doubling
    uses the tangent at the point, via the polarity of the conic, which is why
    odd characteristic is required.
    """

    def __init__(self, conic, line, identity):
        spec = conic.spec
        if spec.p == 2:
            raise ValueError("chord groups are implemented for odd characteristic only")
        if not conic.is_irreducible():
            raise ValueError("conic must be irreducible")
        on_line = len(conic.line_points(line))
        if on_line == 1:
            raise ValueError("line tangent to the conic is rejected")
        if not conic.contains(identity) or incident(identity, line):
            raise ValueError("identity must lie on the conic and off the line")
        self.conic = conic
        self.line = line
        self.identity = identity
        self.elements = tuple(sorted(p for p in conic.points() if not incident(p, line)))
        expected = spec.order - 1 if on_line == 2 else spec.order + 1
        if len(self.elements) != expected:
            raise ConsistencyError("conic point count off a line is not q-+1")
        self.kind = "hyperbolic" if on_line == 2 else "elliptic"

    @property
    def order(self):
        return len(self.elements)

    def _second_intersection(self, line, known):
        """Other point of the conic on a line through a known conic point.

        With Q(known) = 0 the restriction of the form to known + t*other is
        t * (t*Q(other) + B(known, other)), so the nonzero root is read off the
        bilinear form; representatives are kept fixed so scales match.
        """
        conic = self.conic
        other = next(p for p in points_on_line(line) if p != known)
        qo = conic.value_at(other)
        summed = tuple(x + y for x, y in zip(known.coords, other.coords))
        bil = conic.value_at_vec(summed) - qo
        if qo.is_zero():
            return other
        t = -(bil / qo)
        if t.is_zero():
            return known
        return ProjPoint(tuple(x + t * y for x, y in zip(known.coords, other.coords)))

    def add(self, p, q):
        """Chord-and-line sum of two group elements."""
        for x in (p, q):
            if not self.conic.contains(x) or incident(x, self.line):
                raise ValueError("group elements must lie on the conic and off the line")
        chord = self.conic.tangent_at(p) if p == q else join(p, q)
        r_prime = meet(chord, self.line)
        if self.conic.contains(r_prime):
            raise ConsistencyError("chord trace on the line lies on the conic")
        result = self._second_intersection(join(self.identity, r_prime), self.identity)
        if incident(result, self.line):
            raise ConsistencyError("group sum landed on the excluded line")
        return result

    def multiple(self, n, p):
        """n-fold sum of p (n >= 1)."""
        acc = p
        for _ in range(n - 1):
            acc = self.add(acc, p)
        return acc

    def element_order(self, p):
        acc = p
        n = 1
        while acc != self.identity:
            acc = self.add(acc, p)
            n += 1
        return n

    def generator(self):
        """Smallest element (in point order) generating the whole group."""
        for p in self.elements:
            if self.element_order(p) == self.order:
                return p
        raise ConsistencyError("chord group is not cyclic")


def standard_conic_group(spec, kind):
    """Canonical hyperbolic (xy = z^2, line z = 0) or elliptic chord group.

    The elliptic case uses x^2 - d*y^2 = z^2 for the smallest nonsquare d, so
    z = 0 is external.  Identities are (1:1:1) and (1:0:1) respectively, which
    makes the hyperbolic group the multiplicative parametrization u -> (u:1/u:1).
    """
    zero, one = spec.zero(), spec.one()
    line = ProjLine((zero, zero, one))
    if kind == "hyperbolic":
        conic = Conic((zero, zero, -one, one, zero, zero))
        identity = ProjPoint((one, one, one))
    elif kind == "elliptic":
        d = next(
            e for e in (spec.from_index(i) for i in range(1, spec.order))
            if all(x * x != e for x in spec.elements())
        )
        conic = Conic((one, -d, -one, zero, zero, zero))
        identity = ProjPoint((one, zero, one))
    else:
        raise ValueError(f"unknown conic group kind {kind!r}")
    return ConicGroup(conic, line, identity)


def subgroup_coset_3net(group, n, shift=None):
    """Dual 3-net from the order-n subgroup, one of its cosets, and the line trace.

    n must be a proper divisor of the group order; shift picks the coset and
    defaults to the smallest element outside the subgroup.
    """
    big = group.order
    if not 1 <= n < big or big % n:
        raise ValueError(f"n={n} is not a proper divisor of the group order {big}")
    gen = group.generator()
    step = group.multiple(big // n, gen)
    sub = {group.identity}
    acc = step
    while acc not in sub:
        sub.add(acc)
        acc = group.add(acc, step)
    if len(sub) != n:
        raise ConsistencyError("cyclic subgroup has the wrong order")
    if shift is None:
        shift = next(p for p in group.elements if p not in sub)
    elif shift in sub:
        raise ValueError("coset shift lies in the subgroup")
    elif shift not in group.elements:
        raise ValueError("coset shift is not a group element")
    coset = frozenset(group.add(shift, a) for a in sub)
    trace = frozenset(meet(join(a, b), group.line) for a in sub for b in coset)
    if len(trace) != n:
        raise ConsistencyError(f"line trace has {len(trace)} points, expected {n}")
    net = DualThreeNet(frozenset(sub), coset, trace)
    check = is_dual_3net(*net.components())
    if not check.ok:
        raise ConsistencyError(f"subgroup-coset net fails transversality at {check.witness!r}")
    return net


# ---------------------------------------------------------------------------
# conic containment of A union B when C is collinear
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BkmReport:
    """Outcome of fitting a conic through the first two components of a net."""

    c_collinear: bool
    big_enough: bool  # 2n >= 5, so a unique conic can exist
    char_at_least_order: bool
    status: str  # "conic", "no-conic", "ambiguous", "too-small" or "c-not-collinear"
    conic: Conic | None
    irreducible: bool | None
    contains_all: bool


def bkm_conic_check(net):
    """Check whether A union B lies on a conic when C is collinear.

    This verifies the conclusion on instances; nothing is proved.
    """
    spec = next(iter(net.a)).spec
    cs = sorted(net.c)
    c_collinear = len(cs) <= 2 or all(
        collinear(cs[0], cs[1], p) for p in cs[2:]
    )
    big_enough = 2 * net.order >= 5
    char_ok = spec.p >= net.order
    if not c_collinear:
        return BkmReport(False, big_enough, char_ok, "c-not-collinear", None, None, False)
    if not big_enough:
        return BkmReport(True, False, char_ok, "too-small", None, None, False)
    fit = conic_through(sorted(net.a | net.b))
    if fit.status != "unique":
        status = "no-conic" if fit.status == "none" else "ambiguous"
        return BkmReport(True, True, char_ok, status, None, None, False)
    conic = fit.conic
    contains_all = all(conic.contains(p) for p in net.a | net.b)
    return BkmReport(True, True, char_ok, "conic", conic, conic.is_irreducible(), contains_all)


def induced_3net(cfg, line, w):
    """The dual 3-net (S+, S-, S) carried by a line meeting only the blocking set."""
    blacks_on_line, s_minus, s_plus = _arcs.induced_components(cfg, line, w)
    comp_plus = frozenset(cfg.white[i] for i in s_plus)
    comp_minus = frozenset(cfg.white[i] for i in s_minus)
    comp_black = frozenset(blacks_on_line)
    sizes = {len(comp_plus), len(comp_minus), len(comp_black)}
    if sizes != {len(blacks_on_line)} or comp_plus & comp_minus:
        raise ConsistencyError("induced components are unequal or overlap")
    net = DualThreeNet(comp_plus, comp_minus, comp_black)
    check = is_dual_3net(*net.components())
    if not check.ok:
        raise ConsistencyError(f"induced triple fails transversality at {check.witness!r}")
    return net
