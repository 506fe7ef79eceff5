"""Cylinders in AG(3,q), plane residues, projection weights and dual configurations.

A cylinder is the union of q parallel affine lines (q^2 points); it meets every
plane in 0 mod q points.  Projecting from a well-chosen point turns it into a
line-weight function on PG(2,q) whose dualization is a white point set plus a
black point multiset with the defining property: every line through m > 0
white points carries exactly m-1 black points counted with multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, VerificationError
from .fields import FieldSpec, element_from_json, element_to_json, field_from_order
from .incidence import plane_index
from .plane import ProjLine, ProjPoint, incident, join, point_from_json, point_to_json

TARGET_PLANES = ("x", "y", "z", "w")


def _pt3_to_json(pt):
    return [element_to_json(c) for c in pt]


def _pt3_from_json(spec, obj):
    return tuple(element_from_json(spec, c) for c in obj)


@dataclass(frozen=True)
class AffineSet3D:
    """A q^2-point subset of AG(3,q), point coordinates as field-element triples."""

    spec: FieldSpec
    points: tuple

    def __post_init__(self):
        q = self.spec.order
        if len(self.points) != q * q:
            raise ValueError(f"expected {q * q} points, got {len(self.points)}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points are not distinct")

    def to_json_dict(self):
        return {
            "q": self.spec.order,
            "h": self.spec.h,
            "points": [_pt3_to_json(p) for p in sorted(self.points, key=_pt3_key)],
        }


def _pt3_key(pt):
    return tuple(c.index for c in pt)


def affine_set_from_json(obj):
    spec = field_from_order(obj["q"])
    return AffineSet3D(spec, tuple(_pt3_from_json(spec, p) for p in obj["points"]))


def make_cylinder(spec, direction, base):
    """Union of the q lines through the base points with a common direction.

    direction is a nonzero coordinate triple (projective: scale is ignored);
    base must hold q distinct affine points, no two on a common line of that
    direction, which is checked via the final point count.
    """
    direction = tuple(direction)
    if len(direction) != 3 or all(c.is_zero() for c in direction):
        raise ValueError("direction must be a nonzero coordinate triple")
    base = [tuple(b) for b in base]
    q = spec.order
    if len(base) != q:
        raise ValueError(f"base must hold exactly q={q} points, got {len(base)}")
    if len(set(base)) != q:
        raise ValueError("base points are not distinct")
    points = set()
    for b in base:
        for i in range(q):
            t = spec.from_index(i)
            points.add(tuple(x + t * d for x, d in zip(b, direction)))
    if len(points) != q * q:
        raise ValueError("base points repeat along the direction")
    return AffineSet3D(spec, tuple(sorted(points, key=_pt3_key)))


# ---------------------------------------------------------------------------
# planes of AG(3,q) and residue counts
# ---------------------------------------------------------------------------


def _affine_planes_np(spec):
    """Dual 4-tuples (a,b,c,d) of all affine planes, as element-index rows.

    Normalized with the first nonzero of (a,b,c) equal to 1; a point (x,y,z)
    lies on the plane iff a*x + b*y + c*z + d = 0.
    """
    q = spec.order
    rows = []
    for d in range(q):
        rows.append((0, 0, 1, d))
    for c in range(q):
        for d in range(q):
            rows.append((0, 1, c, d))
    for b in range(q):
        for c in range(q):
            for d in range(q):
                rows.append((1, b, c, d))
    return np.array(rows, dtype=np.int32)


def _points_np(aset):
    return np.array([[c.index for c in p] for p in aset.points], dtype=np.int32)


def _plane_counts(spec, planes, pts):
    """|C ∩ plane| for every plane, via gathers on the field tables."""
    idx = plane_index(spec)
    add, mul = idx.add, idx.mul
    acc = mul[planes[:, 0][:, None], pts[:, 0][None, :]]
    acc = add[acc, mul[planes[:, 1][:, None], pts[:, 1][None, :]]]
    acc = add[acc, mul[planes[:, 2][:, None], pts[:, 2][None, :]]]
    acc = add[acc, planes[:, 3][:, None]]
    return (acc == 0).sum(axis=1)


def _plane_row_to_elements(spec, row):
    return tuple(spec.from_index(int(v)) for v in row)


@dataclass(frozen=True)
class PlaneResidueReport:
    all_zero: bool
    violating_plane: tuple | None  # dual 4-tuple of field elements
    histogram: dict  # residue mod q -> number of planes


def plane_residues(aset):
    """Count |C ∩ pi| for every affine plane pi and reduce mod q."""
    spec = aset.spec
    q = spec.order
    planes = _affine_planes_np(spec)
    counts = _plane_counts(spec, planes, _points_np(aset))
    residues = counts % q
    histogram = {int(r): int(c) for r, c in zip(*np.unique(residues, return_counts=True))}
    bad = np.nonzero(residues)[0]
    if bad.size:
        witness = _plane_row_to_elements(spec, planes[bad[0]])
        return PlaneResidueReport(False, witness, histogram)
    return PlaneResidueReport(True, None, histogram)


@dataclass(frozen=True)
class ProjectionCenter:
    point: tuple  # affine coordinate triple
    bad_planes: int
    meets_bound: bool  # bad_planes <= q


def select_projection_center(aset):
    """The affine point off C on the fewest planes meeting C in other than q points.

    Such bad planes through the center become the nonzero-weight lines of the
    projection; a full scan returns the first minimizer in coordinate order,
    with meets_bound set when the count is at most q (always achievable for a
    set passing plane_residues, by averaging).
    """
    spec = aset.spec
    q = spec.order
    report = plane_residues(aset)
    if not report.all_zero:
        raise ValueError("projection center requested for a set failing plane residues")
    planes = _affine_planes_np(spec)
    counts = _plane_counts(spec, planes, _points_np(aset))
    bad = planes[counts != q]
    in_c = set(aset.points)
    best = None
    idx = plane_index(spec)
    add, mul = idx.add, idx.mul
    for xi in range(q):
        for yi in range(q):
            for zi in range(q):
                cand = (spec.from_index(xi), spec.from_index(yi), spec.from_index(zi))
                if cand in in_c:
                    continue
                if bad.size:
                    acc = add[add[add[
                        mul[bad[:, 0], xi], mul[bad[:, 1], yi]],
                        mul[bad[:, 2], zi]], bad[:, 3]]
                    n_bad = int((acc == 0).sum())
                else:
                    n_bad = 0
                if best is None or n_bad < best.bad_planes:
                    best = ProjectionCenter(cand, n_bad, n_bad <= q)
    return best


# ---------------------------------------------------------------------------
# projection and line weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineWeightMap:
    """Weights of every line of the target PG(2,q), plus the projected multiset."""

    spec: FieldSpec
    weights: dict  # ProjLine -> int >= -1
    projected: dict  # ProjPoint -> multiplicity > 0
    center: tuple  # projective 4-tuple of field elements
    target: str  # one of TARGET_PLANES

    def weight(self, line):
        return self.weights[line]


def _embed(pt):
    return tuple(pt) + (pt[0].spec.one(),)


def _chart_drop(target):
    keep = {"x": (1, 2, 3), "y": (0, 2, 3), "z": (0, 1, 3), "w": (0, 1, 2)}
    return keep[target]


def _target_dual(spec, target):
    axis = TARGET_PLANES.index(target)
    coords = [spec.zero()] * 4
    coords[axis] = spec.one()
    return tuple(coords)


def project_and_weight(aset, center, target=None):
    """Project C from a center onto a coordinate plane and weigh the lines.

    center may be an affine triple or a projective 4-tuple (a direction at
    infinity is allowed); target is one of "x", "y", "z", "w" and defaults to
    the first coordinate plane not through the center.  Every line must carry
    a multiple of q projected points (guaranteed when C passes plane_residues);
    the weight of a line with t*q points is t - 1.
    """
    spec = aset.spec
    q = spec.order
    center = tuple(center)
    if len(center) == 3:
        center = _embed(center)
    if len(center) != 4 or all(c.is_zero() for c in center):
        raise ValueError("center must be an affine triple or nonzero projective 4-tuple")
    if not center[3].is_zero():
        scale = center[3].inverse()
        center = tuple(scale * c for c in center)
        if center[:3] in set(aset.points):
            raise ValueError("projection center lies in the point set")
    if target is None:
        target = next(t for i, t in enumerate(TARGET_PLANES) if not center[i].is_zero())
    if target not in TARGET_PLANES:
        raise ValueError(f"target must be one of {TARGET_PLANES}")
    axis = TARGET_PLANES.index(target)
    if center[axis].is_zero():
        raise ValueError("target plane passes through the center")

    keep = _chart_drop(target)
    center_axis = center[axis]
    projected = {}
    for pt in aset.points:
        x = _embed(pt)
        # image = (pi.x) * center - (pi.center) * x, with pi the target plane dual
        scale = x[axis]
        img = tuple(scale * center[i] - center_axis * x[i] for i in keep)
        p2 = ProjPoint(img)
        projected[p2] = projected.get(p2, 0) + 1

    idx = plane_index(spec)
    mult = np.zeros(idx.n, dtype=np.int64)
    for p2, m in projected.items():
        mult[idx.index_of_point(p2)] = m
    line_counts = mult[idx.points_on_line].sum(axis=1)
    if (line_counts % q).any():
        raise ValueError("projected line counts are not multiples of q; not a cylinder-like set")
    weights = {}
    for j in range(idx.n):
        weights[idx.line_at(j)] = int(line_counts[j] // q) - 1
    return LineWeightMap(spec, weights, projected, center, target)


def check_weight_identities(lwm):
    """Pencil sums: the weights of the lines through a point add to mult - 1.

    In particular they add to -1 at zero-multiplicity points, and the positive
    weights through a point on j lines of weight -1 add to j - 1 there.
    Raises ConsistencyError on any violation.
    """
    spec = lwm.spec
    idx = plane_index(spec)
    wvec = np.zeros(idx.n, dtype=np.int64)
    for line, w in lwm.weights.items():
        wvec[idx.index_of_line(line)] = w
    mult = np.zeros(idx.n, dtype=np.int64)
    for p2, m in lwm.projected.items():
        mult[idx.index_of_point(p2)] = m
    sums = wvec[idx.lines_through_point].sum(axis=1)
    if not (sums == mult - 1).all():
        bad = int(np.nonzero(sums != mult - 1)[0][0])
        raise ConsistencyError(f"pencil weight sum fails at point {idx.point_at(bad)!r}")
    for i in np.nonzero(mult == 0)[0]:
        through = wvec[idx.lines_through_point[i]]
        j = int((through == -1).sum())
        if int(through[through > 0].sum()) != j - 1:
            raise ConsistencyError(
                f"positive weights through {idx.point_at(int(i))!r} do not add to {j - 1}"
            )


# ---------------------------------------------------------------------------
# weighted configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedConfig:
    """White point set plus black point multiset satisfying the line condition."""

    spec: FieldSpec
    white: tuple  # sorted ProjPoints
    black: tuple  # sorted (ProjPoint, multiplicity) pairs

    @property
    def k(self):
        return len(self.white)

    def black_total(self):
        return sum(m for _, m in self.black)

    def to_json_dict(self):
        return {
            "q": self.spec.order,
            "h": self.spec.h,
            "white": [point_to_json(p) for p in self.white],
            "black": [{"point": point_to_json(p), "mult": m} for p, m in self.black],
        }


def weighted_config_from_json(obj):
    spec = field_from_order(obj["q"])
    white = [point_from_json(spec, p) for p in obj["white"]]
    black = {point_from_json(spec, e["point"]): e["mult"] for e in obj["black"]}
    return verify_weighted_config(white, black)


def verify_weighted_config(white, black, paper_regime=False):
    """Check the line condition: m white points force exactly m-1 black ones.

    black maps points to positive multiplicities.  With paper_regime=True the
    bound k <= (p+1)/2 is enforced as a precondition.  Raises VerificationError
    with the offending line on failure.
    """
    white = tuple(sorted(set(white)))
    if not white:
        raise ValueError("weighted configurations need at least one white point")
    spec = white[0].spec
    black = dict(black)
    for pt, m in black.items():
        if m <= 0:
            raise ValueError("black multiplicities must be positive")
    if set(white) & set(black):
        raise ValueError("white and black supports overlap")
    if paper_regime and 2 * len(white) > spec.p + 1:
        raise ValueError(f"paper regime requires k <= (p+1)/2, got k={len(white)}")

    seen = set()
    for i, w in enumerate(white):
        for other in white[i + 1:]:
            line = join(w, other)
            if line in seen:
                continue
            seen.add(line)
            m = sum(1 for x in white if incident(x, line))
            got = sum(mult for pt, mult in black.items() if incident(pt, line))
            if got != m - 1:
                raise VerificationError(
                    "line condition fails",
                    {"line": line.key, "white_on_line": m, "black_on_line": got},
                )
        # lines through w with no second white point must carry no black points
        for pt, mult in black.items():
            line = join(w, pt)
            if line in seen:
                continue
            m = sum(1 for x in white if incident(x, line))
            if m == 1:
                seen.add(line)
                got = sum(mu for p2, mu in black.items() if incident(p2, line))
                if got != 0:
                    raise VerificationError(
                        "line condition fails",
                        {"line": line.key, "white_on_line": 1, "black_on_line": got},
                    )
    cfg = WeightedConfig(spec, white, tuple(sorted(black.items())))
    if cfg.black_total() != cfg.k - 1:
        raise ConsistencyError(
            "line conditions hold but the black total is not k-1 (should be impossible)"
        )
    return cfg


def dualize(lwm):
    """Weighted configuration dual to a line-weight map.

    White points are the duals of the weight minus-one lines, black points are
    the duals of the positive-weight lines with the weight as multiplicity;
    the result is verified before being returned.
    """
    white = []
    black = {}
    for line, w in lwm.weights.items():
        if w == -1:
            white.append(ProjPoint(line.coords))
        elif w > 0:
            black[ProjPoint(line.coords)] = w
    check_weight_identities(lwm)
    return verify_weighted_config(white, black)


# ---------------------------------------------------------------------------
# the three generators
# ---------------------------------------------------------------------------


def gen_collinear(spec, k):
    """k collinear white points and k-1 further points of the same line as blacks."""
    if spec.h != 1:
        raise ValueError("collinear example is defined over prime fields")
    if k < 1:
        raise ValueError("k must be positive")
    if 2 * k > spec.p + 1:
        raise ValueError(f"collinear example requires k <= (p+1)/2, got k={k}")
    zero, one = spec.zero(), spec.one()
    # the line y = 0: points (t : 0 : 1) for t in F, plus (1 : 0 : 0)
    pts = [ProjPoint((spec.from_index(i), zero, one)) for i in range(spec.order)]
    pts.append(ProjPoint((one, zero, zero)))
    white = pts[:k]
    black = {pt: 1 for pt in pts[k:2 * k - 1]}
    return verify_weighted_config(white, black, paper_regime=True)


def gen_two_lines(spec, n, coset_rep=1):
    """White points (a,0) and (0,b) over a multiplicative subgroup or coset.

    a and b run over the coset c*H of the order-n subgroup H of the nonzero
    elements; blacks are the n directions (1 : -h : 0) for h in H plus the
    origin with multiplicity n-1.
    """
    p = spec.p
    if spec.h != 1:
        raise ValueError("two-lines example is defined over prime fields")
    if n < 1 or (p - 1) % n:
        raise ValueError(f"n={n} does not divide p-1={p - 1}")
    c = spec.element(coset_rep)
    if c.is_zero():
        raise ValueError("coset representative must be nonzero")
    g = spec.multiplicative_generator()
    step = g ** ((p - 1) // n)
    subgroup = []
    h = spec.one()
    for _ in range(n):
        subgroup.append(h)
        h = h * step
    zero, one = spec.zero(), spec.one()
    white = [ProjPoint((c * h, zero, one)) for h in subgroup]
    white += [ProjPoint((zero, c * h, one)) for h in subgroup]
    black = {ProjPoint((one, -h, zero)): 1 for h in subgroup}
    if n > 1:
        black[ProjPoint((zero, zero, one))] = n - 1
    return verify_weighted_config(white, black)


def gen_quadrangle(spec):
    """The frame 4-arc with its three diagonal points, as a weighted configuration."""
    if spec.h != 1 or spec.p < 5:
        raise ValueError("quadrangle example needs an odd prime p >= 5")
    zero, one = spec.zero(), spec.one()
    white = [
        ProjPoint((one, zero, zero)),
        ProjPoint((zero, one, zero)),
        ProjPoint((zero, zero, one)),
        ProjPoint((one, one, one)),
    ]
    black = {
        ProjPoint((one, one, zero)): 1,
        ProjPoint((one, zero, one)): 1,
        ProjPoint((zero, one, one)): 1,
    }
    return verify_weighted_config(white, black)


def gen_example(kind, spec, **params):
    """Dispatch to one of the three generators by name."""
    if kind == "collinear":
        return gen_collinear(spec, params["k"])
    if kind == "two_lines":
        return gen_two_lines(spec, params["n"], params.get("coset_rep", 1))
    if kind == "quadrangle":
        return gen_quadrangle(spec)
    raise ValueError(f"unknown example kind {kind!r}")


# ---------------------------------------------------------------------------
# randomized cylinders for pipeline experiments
# ---------------------------------------------------------------------------


def random_cylinder(spec, rng):
    """Seeded random cylinder: random direction, random base in a transversal plane."""
    q = spec.order
    # random nonzero direction
    while True:
        direction = tuple(spec.from_index(rng.randrange(q)) for _ in range(3))
        if not all(c.is_zero() for c in direction):
            break
    axis = next(i for i, c in enumerate(direction) if not c.is_zero())
    base = []
    for enc in rng.sample(range(q * q), q):
        u, v = divmod(enc, q)
        coords = [None, None, None]
        coords[axis] = spec.zero()
        rest = [i for i in range(3) if i != axis]
        coords[rest[0]] = spec.from_index(u)
        coords[rest[1]] = spec.from_index(v)
        base.append(tuple(coords))
    return make_cylinder(spec, direction, base)
