"""The projective plane PG(2,q): points, lines, incidence, cross ratio, conics.

Points and lines are canonically normalized homogeneous triples (first nonzero
coordinate equals 1), so equality is structural.  Representative vectors for
points are plain tuples of field elements; ``point_of_vec`` projectivizes them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldElement, FieldSpec, null_space, element_to_json, element_from_json


def _normalize(coords):
    for i, c in enumerate(coords):
        if not c.is_zero():
            if c == c.spec.one():
                return tuple(coords)
            inv = c.inverse()
            return tuple(x * inv for x in coords)
    raise ValueError("all coordinates are zero")


class _Homogeneous:
    __slots__ = ("coords",)

    def __init__(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self._arity:
            raise ValueError(f"expected {self._arity} coordinates")
        spec = coords[0].spec
        if any(c.spec != spec for c in coords):
            raise ValueError("mixed field specs in coordinates")
        object.__setattr__(self, "coords", _normalize(coords))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def spec(self):
        return self.coords[0].spec

    @property
    def key(self):
        return tuple(c.index for c in self.coords)

    def __eq__(self, other):
        return type(other) is type(self) and self.coords == other.coords

    def __hash__(self):
        return hash((type(self).__name__, self.spec.order, self.key))

    def __lt__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.key < other.key

    def __le__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.key <= other.key


class ProjPoint(_Homogeneous):
    """Point of PG(2,q) with normalized coordinates (x : y : z)."""

    _arity = 3

    def __repr__(self):
        x, y, z = self.key
        return f"({x}:{y}:{z})"


class ProjLine(_Homogeneous):
    """Line of PG(2,q) as a normalized dual triple [a : b : c]."""

    _arity = 3

    def __repr__(self):
        a, b, c = self.key
        return f"[{a}:{b}:{c}]"


# ---------------------------------------------------------------------------
# representative-vector helpers (tuples of field elements, not normalized)
# ---------------------------------------------------------------------------


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))

def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))

def vec_scale(c, u):
    return tuple(c * a for a in u)

def vec_is_zero(u):
    return all(a.is_zero() for a in u)

def point_of_vec(u):
    """Projectivization [u] of a nonzero representative vector."""
    return ProjPoint(u)


def cross(u, v):
    u1, u2, u3 = u
    v1, v2, v3 = v
    return (u2 * v3 - u3 * v2, u3 * v1 - u1 * v3, u1 * v2 - u2 * v1)


def _dot(u, v):
    u1, u2, u3 = u
    v1, v2, v3 = v
    return u1 * v1 + u2 * v2 + u3 * v3


def det3(r0, r1, r2):
    return _dot(r0, cross(r1, r2))


def incident(point, line):
    return _dot(point.coords, line.coords).is_zero()


def join(p, q):
    """Line through two distinct points."""
    if p == q:
        raise ValueError("join of equal points is undefined")
    return ProjLine(cross(p.coords, q.coords))


def meet(l, m):
    """Intersection point of two distinct lines."""
    if l == m:
        raise ValueError("meet of equal lines is undefined")
    return ProjPoint(cross(l.coords, m.coords))


def collinear(p, q, r):
    """Whether three distinct points lie on a common line."""
    if p == q or p == r or q == r:
        raise ValueError("collinear requires three distinct points")
    return det3(p.coords, q.coords, r.coords).is_zero()


def all_points(spec):
    """All points of PG(2,q) in lexicographic order of normalized index triples."""
    zero, one = spec.zero(), spec.one()
    yield ProjPoint((zero, zero, one))
    for i in range(spec.order):
        yield ProjPoint((zero, one, spec.from_index(i)))
    for i in range(spec.order):
        y = spec.from_index(i)
        for j in range(spec.order):
            yield ProjPoint((one, y, spec.from_index(j)))


def all_lines(spec):
    """All lines, in the dual of the point order."""
    for pt in all_points(spec):
        yield ProjLine(pt.coords)


def points_on_line(line):
    """The q+1 points of a line, via a basis of its kernel."""
    spec = line.spec
    basis = null_space([list(line.coords)])
    u, v = basis[0], basis[1]
    pts = [ProjPoint(tuple(v))]
    for i in range(spec.order):
        t = spec.from_index(i)
        pts.append(ProjPoint(vec_add(tuple(u), vec_scale(t, tuple(v)))))
    return pts


def standard_frame(spec):
    """The frame (1:0:0), (0:1:0), (0:0:1), (1:1:1)."""
    zero, one = spec.zero(), spec.one()
    return (
        ProjPoint((one, zero, zero)),
        ProjPoint((zero, one, zero)),
        ProjPoint((zero, zero, one)),
        ProjPoint((one, one, one)),
    )


# ---------------------------------------------------------------------------
# cross ratio
# ---------------------------------------------------------------------------


class _Infinity:
    """Marker for an infinite cross ratio."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinity"


INFINITY = _Infinity()


def _coords_in_basis(p, u, v):
    """Write p = alpha*u + beta*v for collinear p, u, v (as coordinate tuples)."""
    w = cross(u, v)
    i = next(i for i, c in enumerate(w) if not c.is_zero())
    wi_inv = w[i].inverse()
    alpha = cross(p, v)[i] * wi_inv
    beta = -(cross(p, u)[i] * wi_inv)
    return alpha, beta


def cross_ratio(a, b, c, d):
    """Cross ratio of four collinear points, normalized so (inf, 0, 1, x) -> x.

    a, b, c must be pairwise distinct.  d == b yields 0 and d == a yields the
    INFINITY marker (degenerate anchors); d == c is rejected.
    """
    if a == b or a == c or b == c:
        raise ValueError("first three cross-ratio points must be distinct")
    if d == c:
        raise ValueError("cross ratio with d == c is rejected")
    line = join(a, b)
    if not (incident(c, line) and incident(d, line)):
        raise ValueError("cross-ratio points are not collinear")
    ca, cb = _coords_in_basis(c.coords, a.coords, b.coords)
    da, db = _coords_in_basis(d.coords, a.coords, b.coords)
    den = db * ca
    if den.is_zero():
        return INFINITY
    return (cb * da) / den


# ---------------------------------------------------------------------------
# 3x3 matrices over the field (row-major tuples of tuples)
# ---------------------------------------------------------------------------


def mat_vec(m, v):
    return tuple(_dot(row, v) for row in m)


def mat_mul(a, b):
    cols = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in cols) for row in a)


def mat_det(m):
    return det3(*m)


def mat_adjugate(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )


def mat_inverse(m):
    det = mat_det(m)
    if det.is_zero():
        raise ValueError("matrix is singular")
    inv = det.inverse()
    return tuple(tuple(inv * x for x in row) for row in mat_adjugate(m))


def apply_matrix(m, point):
    return ProjPoint(mat_vec(m, point.coords))


def apply_matrix_to_line(m, line):
    """Image of a line under the point map x -> m x (uses the inverse transpose)."""
    adj = mat_adjugate(m)
    return ProjLine(tuple(_dot(col, line.coords) for col in zip(*adj)))


def _cube_root_scale(det):
    """Scalar t with (t*m) of determinant 1, when det(m) has a cube root."""
    spec = det.spec
    target = det.inverse()
    n = spec.order - 1
    if n % 3:
        return target ** pow(3, -1, n)
    for i in range(1, spec.order):
        e = spec.from_index(i)
        if e * e * e == target:
            return e
    return None


def frame_transform(quad):
    """Matrix of the projectivity taking a quad in general position to the frame.

    The result maps the four points, in order, to (1:0:0), (0:1:0), (0:0:1),
    (1:1:1).  It is unique up to a global scale; the determinant is normalized
    to 1 when a cube root exists, otherwise the first nonzero entry is 1.
    """
    if len(quad) != 4 or len(set(quad)) != 4:
        raise ValueError("frame_transform needs 4 distinct points")
    for skip in range(4):
        rest = [q for i, q in enumerate(quad) if i != skip]
        if collinear(*rest):
            raise ValueError("degenerate quad: three points are collinear")
    p1, p2, p3, p4 = (q.coords for q in quad)
    alpha = det3(p4, p2, p3)
    beta = det3(p1, p4, p3)
    gamma = det3(p1, p2, p4)
    cols = (vec_scale(alpha, p1), vec_scale(beta, p2), vec_scale(gamma, p3))
    m = mat_adjugate(tuple(zip(*cols)))
    det = mat_det(m)
    scale = _cube_root_scale(det)
    if scale is None:
        first = next(x for row in m for x in row if not x.is_zero())
        scale = first.inverse()
    return tuple(tuple(scale * x for x in row) for row in m)


# ---------------------------------------------------------------------------
# conics
# ---------------------------------------------------------------------------

CONIC_MONOMIALS = ("xx", "yy", "zz", "xy", "xz", "yz")


class Conic:
    """Conic given by six coefficients in monomial order xx, yy, zz, xy, xz, yz."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != 6:
            raise ValueError("a conic needs 6 coefficients")
        object.__setattr__(self, "coeffs", _normalize(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Conic is immutable")

    @property
    def spec(self):
        return self.coeffs[0].spec

    @property
    def key(self):
        return tuple(c.index for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Conic) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Conic", self.spec.order, self.key))

    def __repr__(self):
        terms = [f"{c!r}*{m}" for c, m in zip(self.coeffs, CONIC_MONOMIALS) if not c.is_zero()]
        return "Conic(" + " + ".join(terms) + " = 0)"

    def value_at_vec(self, coords):
        x, y, z = coords
        cxx, cyy, czz, cxy, cxz, cyz = self.coeffs
        return cxx * x * x + cyy * y * y + czz * z * z + cxy * x * y + cxz * x * z + cyz * y * z

    def value_at(self, point):
        return self.value_at_vec(point.coords)

    def contains(self, point):
        return self.value_at(point).is_zero()

    def points(self):
        return [p for p in all_points(self.spec) if self.contains(p)]

    def line_points(self, line):
        """Points of the conic on a line."""
        return [p for p in points_on_line(line) if self.contains(p)]

    def bilinear_matrix(self):
        cxx, cyy, czz, cxy, cxz, cyz = self.coeffs
        two = self.spec.element(2)
        return (
            (two * cxx, cxy, cxz),
            (cxy, two * cyy, cyz),
            (cxz, cyz, two * czz),
        )

    def is_irreducible(self):
        """Nondegeneracy: matrix determinant for odd q, no contained line for even q."""
        if self.spec.p != 2:
            return not mat_det(self.bilinear_matrix()).is_zero()
        for line in all_lines(self.spec):
            if all(self.contains(p) for p in points_on_line(line)):
                return False
        # a conic through at most 1 rational point is degenerate too
        return len(self.points()) > 1

    def tangent_at(self, point):
        """Tangent line at a conic point (odd characteristic only)."""
        if self.spec.p == 2:
            raise ValueError("tangent via polarity needs odd characteristic")
        if not self.contains(point):
            raise ValueError("tangent requested at a point off the conic")
        return ProjLine(mat_vec(self.bilinear_matrix(), point.coords))


@dataclass(frozen=True)
class ConicFit:
    """Result of fitting a conic through a point set."""

    status: str  # "unique", "none" or "ambiguous"
    conic: Conic | None
    null_dim: int


def conic_row(point):
    x, y, z = point.coords
    return [x * x, y * y, z * z, x * y, x * z, y * z]


def conic_through(points):
    """Fit the conic through >= 5 distinct points, if it is unique."""
    pts = list(points)
    if len(set(pts)) < 5:
        raise ValueError("conic fitting needs at least 5 distinct points")
    basis = null_space([conic_row(p) for p in pts])
    if len(basis) == 0:
        return ConicFit("none", None, 0)
    if len(basis) > 1:
        return ConicFit("ambiguous", None, len(basis))
    return ConicFit("unique", Conic(basis[0]), 1)


# ---------------------------------------------------------------------------
# the GF(p^2) model of the affine plane AG(2,p)
# ---------------------------------------------------------------------------


def gf_to_affine_point(x, base_spec=None):
    """Affine point (c0 : c1 : 1) of PG(2,p) identified with x = c0 + c1*t in GF(p^2)."""
    spec = x.spec
    if spec.h != 2:
        raise ValueError("identification requires a degree-2 extension element")
    if base_spec is None:
        base_spec = FieldSpec(spec.p)
    c0, c1 = x.coeffs
    return ProjPoint((base_spec.element(c0), base_spec.element(c1), base_spec.one()))


def affine_point_to_gf(point, ext_spec):
    """Inverse of gf_to_affine_point for points off the line z = 0."""
    if ext_spec.h != 2 or ext_spec.p != point.spec.p:
        raise ValueError("target spec must be the degree-2 extension of the point's field")
    x, y, z = point.coords
    if z.is_zero():
        raise ValueError("points on z = 0 have no affine counterpart")
    zi = z.inverse()
    return ext_spec.element(((x * zi).coeffs[0], (y * zi).coeffs[0]))


def gf2_line_test(a, b, c):
    """Collinearity of three affine points via (a-c)^(p-1) == (b-c)^(p-1) in GF(p^2)."""
    spec = a.spec
    if spec.h != 2:
        raise ValueError("gf2_line_test requires elements of GF(p^2)")
    if b.spec != spec or c.spec != spec:
        raise ValueError("mixed field specs")
    if a == b or a == c or b == c:
        raise ValueError("gf2_line_test requires distinct elements")
    e = spec.p - 1
    return (a - c) ** e == (b - c) ** e


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------


def point_to_json(p):
    return [element_to_json(c) for c in p.coords]


def point_from_json(spec, obj):
    return ProjPoint(tuple(element_from_json(spec, c) for c in obj))


def line_to_json(l):
    return [element_to_json(c) for c in l.coords]


def line_from_json(spec, obj):
    return ProjLine(tuple(element_from_json(spec, c) for c in obj))


def conic_to_json(c):
    return [element_to_json(x) for x in c.coeffs]
