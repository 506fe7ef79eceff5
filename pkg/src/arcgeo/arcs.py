"""Blocked arcs: verification, certificates, factorizations and line analysis.

A configuration is a white k-arc together with k-1 black points blocking every
secant.  Verification derives the secant -> black certificate; the counting
argument (k-1 blockers, each on at most k/2 secants, k(k-1)/2 secants) then
forces exactly one black point per secant and exactly k/2 secants per black
point, so uniqueness is checked rather than assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ConsistencyError, VerificationError
from .fields import FieldSpec, element_to_json, element_from_json, field_from_order
from .plane import (
    Conic,
    ProjLine,
    ProjPoint,
    collinear,
    conic_through,
    cross_ratio,
    gf_to_affine_point,
    incident,
    join,
    point_from_json,
    point_of_vec,
    point_to_json,
    vec_add,
    vec_is_zero,
    vec_scale,
    _coords_in_basis,
)


def is_arc(points):
    """Whether a set of distinct points has no 3 on a line."""
    pts = list(points)
    if len(set(pts)) != len(pts):
        raise ValueError("arc test requires distinct points")
    for a, b, c in itertools.combinations(pts, 3):
        if collinear(a, b, c):
            return False
    return True


class ArcConfig:
    """A verified white k-arc plus black blocking set with its certificate.

    Instances are produced by verify_gha (or the JSON loader, which verifies);
    the certificate maps each unordered white index pair to the index of the
    unique black point on its secant.
    """

    __slots__ = ("spec", "white", "black", "certificate")

    def __init__(self, spec, white, black, certificate):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "white", tuple(white))
        object.__setattr__(self, "black", tuple(black))
        object.__setattr__(self, "certificate", dict(certificate))

    def __setattr__(self, name, value):
        raise AttributeError("ArcConfig is immutable")

    @property
    def k(self):
        return len(self.white)

    def secant(self, i, j):
        return join(self.white[i], self.white[j])

    def black_on_secant(self, i, j):
        return self.black[self.certificate[frozenset((i, j))]]

    def __repr__(self):
        return f"ArcConfig(k={self.k}, q={self.spec.order})"

    def to_json_dict(self):
        out = {
            "q": self.spec.order,
            "h": self.spec.h,
            "white": [point_to_json(p) for p in self.white],
            "black": [point_to_json(p) for p in self.black],
        }
        if self.spec.h > 1:
            out["modulus"] = list(self.spec.modulus)
        return out

    def certificate_json(self):
        return {f"{i},{j}": b for (i, j), b in sorted(
            (tuple(sorted(pair)), b) for pair, b in self.certificate.items())}


def verify_gha(white, black):
    """Verify that black blocks every secant of the white arc; build the certificate.

    Raises VerificationError naming an unblocked secant or a secant carrying
    two black points, ValueError on malformed input (sizes, overlap, non-arc).
    """
    white = tuple(white)
    black = tuple(black)
    k = len(white)
    if k == 0:
        raise ValueError("white set is empty")
    if len(set(white)) != k or len(set(black)) != len(black):
        raise ValueError("white and black sets must have distinct points")
    if k > 1 and k % 2:
        raise ValueError(f"white size {k} is odd; blocked arcs have even size")
    if len(black) != k - 1:
        raise ValueError(f"expected {k - 1} black points, got {len(black)}")
    if set(white) & set(black):
        raise ValueError("white and black sets overlap")
    if not is_arc(white):
        raise ValueError("white set is not an arc")
    spec = white[0].spec
    certificate = {}
    for i, j in itertools.combinations(range(k), 2):
        secant = join(white[i], white[j])
        hits = [b for b, pt in enumerate(black) if incident(pt, secant)]
        if not hits:
            raise VerificationError("unblocked secant", {"pair": (i, j), "line": secant.key})
        if len(hits) > 1:
            raise VerificationError(
                "secant with two black points",
                {"pair": (i, j), "line": secant.key, "black": hits},
            )
        certificate[frozenset((i, j))] = hits[0]
    return ArcConfig(spec, white, black, certificate)


def arc_config_from_json(obj):
    """Decode and re-verify an arc configuration from its JSON dictionary."""
    q = obj["q"]
    h = obj.get("h", 1)
    spec = field_from_order(q)
    if spec.h != h:
        raise ValueError(f"order {q} does not match extension degree {h}")
    if "modulus" in obj and tuple(obj["modulus"]) != spec.modulus:
        spec = FieldSpec(spec.p, spec.h, tuple(obj["modulus"]))
    white = [point_from_json(spec, p) for p in obj["white"]]
    black = [point_from_json(spec, p) for p in obj["black"]]
    return verify_gha(white, black)


def factorization(cfg):
    """The perfect matching of white indices induced by each black point.

    Returns one matching (list of sorted index pairs) per black point; the
    matchings partition all white pairs.
    """
    if cfg.k < 4:
        raise ValueError("factorization needs a blocked arc with k >= 4")
    matchings = [[] for _ in cfg.black]
    for pair, b in cfg.certificate.items():
        matchings[b].append(tuple(sorted(pair)))
    for b, matching in enumerate(matchings):
        touched = [i for pair in matching for i in pair]
        if len(matching) != cfg.k // 2 or len(set(touched)) != cfg.k:
            raise ConsistencyError(f"black point {b} does not induce a perfect matching")
    return [sorted(m) for m in matchings]


# ---------------------------------------------------------------------------
# representative frames and the rescaling normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TangentFrame:
    """Representative vectors for the white points of a blocked arc.

    raw_coeffs[(i, j)] is the coefficient b with B_ij ~ E_i + b*E_j for the
    original canonical representatives; reps holds the rescaled vectors for
    which every blocker is represented by E_i + E_j exactly.
    """

    cfg: ArcConfig
    reps: tuple
    raw_coeffs: dict

    def rep(self, i):
        return self.reps[i]


def _pair_coefficient(cfg, reps, i, j):
    """b with black-on-secant(i,j) ~ reps[i] + b*reps[j]."""
    b_pt = cfg.black_on_secant(i, j)
    alpha, beta = _coords_in_basis(b_pt.coords, reps[i], reps[j])
    if alpha.is_zero() or beta.is_zero():
        raise ConsistencyError("blocker coincides with a white point")
    return beta / alpha


def tangent_frame(cfg):
    """Rescale representatives so each blocker is the plain sum of its endpoints.

    Only meaningful over odd prime fields; the rescaled frame satisfies
    B_ij ~ E_i + E_j for every pair, which is checked and not assumed.
    """
    if cfg.spec.h != 1 or cfg.spec.p == 2:
        raise ValueError("tangent frames are defined over odd prime fields")
    if cfg.k < 4:
        raise ValueError("tangent frames need k >= 4")
    raw_reps = [p.coords for p in cfg.white]
    raw = {}
    for i, j in itertools.permutations(range(cfg.k), 2):
        if i < j:
            raw[(i, j)] = _pair_coefficient(cfg, raw_reps, i, j)
        else:
            raw[(i, j)] = raw[(j, i)].inverse()
    reps = [raw_reps[0]]
    for s in range(1, cfg.k):
        reps.append(vec_scale(raw[(0, s)], raw_reps[s]))
    for i, j in itertools.combinations(range(cfg.k), 2):
        b_pt = cfg.black_on_secant(i, j)
        if point_of_vec(vec_add(reps[i], reps[j])) != b_pt:
            raise ConsistencyError(
                f"rescaled representatives fail the sum identity on pair {(i, j)}"
            )
    return TangentFrame(cfg, tuple(reps), raw)


def triple_product(frame, i, j, k):
    """b_ij * b_jk * b_ki for the pre-rescaling coefficients."""
    if len({i, j, k}) != 3:
        raise ValueError("triple product needs three distinct indices")
    for idx in (i, j, k):
        if not 0 <= idx < frame.cfg.k:
            raise ValueError(f"index {idx} out of range")
    raw = frame.raw_coeffs
    return raw[(i, j)] * raw[(j, k)] * raw[(k, i)]


def is_special(frame, quad):
    """Whether four rescaled representative vectors sum to the zero vector."""
    quad = tuple(quad)
    if len(set(quad)) != 4:
        raise ValueError("special test needs four distinct indices")
    for idx in quad:
        if not 0 <= idx < frame.cfg.k:
            raise ValueError(f"index {idx} out of range")
    acc = frame.reps[quad[0]]
    for idx in quad[1:]:
        acc = vec_add(acc, frame.reps[idx])
    return vec_is_zero(acc)


# ---------------------------------------------------------------------------
# lines meeting the blocking set, induced block structure and type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineTypeReport:
    """Outcome of analysing a line disjoint from the arc against the blockers."""

    m: int
    blacks_on_line: tuple
    s_minus: tuple
    s_plus: tuple
    divides_n: bool
    blocks: tuple | None  # pairs of white-index blocks, or None if the greedy partition failed
    kind: str  # "hyperbolic", "elliptic" or "indeterminate"
    conic: Conic | None


def _partner_maps(cfg, blacks_on_line):
    """For each listed black point, the white-index involution it induces."""
    maps = []
    matchings = factorization(cfg)
    black_index = {pt: b for b, pt in enumerate(cfg.black)}
    for pt in blacks_on_line:
        m = {}
        for i, j in matchings[black_index[pt]]:
            m[i] = j
            m[j] = i
        maps.append(m)
    return maps


def induced_components(cfg, line, w):
    """White-index components (s_plus, s_minus) induced by a line and a base point.

    s_minus[i] is the partner of w under the i-th blocker on the line, and
    s_plus[i] the partner of s_minus[0]; the indices keep the blocker order.
    """
    if not 0 <= w < cfg.k:
        raise ValueError(f"white index {w} out of range")
    for idx, pt in enumerate(cfg.white):
        if incident(pt, line):
            raise ValueError(f"line passes through white point {idx}; rejected")
    blacks_on_line = tuple(pt for pt in cfg.black if incident(pt, line))
    if not blacks_on_line:
        raise ValueError("line misses the blocking set")
    partners = _partner_maps(cfg, blacks_on_line)
    s_minus = tuple(pm[w] for pm in partners)
    s_plus = tuple(pm[s_minus[0]] for pm in partners)
    if s_plus[0] != w:
        raise ConsistencyError("base point is not recovered in its own block")
    return blacks_on_line, s_minus, s_plus


def line_black_type(cfg, line, w):
    """Divisibility and conic type of a line meeting only the blocking set.

    Over odd prime fields the block-size and divisibility facts are enforced
    (violations raise ConsistencyError); over other fields they are reported
    in the returned record without being asserted.
    """
    if cfg.k < 4:
        raise ValueError("line analysis needs k >= 4")
    strict = cfg.spec.h == 1 and cfg.spec.p != 2
    blacks_on_line, s_minus, s_plus = induced_components(cfg, line, w)
    m = len(blacks_on_line)
    if strict and m >= cfg.spec.p:
        raise ValueError(f"line meets the blocking set in m={m} >= p points")
    n = cfg.k // 2
    divides_n = n % m == 0
    if strict and not divides_n:
        raise ConsistencyError(f"m={m} does not divide n={n}")

    blocks = _greedy_blocks(cfg, line, m)
    if strict and blocks is None:
        raise ConsistencyError("white points do not partition into blocks of size m")

    kind, conic = "indeterminate", None
    if m >= 3:
        pts = [cfg.white[i] for i in set(s_minus) | set(s_plus)]
        fit = conic_through(pts)
        if fit.status != "unique":
            if strict:
                raise ConsistencyError(f"block conic fit is {fit.status}")
        else:
            conic = fit.conic
            hits = len(conic.line_points(line))
            if hits == 2:
                kind = "hyperbolic"
                if strict and (cfg.spec.p - 1) % m:
                    raise ConsistencyError(f"hyperbolic m={m} does not divide p-1")
            elif hits == 0:
                kind = "elliptic"
                if strict and (cfg.spec.p + 1) % m:
                    raise ConsistencyError(f"elliptic m={m} does not divide p+1")
            elif strict:
                raise ConsistencyError("block conic is tangent to the line")
    return LineTypeReport(m, blacks_on_line, s_minus, s_plus, divides_n, blocks, kind, conic)


def _greedy_blocks(cfg, line, m):
    """Partition white indices into pairs of size-m blocks, base points taken greedily."""
    used = set()
    blocks = []
    for w in range(cfg.k):
        if w in used:
            continue
        try:
            _, s_minus, s_plus = induced_components(cfg, line, w)
        except (ValueError, ConsistencyError):
            return None
        minus, plus = set(s_minus), set(s_plus)
        if len(minus) != m or len(plus) != m or minus & plus:
            return None
        if (minus | plus) & used:
            return None
        used |= minus | plus
        blocks.append((tuple(sorted(minus)), tuple(sorted(plus))))
    if len(used) != cfg.k:
        return None
    return tuple(blocks)


# ---------------------------------------------------------------------------
# explicit root-of-unity blocks
# ---------------------------------------------------------------------------


def roots_of_unity_block(spec, m, kind):
    """The m points cut out by m-th roots of unity, in hyperbolic or elliptic form.

    Hyperbolic (m | p-1): points (u : 1/u : 1) on the conic xy = z^2.
    Elliptic (m | p+1): roots of unity of GF(p^2) mapped to affine points,
    all on the norm-1 conic of the quadratic extension.
    """
    if spec.h != 1 or spec.p == 2:
        raise ValueError("root-of-unity blocks are defined over odd prime fields")
    p = spec.p
    if m < 1:
        raise ValueError("m must be positive")
    if kind == "hyperbolic":
        if (p - 1) % m:
            raise ValueError(f"hyperbolic blocks need m | p-1, got m={m}, p={p}")
        zeta = spec.multiplicative_generator() ** ((p - 1) // m)
        pts = set()
        u = spec.one()
        for _ in range(m):
            pts.add(ProjPoint((u, u.inverse(), spec.one())))
            u = u * zeta
        return frozenset(pts)
    if kind == "elliptic":
        if (p + 1) % m:
            raise ValueError(f"elliptic blocks need m | p+1, got m={m}, p={p}")
        ext = FieldSpec(p, 2)
        zeta = ext.multiplicative_generator() ** ((ext.order - 1) // m)
        pts = set()
        u = ext.one()
        for _ in range(m):
            if u ** (p + 1) != ext.one():
                raise ConsistencyError("root of unity off the norm-1 conic")
            pts.add(gf_to_affine_point(u, spec))
            u = u * zeta
        return frozenset(pts)
    raise ValueError(f"unknown block kind {kind!r}")


# ---------------------------------------------------------------------------
# four-secant midpoint diagnostic
# ---------------------------------------------------------------------------


def four_secant_midpoint(blacks, special):
    """The black point at cross ratio 1/2 from the distinguished one, if any.

    Given the four collinear black points of a candidate four-secant and the
    distinguished intersection point, returns the unique point d among the
    other three with cross_ratio(special, c1, c2, d) == 1/2, or None.
    """
    blacks = list(blacks)
    if len(set(blacks)) != 4 or special not in blacks:
        raise ValueError("need 4 distinct collinear points including the special one")
    spec = special.spec
    if spec.p == 2:
        raise ValueError("midpoint signature needs odd characteristic")
    half = spec.element(2).inverse()
    others = [b for b in blacks if b != special]
    for d in others:
        c1, c2 = [x for x in others if x != d]
        if cross_ratio(special, c1, c2, d) == half:
            return d
    return None
