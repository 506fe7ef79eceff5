"""Integer-indexed incidence tables for PG(2,q), shared by the search kernels.

Points and lines are numbered in the lexicographic order of their normalized
coordinate triples (element indices); the same list serves both roles by
duality.  All arithmetic is reduced to gather operations on the field's
add/sub/mul index tables, so the construction is uniform in p and h.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fields import operation_tables
from .plane import ProjPoint, ProjLine


def _point_key_list(spec):
    q = spec.order
    keys = [(0, 0, 1)]
    keys.extend((0, 1, z) for z in range(q))
    keys.extend((1, y, z) for y in range(q) for z in range(q))
    return keys


class PlaneIndex:
    """Precomputed incidence structure of PG(2,q) over a fixed field spec."""

    def __init__(self, spec):
        if spec.order > 64:
            raise ValueError("incidence tables support q <= 64 only")
        self.spec = spec
        q = spec.order
        tables = operation_tables(spec)
        self.add = tables["add"]
        self.sub = tables["sub"]
        self.mul = tables["mul"]
        self.neg = tables["neg"]
        self.inv = tables["inv"]

        keys = _point_key_list(spec)
        self.n = len(keys)
        assert self.n == q * q + q + 1
        self.coords = np.array(keys, dtype=np.int32)
        self.point_index = {key: i for i, key in enumerate(keys)}

        # incidence[i, j]: point i on line j (dual coordinates share the list)
        c = self.coords
        dot = self.add[
            self.add[
                self.mul[c[:, 0][:, None], c[:, 0][None, :]],
                self.mul[c[:, 1][:, None], c[:, 1][None, :]],
            ],
            self.mul[c[:, 2][:, None], c[:, 2][None, :]],
        ]
        incid = dot == 0
        per_line = incid.sum(axis=0)
        assert (per_line == q + 1).all(), "every line must carry q+1 points"

        self.points_on_line = np.empty((self.n, q + 1), dtype=np.int32)
        self.lines_through_point = np.empty((self.n, q + 1), dtype=np.int32)
        for j in range(self.n):
            self.points_on_line[j] = np.nonzero(incid[:, j])[0]
            self.lines_through_point[j] = np.nonzero(incid[j, :])[0]

        self.words = (self.n + 63) // 64
        self.point_line_words = np.zeros((self.n, self.words), dtype=np.uint64)
        self.line_point_words = np.zeros((self.n, self.words), dtype=np.uint64)
        for i in range(self.n):
            for ln in self.lines_through_point[i]:
                self.point_line_words[i, ln >> 6] |= np.uint64(1) << np.uint64(ln & 63)
            for pt in self.points_on_line[i]:
                self.line_point_words[i, pt >> 6] |= np.uint64(1) << np.uint64(pt & 63)

        self.pair_line = np.full((self.n, self.n), -1, dtype=np.int32)
        for j in range(self.n):
            pts = self.points_on_line[j]
            self.pair_line[np.ix_(pts, pts)] = j
        np.fill_diagonal(self.pair_line, -1)

        one = spec.one().index
        self.frame = tuple(
            self.point_index[key]
            for key in ((one, 0, 0), (0, one, 0), (0, 0, one), (one, one, one))
        )
        self._py = None

    # ------------------------------------------------------------------
    # conversions
    # ------------------------------------------------------------------

    def point_at(self, i):
        key = self.coords[i]
        return ProjPoint(tuple(self.spec.from_index(int(v)) for v in key))

    def line_at(self, j):
        key = self.coords[j]
        return ProjLine(tuple(self.spec.from_index(int(v)) for v in key))

    def index_of_point(self, point):
        return self.point_index[point.key]

    def index_of_line(self, line):
        return self.point_index[line.key]

    # ------------------------------------------------------------------
    # pure-Python mirrors (arbitrary-precision int bitmasks), built lazily
    # ------------------------------------------------------------------

    @property
    def py(self):
        if self._py is None:
            point_line_mask = []
            line_point_mask = []
            for i in range(self.n):
                m = 0
                for ln in self.lines_through_point[i]:
                    m |= 1 << int(ln)
                point_line_mask.append(m)
                m = 0
                for pt in self.points_on_line[i]:
                    m |= 1 << int(pt)
                line_point_mask.append(m)
            self._py = {
                "pair_line": [[int(x) for x in row] for row in self.pair_line],
                "point_line_mask": point_line_mask,
                "line_point_mask": line_point_mask,
                "coords": [tuple(int(v) for v in row) for row in self.coords],
                "add": [[int(x) for x in row] for row in self.add],
                "sub": [[int(x) for x in row] for row in self.sub],
                "mul": [[int(x) for x in row] for row in self.mul],
                "inv": [int(x) for x in self.inv],
            }
        return self._py


@lru_cache(maxsize=8)
def _cached_index(spec):
    return PlaneIndex(spec)


def plane_index(spec):
    """Shared cached PlaneIndex for a field spec."""
    return _cached_index(spec)
