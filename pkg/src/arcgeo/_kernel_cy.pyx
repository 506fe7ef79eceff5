# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel: identical algorithm to _kernel_py, C bitset loops.

Both kernels must produce byte-identical solutions and statistics; see the
pure-Python module for the algorithm description.
"""

import time

import numpy as np
cimport numpy as cnp

cnp.import_array()

KERNEL_NAME = "compiled"

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

DEF MAX_K = 16
DEF MAX_SEC = 128   # k*(k-1)/2 for k <= 16


cdef class _Engine:
    cdef:
        int n, words, k, t0
        long long node_budget, nodes, pruned
        long long arcs_enumerated, completions_attempted
        bint budget_hit, collect_arcs, has_deadline
        double deadline
        cnp.int32_t[:, ::1] pair_line
        u64[:, ::1] plw, lpw
        u64[:, ::1] forb_rows, cand_rows, m_rows
        u64[:] nf_row, smask, arcbits, all_mask
        int arc[MAX_K]
        int secants[MAX_SEC]
        int chosen[MAX_SEC]
        cnp.int32_t[:] pos_of, cand_ids, by_pos_flat, by_pos_count
        u64[:] cover_lo, cover_hi
        int ncand, nsec
        u64 full_lo, full_hi
        list solutions, arcs_out

    def __init__(self, idx, prefix, int k, bint collect_arcs,
                 long long node_budget, deadline, int min_next):
        cdef int n = idx.n
        cdef int words = idx.words
        self.n = n
        self.words = words
        self.k = k
        self.collect_arcs = collect_arcs
        self.node_budget = node_budget
        self.has_deadline = deadline is not None
        self.deadline = deadline if deadline is not None else 0.0
        self.nodes = 0
        self.pruned = 0
        self.arcs_enumerated = 0
        self.completions_attempted = 0
        self.budget_hit = False
        self.solutions = []
        self.arcs_out = []

        self.pair_line = np.ascontiguousarray(idx.pair_line, dtype=np.int32)
        self.plw = np.ascontiguousarray(idx.point_line_words, dtype=np.uint64)
        self.lpw = np.ascontiguousarray(idx.line_point_words, dtype=np.uint64)

        self.forb_rows = np.zeros((k + 2, words), dtype=np.uint64)
        self.cand_rows = np.zeros((k + 2, words), dtype=np.uint64)
        self.m_rows = np.zeros((k + 2, words), dtype=np.uint64)
        self.nf_row = np.zeros(words, dtype=np.uint64)
        self.smask = np.zeros(words, dtype=np.uint64)
        self.arcbits = np.zeros(words, dtype=np.uint64)
        self.all_mask = np.zeros(words, dtype=np.uint64)
        self.pos_of = np.full(n, -1, dtype=np.int32)
        self.cand_ids = np.zeros(n, dtype=np.int32)
        self.cover_lo = np.zeros(n, dtype=np.uint64)
        self.cover_hi = np.zeros(n, dtype=np.uint64)
        self.by_pos_flat = np.zeros(MAX_SEC * n, dtype=np.int32)
        self.by_pos_count = np.zeros(MAX_SEC, dtype=np.int32)

        cdef int w
        for w in range(words):
            self.all_mask[w] = <u64>0xFFFFFFFFFFFFFFFF
        cdef int tail = n & 63
        if tail:
            self.all_mask[words - 1] = (<u64>1 << tail) - 1

        # prefix state: row t0 holds forbidden/candidates for the partial arc
        cdef int t0 = len(prefix)
        self.t0 = t0
        cdef int t, i, c, ln, sec_count = 0
        for t in range(t0):
            c = prefix[t]
            self.arc[t] = c
            self.arcbits[c >> 6] |= <u64>1 << (c & 63)
            for i in range(t):
                ln = self.pair_line[c, self.arc[i]]
                self.secants[sec_count] = ln
                sec_count += 1
                for w in range(words):
                    self.forb_rows[t0, w] |= self.lpw[ln, w]
        for w in range(words):
            self.cand_rows[t0, w] = (
                self.all_mask[w] & ~self.forb_rows[t0, w] & ~self.arcbits[w]
            )
        if min_next >= 0:
            for w in range(words):
                if (min_next >> 6) > w:
                    self.cand_rows[t0, w] = 0
                elif (min_next >> 6) == w:
                    if (min_next & 63) == 63:
                        self.cand_rows[t0, w] = 0
                    else:
                        self.cand_rows[t0, w] &= ~(((<u64>1) << ((min_next & 63) + 1)) - 1)

    cdef bint over_budget(self) except? True:
        self.nodes += 1
        if self.nodes > self.node_budget:
            self.budget_hit = True
            return True
        if self.has_deadline and (self.nodes & 4095) == 0:
            if time.monotonic() > self.deadline:
                self.budget_hit = True
                return True
        return False

    cdef int run(self) except -1:
        if self.t0 == self.k:
            if not self.over_budget():
                self.complete()
        else:
            self.extend(self.t0)
        return 0

    cdef int extend(self, int t) except -1:
        if self.over_budget():
            return 0
        if t == self.k:
            self.complete()
            return 0
        cdef int need = self.k - t - 1
        cdef int words = self.words
        cdef int w, i, c, ln, base, wi
        cdef u64 mv, bit
        cdef long long cnt_next, cnt_pruned
        for w in range(words):
            self.m_rows[t, w] = self.cand_rows[t, w]
        base = t * (t - 1) // 2
        while True:
            c = -1
            for w in range(words):
                mv = self.m_rows[t, w]
                if mv:
                    c = (w << 6) + __builtin_ctzll(mv)
                    self.m_rows[t, w] = mv & (mv - 1)
                    break
            if c < 0:
                break
            for w in range(words):
                self.nf_row[w] = 0
            for i in range(t):
                ln = self.pair_line[c, self.arc[i]]
                self.secants[base + i] = ln
                for w in range(words):
                    self.nf_row[w] |= self.lpw[ln, w]
            cnt_next = 0
            cnt_pruned = 0
            for w in range(words):
                mv = self.m_rows[t, w]
                self.cand_rows[t + 1, w] = mv & ~self.nf_row[w]
                cnt_next += __builtin_popcountll(mv & ~self.nf_row[w])
                cnt_pruned += __builtin_popcountll(mv & self.nf_row[w])
            self.pruned += cnt_pruned
            if cnt_next >= need:
                self.arc[t] = c
                wi = c >> 6
                bit = (<u64>1) << (c & 63)
                self.arcbits[wi] |= bit
                for w in range(words):
                    self.forb_rows[t + 1, w] = self.forb_rows[t, w] | self.nf_row[w]
                self.extend(t + 1)
                self.arcbits[wi] &= ~bit
            if self.budget_hit:
                return 0
        return 0

    cdef int complete(self) except -1:
        self.arcs_enumerated += 1
        cdef int k = self.k
        cdef int i, w, ln, p, cnt, pos, ci
        if self.collect_arcs:
            self.arcs_out.append(tuple(self.arc[i] for i in range(k)))
            return 0
        self.completions_attempted += 1
        cdef int nsec = k * (k - 1) // 2
        self.nsec = nsec
        cdef int words = self.words
        for w in range(words):
            self.smask[w] = 0
        for i in range(nsec):
            ln = self.secants[i]
            self.smask[ln >> 6] |= (<u64>1) << (ln & 63)
            self.pos_of[ln] = i
        cdef int half = k >> 1
        cdef u64 hv, bit, lo, hi
        cdef int ncand = 0
        for w in range(words):
            hv = self.forb_rows[k, w] & ~self.arcbits[w]
            while hv:
                p = (w << 6) + __builtin_ctzll(hv)
                hv &= hv - 1
                cnt = 0
                for i in range(words):
                    cnt += __builtin_popcountll(self.plw[p, i] & self.smask[i])
                if k > 2 and cnt != half:
                    continue
                lo = 0
                hi = 0
                for i in range(words):
                    bit = self.plw[p, i] & self.smask[i]
                    while bit:
                        ln = (i << 6) + __builtin_ctzll(bit)
                        bit &= bit - 1
                        pos = self.pos_of[ln]
                        if pos < 64:
                            lo |= (<u64>1) << pos
                        else:
                            hi |= (<u64>1) << (pos - 64)
                self.cand_ids[ncand] = p
                self.cover_lo[ncand] = lo
                self.cover_hi[ncand] = hi
                ncand += 1
        self.ncand = ncand
        for i in range(nsec):
            self.by_pos_count[i] = 0
        cdef int n = self.n
        for ci in range(ncand):
            lo = self.cover_lo[ci]
            while lo:
                pos = __builtin_ctzll(lo)
                lo &= lo - 1
                self.by_pos_flat[pos * n + self.by_pos_count[pos]] = ci
                self.by_pos_count[pos] += 1
            hi = self.cover_hi[ci]
            while hi:
                pos = 64 + __builtin_ctzll(hi)
                hi &= hi - 1
                self.by_pos_flat[pos * n + self.by_pos_count[pos]] = ci
                self.by_pos_count[pos] += 1
        if nsec >= 64:
            self.full_lo = <u64>0xFFFFFFFFFFFFFFFF
            self.full_hi = ((<u64>1) << (nsec - 64)) - 1 if nsec > 64 else 0
        else:
            self.full_lo = ((<u64>1) << nsec) - 1
            self.full_hi = 0
        self.cover_dfs(0, 0, 0)
        for i in range(nsec):
            self.pos_of[self.secants[i]] = -1
        return 0

    cdef int cover_dfs(self, int depth, u64 covered_lo, u64 covered_hi) except -1:
        if self.over_budget():
            return 0
        cdef int i, j, pos, ci, cnt, best_pos, best_cnt, n
        cdef u64 m_lo, m_hi
        if covered_lo == self.full_lo and covered_hi == self.full_hi:
            blacks = sorted(self.cand_ids[self.chosen[i]] for i in range(depth))
            self.solutions.append(
                (tuple(self.arc[i] for i in range(self.k)), tuple(blacks))
            )
            return 0
        n = self.n
        best_pos = -1
        best_cnt = n + 1
        m_lo = self.full_lo & ~covered_lo
        m_hi = self.full_hi & ~covered_hi
        while m_lo or m_hi:
            if m_lo:
                pos = __builtin_ctzll(m_lo)
                m_lo &= m_lo - 1
            else:
                pos = 64 + __builtin_ctzll(m_hi)
                m_hi &= m_hi - 1
            cnt = 0
            for j in range(self.by_pos_count[pos]):
                ci = self.by_pos_flat[pos * n + j]
                if not ((self.cover_lo[ci] & covered_lo) or (self.cover_hi[ci] & covered_hi)):
                    cnt += 1
            if cnt < best_cnt:
                best_cnt = cnt
                best_pos = pos
                if cnt == 0:
                    return 0
        for j in range(self.by_pos_count[best_pos]):
            ci = self.by_pos_flat[best_pos * n + j]
            if (self.cover_lo[ci] & covered_lo) or (self.cover_hi[ci] & covered_hi):
                continue
            self.chosen[depth] = ci
            self.cover_dfs(depth + 1, covered_lo | self.cover_lo[ci],
                           covered_hi | self.cover_hi[ci])
            if self.budget_hit:
                return 0
        return 0


def search_completions(idx, prefix, k, collect="solutions", node_budget=10**9, deadline=None,
                       min_next=-1):
    """Compiled twin of _kernel_py.search_completions (same contract)."""
    if k > 12:
        raise ValueError("compiled kernel supports k <= 12")
    eng = _Engine(idx, tuple(prefix), k, collect == "arcs", node_budget, deadline, min_next)
    eng.run()
    return {
        "solutions": eng.solutions,
        "arcs": eng.arcs_out,
        "arcs_enumerated": eng.arcs_enumerated,
        "completions_attempted": eng.completions_attempted,
        "nodes": eng.nodes,
        "pruned": eng.pruned,
        "budget_hit": eng.budget_hit,
    }


# ---------------------------------------------------------------------------
# canonical class keys
# ---------------------------------------------------------------------------


cdef inline int _det3(cnp.int32_t[:, ::1] add, cnp.int32_t[:, ::1] sub, cnp.int32_t[:, ::1] mul,
                      int* u, int* v, int* w) nogil:
    cdef int m1 = sub[mul[v[1], w[2]], mul[v[2], w[1]]]
    cdef int m2 = sub[mul[v[0], w[2]], mul[v[2], w[0]]]
    cdef int m3 = sub[mul[v[0], w[1]], mul[v[1], w[0]]]
    return sub[add[mul[u[0], m1], mul[u[2], m3]], mul[u[1], m2]]


cdef inline long long _packed_image(cnp.int32_t[:, ::1] add, cnp.int32_t[:, ::1] mul,
                                    cnp.int32_t[:] inv, int q, int mat[3][3], int* src) nogil:
    cdef int img[3]
    cdef int i, j, acc, s
    for i in range(3):
        acc = 0
        for j in range(3):
            acc = add[acc, mul[mat[i][j], src[j]]]
        img[i] = acc
    for i in range(3):
        if img[i]:
            s = inv[img[i]]
            return ((<long long>mul[s, img[0]] * q + mul[s, img[1]]) * q + mul[s, img[2]])
    return -2  # unreachable for invertible maps


cdef inline void _insertion_sort(long long* a, int n) nogil:
    cdef int i, j
    cdef long long v
    for i in range(1, n):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


def canonical_arc_key(idx, white, black):
    """Compiled twin of _kernel_py.canonical_arc_key (same key tuples)."""
    cdef cnp.int32_t[:, ::1] add = np.ascontiguousarray(idx.add, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] sub = np.ascontiguousarray(idx.sub, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] mul = np.ascontiguousarray(idx.mul, dtype=np.int32)
    cdef cnp.int32_t[:] inv = np.ascontiguousarray(idx.inv, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] coords = np.ascontiguousarray(idx.coords, dtype=np.int32)
    cdef int q = idx.spec.order
    cdef int wl = len(white)
    cdef int bl = len(black)
    if wl > 12 or wl < 4 or bl > 11:
        raise ValueError("canonical keys need 4 <= |white| <= 12 and |black| <= 11")
    cdef int total = wl + 1 + bl
    cdef int wpts[12][3]
    cdef int bpts[11][3]
    cdef int i, j
    for i in range(wl):
        for j in range(3):
            wpts[i][j] = coords[white[i], j]
    for i in range(bl):
        for j in range(3):
            bpts[i][j] = coords[black[i], j]

    cdef long long best[24]
    cdef long long cand[24]
    cdef bint have_best = False
    cdef int ia, ib, ic, idd, t, cmp_res
    cdef int alpha, beta, gamma
    cdef int u[3]
    cdef int v[3]
    cdef int w[3]
    cdef int mat[3][3]

    for ia in range(wl):
        for ib in range(wl):
            if ib == ia:
                continue
            for ic in range(wl):
                if ic == ia or ic == ib:
                    continue
                for idd in range(wl):
                    if idd == ia or idd == ib or idd == ic:
                        continue
                    alpha = _det3(add, sub, mul, wpts[idd], wpts[ib], wpts[ic])
                    beta = _det3(add, sub, mul, wpts[ia], wpts[idd], wpts[ic])
                    gamma = _det3(add, sub, mul, wpts[ia], wpts[ib], wpts[idd])
                    for j in range(3):
                        u[j] = mul[alpha, wpts[ia][j]]
                        v[j] = mul[beta, wpts[ib][j]]
                        w[j] = mul[gamma, wpts[ic][j]]
                    # adjugate of the matrix with columns u, v, w
                    mat[0][0] = sub[mul[v[1], w[2]], mul[w[1], v[2]]]
                    mat[0][1] = sub[mul[w[0], v[2]], mul[v[0], w[2]]]
                    mat[0][2] = sub[mul[v[0], w[1]], mul[w[0], v[1]]]
                    mat[1][0] = sub[mul[w[1], u[2]], mul[u[1], w[2]]]
                    mat[1][1] = sub[mul[u[0], w[2]], mul[w[0], u[2]]]
                    mat[1][2] = sub[mul[w[0], u[1]], mul[u[0], w[1]]]
                    mat[2][0] = sub[mul[u[1], v[2]], mul[v[1], u[2]]]
                    mat[2][1] = sub[mul[v[0], u[2]], mul[u[0], v[2]]]
                    mat[2][2] = sub[mul[u[0], v[1]], mul[v[0], u[1]]]
                    for t in range(wl):
                        cand[t] = _packed_image(add, mul, inv, q, mat, wpts[t])
                    _insertion_sort(cand, wl)
                    cand[wl] = -1
                    for t in range(bl):
                        cand[wl + 1 + t] = _packed_image(add, mul, inv, q, mat, bpts[t])
                    _insertion_sort(&cand[wl + 1], bl)
                    if not have_best:
                        for i in range(total):
                            best[i] = cand[i]
                        have_best = True
                    else:
                        cmp_res = 0
                        for i in range(total):
                            if cand[i] != best[i]:
                                cmp_res = -1 if cand[i] < best[i] else 1
                                break
                        if cmp_res < 0:
                            for i in range(total):
                                best[i] = cand[i]
    return tuple(best[i] for i in range(total))
