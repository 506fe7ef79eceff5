"""Pure-Python search kernel: bitmask DFS over precomputed incidence tables.

Reference implementation of the hot search loops; the compiled kernel in
_kernel_cy implements the identical algorithm, so both produce byte-identical
solutions and statistics.  Point/line sets are arbitrary-precision Python ints
used as bitmasks.

Algorithm: arcs are grown one point at a time in increasing index order (after
an optional fixed prefix).  A point is a legal extension iff it avoids every
line through two current arc points, maintained as a forbidden-point bitmask.
A complete arc is handed to an exact-cover search: candidate blockers are the
points on at least one secant that lie on exactly k/2 secants (the counting
bound), each must cover its secants exactly once, branching on the secant with
fewest remaining candidates.
"""

from itertools import permutations

KERNEL_NAME = "python"


def search_completions(idx, prefix, k, collect="solutions", node_budget=10**9, deadline=None,
                       min_next=-1):
    """DFS over k-arcs extending prefix; completes each to blocked configurations.

    Extensions are taken in increasing index order above min_next (used by the
    driver when it splits the root level into subtrees).  Returns a dict with
    keys: solutions [(white, black) index tuples] or arcs, arcs_enumerated,
    completions_attempted, nodes, pruned, budget_hit.
    """
    import time

    py = idx.py
    pair_line = py["pair_line"]
    plm = py["point_line_mask"]
    lpm = py["line_point_mask"]
    n = idx.n
    all_mask = (1 << n) - 1

    prefix = list(prefix)
    arc = list(prefix)
    arc_bits = 0
    secants = []
    forbidden = 0
    for t, c in enumerate(prefix):
        arc_bits |= 1 << c
        for a in prefix[:t]:
            ln = pair_line[c][a]
            secants.append(ln)
            forbidden |= lpm[ln]
    cand = all_mask & ~forbidden & ~arc_bits
    if min_next >= 0:
        cand &= ~((1 << (min_next + 1)) - 1)

    solutions = []
    arcs_out = []
    stats = {
        "arcs_enumerated": 0,
        "completions_attempted": 0,
        "nodes": 0,
        "pruned": 0,
        "budget_hit": False,
    }
    monotonic = time.monotonic

    def over_budget():
        stats["nodes"] += 1
        if stats["nodes"] > node_budget:
            stats["budget_hit"] = True
            return True
        if deadline is not None and monotonic() > deadline:
            stats["budget_hit"] = True
            return True
        return False

    def complete(white):
        stats["arcs_enumerated"] += 1
        if collect == "arcs":
            arcs_out.append(tuple(white))
            return
        stats["completions_attempted"] += 1
        kk = len(white)
        half = kk >> 1
        smask = 0
        pos_of = {}
        for i, ln in enumerate(secants):
            smask |= 1 << ln
            pos_of[ln] = i
        nsec = len(secants)
        full = (1 << nsec) - 1
        cand_cover = []
        pool = forbidden_stack[-1] & ~arc_bits
        while pool:
            low = pool & (-pool)
            pool ^= low
            p = low.bit_length() - 1
            hit = plm[p] & smask
            cnt = hit.bit_count()
            if kk > 2 and cnt != half:
                continue
            cover = 0
            while hit:
                lb = hit & (-hit)
                hit ^= lb
                cover |= 1 << pos_of[lb.bit_length() - 1]
            cand_cover.append((p, cover))
        by_pos = [[] for _ in range(nsec)]
        for ci, (_, cover) in enumerate(cand_cover):
            m = cover
            while m:
                lb = m & (-m)
                m ^= lb
                by_pos[lb.bit_length() - 1].append(ci)
        chosen = []

        def cover_dfs(covered):
            if over_budget():
                return
            if covered == full:
                solutions.append(
                    (tuple(white), tuple(sorted(cand_cover[ci][0] for ci in chosen)))
                )
                return
            best_pos, best_avail = -1, None
            m = full & ~covered
            while m:
                lb = m & (-m)
                m ^= lb
                pos = lb.bit_length() - 1
                avail = [ci for ci in by_pos[pos] if not cand_cover[ci][1] & covered]
                if best_avail is None or len(avail) < len(best_avail):
                    best_pos, best_avail = pos, avail
                    if not avail:
                        return
            _ = best_pos
            for ci in best_avail:
                chosen.append(ci)
                cover_dfs(covered | cand_cover[ci][1])
                chosen.pop()
                if stats["budget_hit"]:
                    return

        cover_dfs(0)

    forbidden_stack = [forbidden]

    def extend(cand_mask):
        nonlocal arc_bits
        if over_budget():
            return
        if len(arc) == k:
            complete(arc)
            return
        need = k - len(arc) - 1
        m = cand_mask
        while m:
            low = m & (-m)
            m ^= low
            c = low.bit_length() - 1
            new_forbid = 0
            new_lines = []
            for a in arc:
                ln = pair_line[c][a]
                new_lines.append(ln)
                new_forbid |= lpm[ln]
            next_cand = m & ~new_forbid
            stats["pruned"] += (m & new_forbid).bit_count()
            if next_cand.bit_count() < need:
                continue
            arc.append(c)
            arc_bits |= 1 << c
            secants.extend(new_lines)
            forbidden_stack.append(forbidden_stack[-1] | new_forbid)
            extend(next_cand)
            forbidden_stack.pop()
            del secants[len(secants) - len(new_lines):]
            arc_bits ^= 1 << c
            arc.pop()
            if stats["budget_hit"]:
                return

    if len(arc) == k:
        if not over_budget():
            complete(arc)
    else:
        extend(cand)

    out = dict(stats)
    out["solutions"] = solutions
    out["arcs"] = arcs_out
    return out


# ---------------------------------------------------------------------------
# canonical class keys under projectivities
# ---------------------------------------------------------------------------


def canonical_arc_key(idx, white, black):
    """Canonical integer tuple identifying (white, black) up to projectivity.

    Minimizes, over all ordered 4-point subsets of the arc, the serialized
    image of the whole configuration under the projectivity taking that subset
    to the standard frame.  Two configurations get equal keys iff some
    projectivity maps one onto the other (whites to whites, blacks to blacks).
    """
    py = idx.py
    coords = py["coords"]
    add = py["add"]
    sub = py["sub"]
    mul = py["mul"]
    inv = py["inv"]
    q = idx.spec.order

    def det3(u, v, w):
        m1 = sub[mul[v[1]][w[2]]][mul[v[2]][w[1]]]
        m2 = sub[mul[v[0]][w[2]]][mul[v[2]][w[0]]]
        m3 = sub[mul[v[0]][w[1]]][mul[v[1]][w[0]]]
        return sub[add[mul[u[0]][m1]][mul[u[2]][m3]]][mul[u[1]][m2]]

    def image(mat, p):
        out = []
        for row in mat:
            acc = 0
            for r, x in zip(row, p):
                acc = add[acc][mul[r][x]]
            out.append(acc)
        for v in out:
            if v:
                s = inv[v]
                a, b, c = (mul[s][x] for x in out)
                return (a * q + b) * q + c
        raise AssertionError("projectivity sent a point to zero")

    best = None
    white_pts = [coords[i] for i in white]
    black_pts = [coords[i] for i in black]
    for quad in permutations(range(len(white)), 4):
        pa, pb, pc, pd = (white_pts[i] for i in quad)
        alpha = det3(pd, pb, pc)
        beta = det3(pa, pd, pc)
        gamma = det3(pa, pb, pd)
        u = tuple(mul[alpha][x] for x in pa)
        v = tuple(mul[beta][x] for x in pb)
        w = tuple(mul[gamma][x] for x in pc)
        # adjugate of the matrix with columns u, v, w
        mat = (
            (sub[mul[v[1]][w[2]]][mul[w[1]][v[2]]],
             sub[mul[w[0]][v[2]]][mul[v[0]][w[2]]],
             sub[mul[v[0]][w[1]]][mul[w[0]][v[1]]]),
            (sub[mul[w[1]][u[2]]][mul[u[1]][w[2]]],
             sub[mul[u[0]][w[2]]][mul[w[0]][u[2]]],
             sub[mul[w[0]][u[1]]][mul[u[0]][w[1]]]),
            (sub[mul[u[1]][v[2]]][mul[v[1]][u[2]]],
             sub[mul[v[0]][u[2]]][mul[u[0]][v[2]]],
             sub[mul[u[0]][v[1]]][mul[v[0]][u[1]]]),
        )
        cand = tuple(sorted(image(mat, p) for p in white_pts)) + (-1,) + tuple(
            sorted(image(mat, p) for p in black_pts)
        )
        if best is None or cand < best:
            best = cand
    return best
