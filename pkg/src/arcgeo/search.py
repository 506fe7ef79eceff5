"""Exhaustive search for blocked arcs, reduced up to projectivities.

With canonical-frame reduction the first four arc points are pinned to the
standard frame (every 4-arc is equivalent to it), remaining points are added
in increasing index order, and found configurations are deduplicated by a
canonical key, so the report lists one representative per projective class.
Budgets are enforced per root subtree, which keeps reports independent of the
degree of parallelism.
"""

from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass, field

from . import kernel
from .arcs import ArcConfig, is_arc, verify_gha
from .fields import field_from_order
from .incidence import plane_index

FRAME_REDUCTION = "canonical-frame"
MODES = ("gha", "hyperfocused")
REDUCTIONS = (FRAME_REDUCTION, "none")
DEFAULT_NODE_BUDGET = 10**9


def max_arc_size(spec):
    """Largest k for which k-arcs exist: q+1 for odd q, q+2 for even q."""
    return spec.order + 2 if spec.p == 2 else spec.order + 1


@dataclass(frozen=True)
class SearchTask:
    """Parameters of one search run."""

    order: int
    k: int
    mode: str = "gha"
    reduction: str = FRAME_REDUCTION
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.reduction not in REDUCTIONS:
            raise ValueError(f"reduction must be one of {REDUCTIONS}, got {self.reduction!r}")
        if self.k < 4 or self.k % 2:
            raise ValueError(f"search target size must be even and >= 4, got {self.k}")
        if self.k > 12:
            raise ValueError("searches beyond k = 12 are out of scope")
        if self.node_budget <= 0:
            raise ValueError("node budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time budget must be positive")

    def to_json_dict(self):
        return {
            "q": self.order,
            "k": self.k,
            "mode": self.mode,
            "reduction": self.reduction,
            "node_budget": self.node_budget,
            "time_budget": self.time_budget,
        }


@dataclass
class SearchReport:
    """Outcome of run_search: class representatives plus counters."""

    task: SearchTask
    classes: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    exhaustive: bool = True

    def to_json_dict(self):
        return {
            "task": self.task.to_json_dict(),
            "classes": [
                {**cfg.to_json_dict(), "certificate": cfg.certificate_json()}
                for cfg in self.classes
            ],
            "counts": self.counts,
            "exhaustive": self.exhaustive,
        }


def _check_k(spec, k, reduction):
    bound = max_arc_size(spec)
    if k > bound:
        raise ValueError(f"no {k}-arcs in PG(2,{spec.order}): the bound is {bound}")
    if k > 12:
        raise ValueError("searches beyond k = 12 are out of scope")
    if reduction == FRAME_REDUCTION and k < 4:
        raise ValueError("frame reduction needs k >= 4")


def _root_candidates(idx, prefix):
    """Legal first extension points of the prefix, in increasing index order."""
    py = idx.py
    forbidden = 0
    for t, c in enumerate(prefix):
        for a in prefix[:t]:
            forbidden |= py["line_point_mask"][py["pair_line"][c][a]]
    out = []
    for p in range(idx.n):
        if p in prefix:
            continue
        if not (forbidden >> p) & 1:
            out.append(p)
    return out


_WORKER_STATE = {}


def _worker_init(order):
    _WORKER_STATE["idx"] = plane_index(field_from_order(order))


def _worker_run(args):
    prefix, k, collect, node_budget, time_budget, min_next = args
    idx = _WORKER_STATE["idx"]
    deadline = None if time_budget is None else time.monotonic() + time_budget
    return kernel.search_completions(
        idx, prefix, k, collect=collect, node_budget=node_budget, deadline=deadline,
        min_next=min_next,
    )


def _run_subtrees(idx, subtrees, k, collect, node_budget, time_budget, jobs):
    args = [(prefix, k, collect, node_budget, time_budget, min_next)
            for prefix, min_next in subtrees]
    if jobs <= 1 or len(args) <= 1:
        _worker_init(idx.spec.order)
        return [_worker_run(a) for a in args]
    with multiprocessing.Pool(
        processes=min(jobs, len(args)),
        initializer=_worker_init,
        initargs=(idx.spec.order,),
    ) as pool:
        return pool.map(_worker_run, args)


def _blacks_collinear(idx, blacks):
    if len(blacks) <= 2:
        return True
    py = idx.py
    line = py["pair_line"][blacks[0]][blacks[1]]
    mask = py["line_point_mask"][line]
    return all((mask >> b) & 1 for b in blacks[2:])


def enumerate_arcs(spec, k, reduction=FRAME_REDUCTION):
    """All k-arcs as point tuples: one per arc set, frame-pinned when reduced.

    With reduction, only arcs containing the standard frame are produced
    (at least one per projective class); with "none", every k-arc appears
    exactly once.
    """
    if reduction not in REDUCTIONS:
        raise ValueError(f"reduction must be one of {REDUCTIONS}")
    if k < 1:
        raise ValueError("arc size must be positive")
    _check_k(spec, k, reduction)
    idx = plane_index(spec)
    prefix = idx.frame if reduction == FRAME_REDUCTION else ()
    res = kernel.search_completions(idx, prefix, k, collect="arcs")
    for arc in res["arcs"]:
        yield tuple(idx.point_at(i) for i in arc)


def complete_blockers(white):
    """Every blocking set turning the given arc into a verified configuration."""
    white = tuple(white)
    k = len(white)
    if k < 2 or k % 2:
        raise ValueError("blocker completion needs an arc of even size >= 2")
    if not is_arc(white):
        raise ValueError("white set is not an arc")
    spec = white[0].spec
    idx = plane_index(spec)
    indices = tuple(sorted(idx.index_of_point(p) for p in white))
    res = kernel.search_completions(idx, indices, k, collect="solutions")
    return [tuple(idx.point_at(i) for i in blacks) for _, blacks in res["solutions"]]


def run_search(task, jobs=1):
    """Enumerate arcs, complete blockers, deduplicate by canonical key."""
    spec = field_from_order(task.order)
    _check_k(spec, task.k, task.reduction)
    idx = plane_index(spec)
    prefix = idx.frame if task.reduction == FRAME_REDUCTION else ()

    if len(prefix) == task.k:
        subtrees = [(tuple(prefix), -1)]
    else:
        subtrees = [(tuple(prefix) + (c,), c) for c in _root_candidates(idx, prefix)]

    results = _run_subtrees(
        idx, subtrees, task.k, "solutions", task.node_budget, task.time_budget, jobs
    )

    counts = {
        "arcs_enumerated": 0,
        "completions_attempted": 0,
        "nodes": 0,
        "pruned": 0,
        "solutions": 0,
    }
    exhaustive = True
    by_key = {}
    for res in results:
        for name in ("arcs_enumerated", "completions_attempted", "nodes", "pruned"):
            counts[name] += res[name]
        exhaustive = exhaustive and not res["budget_hit"]
        for white, blacks in res["solutions"]:
            if task.mode == "hyperfocused" and not _blacks_collinear(idx, blacks):
                continue
            counts["solutions"] += 1
            key = kernel.canonical_arc_key(idx, white, blacks)
            by_key.setdefault(key, (white, blacks))

    classes = []
    for key in sorted(by_key):
        white, blacks = by_key[key]
        cfg = verify_gha(
            tuple(idx.point_at(i) for i in white),
            tuple(idx.point_at(i) for i in blacks),
        )
        classes.append(cfg)
    counts["classes"] = len(classes)
    return SearchReport(task=task, classes=classes, counts=counts, exhaustive=exhaustive)


def canonical_class_key(cfg):
    """Canonical projectivity-class key of a verified configuration."""
    idx = plane_index(cfg.spec)
    white = tuple(idx.index_of_point(p) for p in cfg.white)
    black = tuple(idx.index_of_point(p) for p in cfg.black)
    return kernel.canonical_arc_key(idx, white, black)
