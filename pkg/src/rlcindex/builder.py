"""Index construction: per-vertex kernel-based searches with pruning.

Vertices are processed in ascending rank (see graph.in_out_order).  For each
vertex a backward pass creates l_out entries at the vertices it can be
reached from, then a forward pass creates l_in entries at the vertices it
reaches.  Each pass has two phases:

  1. kernel_search enumerates every path of length 1..k from the origin,
     attempts an index entry for the path's minimum repeat at each reached
     vertex, and collects (minimum repeat -> endpoint set) as kernel
     candidates.  Insert outcomes do not influence this phase.
  2. kernel_bfs extends each candidate under "one or more repetitions of the
     kernel": endpoints resume at residual 0 (a whole number of repetitions
     consumed) and every later arrival at residual 0 attempts an entry.

Pruning: an entry is skipped when the origin ranks below the visited vertex
(PR2) or when the current index snapshot already answers the corresponding
query (PR1); when either fires during kernel_bfs, the arrival is marked
visited but not expanded further (PR3).  Insert order therefore matters, so
builds are strictly single-threaded.
"""

from __future__ import annotations

import logging
from bisect import insort
from collections import deque
from typing import Callable

from .errors import IndexBuildFailure
from .graph import Graph, in_out_order
from .index import RlcIndex
from .labelseq import LabelSeq, minimum_repeat

log = logging.getLogger("rlcindex.builder")

BACKWARD = "backward"
FORWARD = "forward"

# sink(vertex, primitive_seq) -> bool; False means the entry was rejected
Sink = Callable[[int, LabelSeq], bool]


def _minimum_repeat_short(seq: LabelSeq) -> LabelSeq:
    # build-time fast path; sequences here have length <= k which is tiny
    n = len(seq)
    if n == 1:
        return seq
    if n == 2:
        return seq[:1] if seq[0] == seq[1] else seq
    return minimum_repeat(seq)


def empty_index(g: Graph, k: int) -> RlcIndex:
    return RlcIndex.empty(g, k)


def try_insert(
    idx: RlcIndex, visited: int, origin: int, seq: LabelSeq, direction: str
) -> bool:
    """Attempt the entry (origin, seq) at the visited vertex.

    Backward searches record into l_out[visited], forward ones into
    l_in[visited].  Returns False when PR2 or PR1 rejects (a duplicate entry
    shows up as PR1, since the snapshot already answers the query).
    """
    aid = idx.order.aid
    origin_aid = aid[origin]
    if origin_aid > aid[visited]:
        return False  # PR2
    mr_id = idx.dict.get(seq)
    if direction == BACKWARD:
        target = idx.l_out[visited]
        s, t = visited, origin
    else:
        target = idx.l_in[visited]
        s, t = origin, visited
    if mr_id is not None and idx.query_ids(s, t, mr_id):
        return False  # PR1
    if mr_id is None:
        mr_id = idx.dict.intern(seq)
    insort(target, (origin_aid << 32) | mr_id)
    return True


def kernel_search(
    g: Graph, origin: int, k: int, direction: str, sink: Sink
) -> dict[LabelSeq, dict[int, None]]:
    """Enumerate paths of length 1..k from origin; return kernel candidates.

    Backward walks in-edges prepending labels, forward walks out-edges
    appending them.  For every newly reached (vertex, sequence) pair the sink
    is offered the sequence's minimum repeat (outcome ignored here) and the
    path endpoint joins that repeat's frontier.  Frontiers preserve first-seen
    order; (vertex, sequence) pairs are visited once.
    """
    backward = direction == BACKWARD
    adj = g.in_adj if backward else g.out_adj
    candidates: dict[LabelSeq, dict[int, None]] = {}
    current: list[tuple[int, LabelSeq]] = [(origin, ())]
    seen: set[tuple[int, LabelSeq]] = set()
    for _depth in range(k):
        nxt: list[tuple[int, LabelSeq]] = []
        for x, seq in current:
            for y, lab in adj[x]:
                seq2 = (lab,) + seq if backward else seq + (lab,)
                state = (y, seq2)
                if state in seen:
                    continue
                seen.add(state)
                mr = _minimum_repeat_short(seq2)
                sink(y, mr)
                frontier = candidates.get(mr)
                if frontier is None:
                    candidates[mr] = frontier = {}
                frontier[y] = None
                nxt.append(state)
        current = nxt
    return candidates


def kernel_bfs(
    g: Graph,
    origin: int,
    kernel: LabelSeq,
    frontier,
    direction: str,
    sink: Sink,
    prune_on_reject: bool = True,
) -> None:
    """Guided BFS under one-or-more repetitions of the kernel.

    Residual r means r labels of the current repetition are already consumed.
    Frontier vertices start visited at residual 0 and are not re-offered to
    the sink (their entries were attempted during kernel_search).  Arrivals
    at residual 0 attempt an entry; with prune_on_reject a rejection marks
    the vertex visited without expanding it further.
    """
    m = len(kernel)
    backward = direction == BACKWARD
    if backward:
        adj_by = g.in_by_label
        need = [kernel[m - 1 - r] for r in range(m)]
    else:
        adj_by = g.out_by_label
        need = list(kernel)
    visited: set[int] = set()
    queue: deque[int] = deque()
    for x in frontier:
        state = x * m
        visited.add(state)
        queue.append(state)
    while queue:
        state = queue.popleft()
        x, r = divmod(state, m)
        neighbors = adj_by[x].get(need[r])
        if not neighbors:
            continue
        r2 = r + 1
        if r2 == m:
            r2 = 0
        for y in neighbors:
            state2 = y * m + r2
            if state2 in visited:
                continue
            if r2 == 0 and not sink(y, kernel) and prune_on_reject:
                visited.add(state2)  # PR3: keep it closed, do not expand
                continue
            visited.add(state2)
            queue.append(state2)


def run_kbs(
    g: Graph, idx: RlcIndex, origin: int, k: int, direction: str, sink: Sink | None = None
) -> None:
    """One full kernel-based search from origin in the given direction."""
    if sink is None:
        def sink(y: int, seq: LabelSeq) -> bool:
            return try_insert(idx, y, origin, seq, direction)

    candidates = kernel_search(g, origin, k, direction, sink)
    for kernel, frontier in candidates.items():
        kernel_bfs(g, origin, kernel, frontier, direction, sink)


def build_index(g: Graph, k: int) -> RlcIndex:
    """Build the full index for the graph with recursion bound k."""
    if k < 1:
        raise ValueError("k must be positive")
    order = in_out_order(g)
    idx = RlcIndex(k, order, list(g.vertex_names), list(g.label_names))
    report_every = max(1, g.n // 20)
    processed = 0
    try:
        for origin in order.inverse:
            run_kbs(g, idx, origin, k, BACKWARD)
            run_kbs(g, idx, origin, k, FORWARD)
            processed += 1
            if processed % report_every == 0:
                log.info("indexed %d/%d vertices", processed, g.n)
    except MemoryError:
        raise IndexBuildFailure(
            "out of memory while indexing", processed=processed, total=g.n
        ) from None
    return idx
