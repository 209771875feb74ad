"""Reference evaluators: online traversals and the extended transitive closure.

These serve both as benchmark baselines and as correctness oracles for the
index.  The constraint automaton for "one or more repetitions of L" is just
a cycle over the positions of L, so traversal states are (vertex, position)
pairs packed as vertex * len(L) + position.
"""

from __future__ import annotations

from collections import deque

from .errors import (
    CandidateSpaceTooLarge,
    IndexBuildFailure,
    NonPrimitiveConstraint,
    NotFound,
    StepLimitExceeded,
    UnsupportedConstraint,
)
from .graph import Graph
from .labelseq import LabelSeq, is_primitive, primitive_sequences
from .builder import FORWARD, kernel_bfs, kernel_search
from .index import MrDictionary


def _validate_constraint(g: Graph, s: int, t: int, constraint: LabelSeq) -> None:
    if not (0 <= s < g.n) or not (0 <= t < g.n):
        raise NotFound(f"vertex out of range for graph with {g.n} vertices")
    if not constraint:
        raise NonPrimitiveConstraint("constraint must be nonempty")
    for lab in constraint:
        if not (0 <= lab < g.num_labels):
            raise NotFound(f"label id {lab} out of range")
    if not is_primitive(constraint):
        raise NonPrimitiveConstraint("constraint must equal its own minimum repeat")


def nfa_bfs(g: Graph, s: int, t: int, constraint: LabelSeq, stats: dict | None = None) -> bool:
    """Forward product-state BFS; True iff (t, position 0) is reached via >= 1 edge."""
    _validate_constraint(g, s, t, constraint)
    m = len(constraint)
    out_by = g.out_by_label
    visited = {s * m}
    queue = deque(visited)
    expansions = 0
    while queue:
        state = queue.popleft()
        x, p = divmod(state, m)
        neighbors = out_by[x].get(constraint[p])
        expansions += 1
        if not neighbors:
            continue
        p2 = p + 1
        if p2 == m:
            p2 = 0
        for y in neighbors:
            if p2 == 0 and y == t:
                if stats is not None:
                    stats["expansions"] = expansions
                    stats["visited"] = len(visited)
                return True
            state2 = y * m + p2
            if state2 not in visited:
                visited.add(state2)
                queue.append(state2)
    if stats is not None:
        stats["expansions"] = expansions
        stats["visited"] = len(visited)
    return False


def nfa_reachable_set(g: Graph, s: int, constraint: LabelSeq) -> set[int]:
    """All t with nfa_bfs(g, s, t, constraint) True, from one product BFS."""
    if not constraint or not is_primitive(constraint):
        raise NonPrimitiveConstraint("constraint must be nonempty and primitive")
    m = len(constraint)
    out_by = g.out_by_label
    visited = {s * m}
    queue = deque(visited)
    reached: set[int] = set()
    while queue:
        state = queue.popleft()
        x, p = divmod(state, m)
        neighbors = out_by[x].get(constraint[p])
        if not neighbors:
            continue
        p2 = p + 1
        if p2 == m:
            p2 = 0
        for y in neighbors:
            state2 = y * m + p2
            if p2 == 0:
                reached.add(y)
            if state2 not in visited:
                visited.add(state2)
                queue.append(state2)
    return reached


def bibfs(
    g: Graph, s: int, t: int, constraint: LabelSeq, step_cap: int | None = None
) -> bool:
    """Bidirectional variant of nfa_bfs; always returns the same answer.

    The forward search consumes the constraint from the front, the backward
    search from the end.  Generating a state (v, p) on either side meets the
    other side exactly when the other side holds (v, (m - p) % m): the two
    position counts then add up to whole repetitions, and at least one edge
    has been consumed because initial states are never re-generated as a
    pair.  Expansion goes to the smaller frontier; step_cap bounds the total
    number of state expansions (StepLimitExceeded beyond it).
    """
    _validate_constraint(g, s, t, constraint)
    m = len(constraint)
    out_by = g.out_by_label
    in_by = g.in_by_label
    f_need = list(constraint)
    b_need = [constraint[m - 1 - r] for r in range(m)]

    f_set = {s * m}
    b_set = {t * m}
    f_frontier = [s * m]
    b_frontier = [t * m]
    steps = 0
    while f_frontier or b_frontier:
        forward = bool(f_frontier) and (
            not b_frontier or len(f_frontier) <= len(b_frontier)
        )
        if forward:
            mine, other = f_set, b_set
            adj_by, need = out_by, f_need
            frontier = f_frontier
        else:
            mine, other = b_set, f_set
            adj_by, need = in_by, b_need
            frontier = b_frontier
        nxt: list[int] = []
        for state in frontier:
            steps += 1
            if step_cap is not None and steps > step_cap:
                raise StepLimitExceeded(f"bidirectional search exceeded {step_cap} steps")
            x, p = divmod(state, m)
            neighbors = adj_by[x].get(need[p])
            if not neighbors:
                continue
            p2 = p + 1
            if p2 == m:
                p2 = 0
            complement = (m - p2) % m
            for y in neighbors:
                if y * m + complement in other:
                    return True
                state2 = y * m + p2
                if state2 not in mine:
                    mine.add(state2)
                    nxt.append(state2)
        if forward:
            f_frontier = nxt
        else:
            b_frontier = nxt
    return False


class EtcIndex:
    """Per-pair materialization of every bounded minimum repeat."""

    __slots__ = ("k", "n", "dict", "cells")

    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        self.dict = MrDictionary()
        # cells[s] maps target -> set of mr ids
        self.cells: list[dict[int, set[int]]] = [{} for _ in range(n)]


def build_etc(g: Graph, k: int) -> EtcIndex:
    """Forward kernel-based search from each vertex with unconditional recording.

    No pruning rules apply; guided traversals stop only on already-visited
    residual states, so the result is the exact set of bounded minimum
    repeats for every reachable pair.
    """
    if k < 1:
        raise ValueError("k must be positive")
    etc = EtcIndex(k, g.n)
    intern = etc.dict.intern
    try:
        for s in range(g.n):
            row = etc.cells[s]

            def record(y: int, seq: LabelSeq) -> bool:
                mr_id = intern(seq)
                cell = row.get(y)
                if cell is None:
                    row[y] = {mr_id}
                else:
                    cell.add(mr_id)
                return True

            candidates = kernel_search(g, s, k, FORWARD, record)
            for kernel, frontier in candidates.items():
                kernel_bfs(g, s, kernel, frontier, FORWARD, record, prune_on_reject=False)
    except MemoryError:
        raise IndexBuildFailure(
            "out of memory while materializing the transitive closure",
            processed=s,
            total=g.n,
        ) from None
    return etc


def etc_query(etc: EtcIndex, s: int, t: int, constraint: LabelSeq) -> bool:
    """True iff the (s, t) cell holds the constraint's minimum-repeat id."""
    if not (0 <= s < etc.n) or not (0 <= t < etc.n):
        raise NotFound(f"vertex out of range for closure over {etc.n} vertices")
    if not constraint:
        raise NonPrimitiveConstraint("constraint must be nonempty")
    if len(constraint) > etc.k:
        raise UnsupportedConstraint(
            f"constraint length {len(constraint)} exceeds closure k={etc.k}"
        )
    if not is_primitive(constraint):
        raise NonPrimitiveConstraint("constraint must equal its own minimum repeat")
    mr_id = etc.dict.get(tuple(constraint))
    if mr_id is None:
        return False
    cell = etc.cells[s].get(t)
    return cell is not None and mr_id in cell


def oracle_concise_set(g: Graph, s: int, t: int, k: int, guard: int = 10**6) -> set:
    """Sweep every primitive constraint up to length k with nfa_bfs."""
    if k < 1:
        raise ValueError("k must be positive")
    candidates = sum(g.num_labels**i for i in range(1, k + 1))
    if candidates > guard:
        raise CandidateSpaceTooLarge(
            f"{candidates} candidate sequences exceed the guard of {guard}"
        )
    if not (0 <= s < g.n) or not (0 <= t < g.n):
        raise NotFound(f"vertex out of range for graph with {g.n} vertices")
    return {
        seq
        for seq in primitive_sequences(g.num_labels, k)
        if nfa_bfs(g, s, t, seq)
    }
