"""Edge-labeled directed multigraph storage, ingestion, and synthetic generators."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import EmptyGraph, InfeasibleGraph, ParseError
from .rng import Xoshiro256StarStar, ZipfSampler


class Graph:
    """Immutable-after-construction digraph with dense vertex and label ids.

    Adjacency is kept twice: flat per-vertex lists of (neighbor, label) sorted
    by (neighbor, label), and per-vertex maps label -> neighbor list for the
    guided traversals.  Every edge appears exactly once on each side.
    """

    __slots__ = (
        "n",
        "num_edges",
        "out_adj",
        "in_adj",
        "out_by_label",
        "in_by_label",
        "vertex_names",
        "vertex_ids",
        "label_names",
        "label_ids",
        "header_comments",
    )

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, int]],
        vertex_names: list[str],
        label_names: list[str],
        header_comments: tuple[str, ...] = (),
    ):
        self.n = n
        self.vertex_names = vertex_names
        self.label_names = label_names
        self.vertex_ids = {name: i for i, name in enumerate(vertex_names)}
        self.label_ids = {name: i for i, name in enumerate(label_names)}
        self.header_comments = header_comments

        out_adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        in_adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        count = 0
        for u, v, lab in edges:
            out_adj[u].append((v, lab))
            in_adj[v].append((u, lab))
            count += 1
        self.num_edges = count
        for lst in out_adj:
            lst.sort()
        for lst in in_adj:
            lst.sort()
        self.out_adj = out_adj
        self.in_adj = in_adj
        self.out_by_label = [_group_by_label(lst) for lst in out_adj]
        self.in_by_label = [_group_by_label(lst) for lst in in_adj]

    @property
    def num_labels(self) -> int:
        return len(self.label_names)

    def vertex_id(self, name: str) -> int:
        from .errors import NotFound

        try:
            return self.vertex_ids[name]
        except KeyError:
            raise NotFound(f"unknown vertex {name!r}") from None

    def label_id(self, name: str) -> int:
        from .errors import NotFound

        try:
            return self.label_ids[name]
        except KeyError:
            raise NotFound(f"unknown label {name!r}") from None

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for u, lst in enumerate(self.out_adj):
            for v, lab in lst:
                yield u, v, lab


def _group_by_label(adj: list[tuple[int, int]]) -> dict[int, list[int]]:
    grouped: dict[int, list[int]] = {}
    for v, lab in adj:
        grouped.setdefault(lab, []).append(v)
    return grouped


@dataclass(frozen=True)
class VertexOrder:
    """Bijection between vertices and their 1-based processing ranks."""

    aid: tuple  # aid[vertex] = rank in 1..n
    inverse: tuple  # inverse[rank-1] = vertex

    @property
    def n(self) -> int:
        return len(self.aid)


def from_triples(
    triples: Iterable[tuple[str, str, str]], header_comments: tuple[str, ...] = ()
) -> Graph:
    """Build a graph from (src, dst, label) name triples.

    Names are interned to dense ids in first-seen order; exact duplicate
    triples collapse to a single edge, parallel edges with distinct labels
    and self-loops are kept.
    """
    vertex_names: list[str] = []
    vertex_ids: dict[str, int] = {}
    label_names: list[str] = []
    label_ids: dict[str, int] = {}
    seen: set[tuple[int, int, int]] = set()
    edges: list[tuple[int, int, int]] = []

    def intern_vertex(name: str) -> int:
        i = vertex_ids.get(name)
        if i is None:
            i = len(vertex_names)
            vertex_ids[name] = i
            vertex_names.append(name)
        return i

    for src, dst, label in triples:
        u = intern_vertex(src)
        v = intern_vertex(dst)
        lab = label_ids.get(label)
        if lab is None:
            lab = len(label_names)
            label_ids[label] = lab
            label_names.append(label)
        edge = (u, v, lab)
        if edge not in seen:
            seen.add(edge)
            edges.append(edge)
    return Graph(len(vertex_names), edges, vertex_names, label_names, header_comments)


def load_edge_list(stream: TextIO | str) -> Graph:
    """Parse "<src> <dst> <label>" lines; '#' starts a comment line.

    External ids become dense internal ids in first-seen order.  Raises
    ParseError with the offending line number, or EmptyGraph when no edge
    line is present.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    triples: list[tuple[str, str, str]] = []
    comments: list[str] = []
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(
                f"expected '<src> <dst> <label>', got {line!r}", line_number=line_no
            )
        triples.append((parts[0], parts[1], parts[2]))
    if not triples:
        raise EmptyGraph("edge list contains no edges")
    return from_triples(triples, header_comments=tuple(comments))


def dump_edge_list(g: Graph, stream: TextIO) -> None:
    """Write the graph in the load_edge_list format, sorted by internal ids."""
    stream.write(f"# n={g.n} edges={g.num_edges} labels={g.num_labels}\n")
    for comment in g.header_comments:
        if comment.startswith("# n="):
            continue  # regenerated above; keeps load/dump cycles stable
        stream.write(comment + "\n")
    names = g.vertex_names
    labels = g.label_names
    for u in range(g.n):
        for v, lab in g.out_adj[u]:
            stream.write(f"{names[u]} {names[v]} {labels[lab]}\n")


def edge_list_bytes(g: Graph) -> bytes:
    buf = io.StringIO()
    dump_edge_list(g, buf)
    return buf.getvalue().encode("utf-8")


def in_out_order(g: Graph) -> VertexOrder:
    """Rank vertices by descending (out_degree+1)*(in_degree+1), ties by id.

    Degrees count parallel labeled edges.  Smaller rank means the vertex is
    processed earlier and preferred as an intermediate hop.
    """
    scores = sorted(
        range(g.n),
        key=lambda v: (-(len(g.out_adj[v]) + 1) * (len(g.in_adj[v]) + 1), v),
    )
    aid = [0] * g.n
    for rank, v in enumerate(scores, start=1):
        aid[v] = rank
    return VertexOrder(aid=tuple(aid), inverse=tuple(scores))


def graph_stats(g: Graph) -> dict:
    """Vertex/edge/label counts plus self-loop and directed-triangle counts."""
    loops = 0
    out_sets: list[set[int]] = [set() for _ in range(g.n)]
    for u, v, _lab in g.edges():
        if u == v:
            loops += 1
        else:
            out_sets[u].add(v)
    triangles = 0
    for u in range(g.n):
        for v in out_sets[u]:
            sv = out_sets[v]
            for w in sv:
                if w != u and u in out_sets[w]:
                    triangles += 1
    return {
        "vertices": g.n,
        "edges": g.num_edges,
        "labels": g.num_labels,
        "self_loops": loops,
        "triangles": triangles // 3,
    }


def _label_name_table(num_labels: int) -> list[str]:
    return [f"l{r}" for r in range(1, num_labels + 1)]


def generate_er(
    n: int, avg_deg: float, num_labels: int, zipf_s: float, seed: int
) -> Graph:
    """Uniform random digraph with round(n*avg_deg) edges and Zipfian labels.

    Vertex pairs are drawn uniformly over ordered pairs (self-loops allowed);
    a duplicate (src, dst, label) triple is re-sampled.  Deterministic for a
    fixed seed.
    """
    if n < 1 or num_labels < 1:
        raise InfeasibleGraph("need at least one vertex and one label")
    m = round(n * avg_deg)
    if m > n * n * num_labels:
        raise InfeasibleGraph(
            f"{m} edges requested but only {n * n * num_labels} distinct triples exist"
        )
    rng = Xoshiro256StarStar(seed)
    zipf = ZipfSampler(num_labels, zipf_s)
    seen: set[tuple[int, int, int]] = set()
    edges: list[tuple[int, int, int]] = []
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        lab = zipf.sample(rng) - 1
        triple = (u, v, lab)
        if triple in seen:
            continue
        seen.add(triple)
        edges.append(triple)
    header = (
        f"# generator=er n={n} avg_deg={avg_deg} labels={num_labels}"
        f" zipf={zipf_s} seed={seed}",
    )
    return Graph(
        n, edges, [str(i) for i in range(n)], _label_name_table(num_labels), header
    )


def generate_ba(
    n: int, attach_m: int, num_labels: int, zipf_s: float, seed: int
) -> Graph:
    """Preferential-attachment digraph: complete seed clique, then m out-edges per vertex.

    The seed is a complete digraph on attach_m+1 vertices (both directions, no
    self-loops).  Every later vertex attaches attach_m out-edges to distinct
    earlier vertices chosen proportionally to total degree.  Labels follow the
    same Zipfian draw as generate_er.
    """
    if attach_m < 1:
        raise InfeasibleGraph("attach_m must be at least 1")
    if n <= attach_m:
        raise InfeasibleGraph("need n > attach_m")
    rng = Xoshiro256StarStar(seed)
    zipf = ZipfSampler(num_labels, zipf_s)
    edges: list[tuple[int, int, int]] = []
    # repeated-vertex pool: one entry per unit of total degree
    pool: list[int] = []
    clique = attach_m + 1
    for u in range(clique):
        for v in range(clique):
            if u != v:
                edges.append((u, v, zipf.sample(rng) - 1))
                pool.append(u)
                pool.append(v)
    for v in range(clique, n):
        targets: list[int] = []
        chosen: set[int] = set()
        while len(targets) < attach_m:
            t = pool[rng.randrange(len(pool))]
            if t in chosen:
                continue
            chosen.add(t)
            targets.append(t)
        for t in targets:
            edges.append((v, t, zipf.sample(rng) - 1))
        # append after selecting all targets so a vertex never attaches to itself
        for t in targets:
            pool.append(v)
            pool.append(t)
    header = (
        f"# generator=ba n={n} attach_m={attach_m} labels={num_labels}"
        f" zipf={zipf_s} seed={seed}",
    )
    return Graph(
        n, edges, [str(i) for i in range(n)], _label_name_table(num_labels), header
    )
