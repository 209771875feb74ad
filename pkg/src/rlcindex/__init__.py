"""Reachability indexing for repeated-label-concatenation path queries."""

from .baselines import (
    EtcIndex,
    bibfs,
    build_etc,
    etc_query,
    nfa_bfs,
    oracle_concise_set,
)
from .builder import build_index, empty_index, kernel_bfs, kernel_search, run_kbs, try_insert
from .graph import (
    Graph,
    VertexOrder,
    dump_edge_list,
    from_triples,
    generate_ba,
    generate_er,
    graph_stats,
    in_out_order,
    load_edge_list,
)
from .index import (
    MrDictionary,
    RlcIndex,
    concise_set,
    condensedness_violations,
    deserialize,
    index_stats,
    is_condensed,
    query,
    query_star,
    serialize,
)
from .labelseq import (
    KernelDecomposition,
    is_primitive,
    k_mr,
    kernel_decompose,
    minimum_repeat,
    primitive_count,
    primitive_sequences,
)
from .workload import (
    BenchReport,
    VerificationReport,
    Workload,
    generate_workload,
    load_workload,
    run_bench,
    save_workload,
    verify_equivalence,
)

__all__ = [
    "BenchReport",
    "EtcIndex",
    "Graph",
    "KernelDecomposition",
    "MrDictionary",
    "RlcIndex",
    "VerificationReport",
    "VertexOrder",
    "Workload",
    "bibfs",
    "build_etc",
    "build_index",
    "concise_set",
    "condensedness_violations",
    "deserialize",
    "dump_edge_list",
    "empty_index",
    "etc_query",
    "from_triples",
    "generate_ba",
    "generate_er",
    "generate_workload",
    "graph_stats",
    "in_out_order",
    "index_stats",
    "is_condensed",
    "is_primitive",
    "k_mr",
    "kernel_bfs",
    "kernel_decompose",
    "kernel_search",
    "load_edge_list",
    "load_workload",
    "minimum_repeat",
    "nfa_bfs",
    "oracle_concise_set",
    "primitive_count",
    "primitive_sequences",
    "query",
    "query_star",
    "run_bench",
    "run_kbs",
    "save_workload",
    "serialize",
    "try_insert",
    "verify_equivalence",
]
