"""The reachability index: per-vertex hub entry lists, query algorithm, serialization.

Each vertex carries two sorted lists of entries.  An entry pairs an
intermediate hub vertex with the id of a primitive label sequence (a
"minimum repeat"): (x, L) in l_out[s] certifies that s reaches x along a
path whose label sequence is one or more repetitions of L, and (x, L) in
l_in[t] certifies the same from x to t.  A query (s, t, L+) is answered by
a direct entry or by a merge join finding a hub carrying the same L on both
sides; joining two different minimum repeats is never allowed.

Entries are packed into single integers (aid << 32) | mr_id so that the
per-vertex lists are plain sorted int lists: binary search gives the direct
check and a two-pointer scan gives the merge join.
"""

from __future__ import annotations

import io
import struct
from bisect import bisect_left
from typing import BinaryIO

from .errors import (
    CorruptIndex,
    NonPrimitiveConstraint,
    NotFound,
    UnsupportedConstraint,
)
from .graph import Graph, VertexOrder, in_out_order
from .labelseq import LabelSeq, is_primitive

_MR_MASK = 0xFFFFFFFF

_MAGIC = b"RLC1"
_VERSION = 1


class MrDictionary:
    """Bidirectional map between primitive label sequences and dense ids."""

    __slots__ = ("seqs", "ids")

    def __init__(self):
        self.seqs: list[LabelSeq] = []
        self.ids: dict[LabelSeq, int] = {}

    def intern(self, seq: LabelSeq) -> int:
        mr_id = self.ids.get(seq)
        if mr_id is None:
            mr_id = len(self.seqs)
            self.ids[seq] = mr_id
            self.seqs.append(seq)
        return mr_id

    def get(self, seq: LabelSeq):
        return self.ids.get(seq)

    def __len__(self) -> int:
        return len(self.seqs)


class RlcIndex:
    """Built index over one graph; immutable once construction finishes."""

    __slots__ = (
        "k",
        "n",
        "order",
        "dict",
        "l_in",
        "l_out",
        "vertex_names",
        "label_names",
        "vertex_ids",
        "label_ids",
    )

    def __init__(
        self,
        k: int,
        order: VertexOrder,
        vertex_names: list[str],
        label_names: list[str],
    ):
        self.k = k
        self.n = order.n
        self.order = order
        self.dict = MrDictionary()
        self.l_in: list[list[int]] = [[] for _ in range(self.n)]
        self.l_out: list[list[int]] = [[] for _ in range(self.n)]
        self.vertex_names = vertex_names
        self.label_names = label_names
        self.vertex_ids = {name: i for i, name in enumerate(vertex_names)}
        self.label_ids = {name: i for i, name in enumerate(label_names)}

    @classmethod
    def empty(cls, g: Graph, k: int, order: VertexOrder | None = None) -> "RlcIndex":
        if k < 1:
            raise ValueError("k must be positive")
        if order is None:
            order = in_out_order(g)
        return cls(k, order, list(g.vertex_names), list(g.label_names))

    # -- id-level core, shared by the public query and the builder's pruning --

    def query_ids(self, s: int, t: int, mr_id: int) -> bool:
        lo = self.l_out[s]
        li = self.l_in[t]
        aid = self.order.aid
        if lo:
            key = (aid[t] << 32) | mr_id
            i = bisect_left(lo, key)
            if i < len(lo) and lo[i] == key:
                return True
        if li:
            key = (aid[s] << 32) | mr_id
            i = bisect_left(li, key)
            if i < len(li) and li[i] == key:
                return True
        if not lo or not li:
            return False
        i = j = 0
        n1 = len(lo)
        n2 = len(li)
        while i < n1 and j < n2:
            a = lo[i]
            b = li[j]
            if a == b:
                if a & _MR_MASK == mr_id:
                    return True
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        return False

    def _validate(self, s: int, t: int, constraint: LabelSeq) -> None:
        if not (0 <= s < self.n) or not (0 <= t < self.n):
            raise NotFound(f"vertex out of range for index over {self.n} vertices")
        if not constraint:
            raise NonPrimitiveConstraint("constraint must be nonempty")
        num_labels = len(self.label_names)
        for lab in constraint:
            if not (0 <= lab < num_labels):
                raise NotFound(f"label id {lab} out of range")
        if len(constraint) > self.k:
            raise UnsupportedConstraint(
                f"constraint length {len(constraint)} exceeds index k={self.k}"
            )
        if not is_primitive(constraint):
            raise NonPrimitiveConstraint(
                "constraint must equal its own minimum repeat"
            )


def query(idx: RlcIndex, s: int, t: int, constraint: LabelSeq) -> bool:
    """True iff the graph has a path s..t whose labels repeat the constraint.

    The constraint must be primitive and no longer than the index build
    parameter k; beyond k the index cannot certify absence, so the call is
    an error rather than False.
    """
    idx._validate(s, t, constraint)
    mr_id = idx.dict.get(tuple(constraint))
    if mr_id is None:
        return False
    return idx.query_ids(s, t, mr_id)


def query_star(idx: RlcIndex, s: int, t: int, constraint: LabelSeq) -> bool:
    """Kleene-star form: zero repetitions are allowed, so s == t answers True."""
    idx._validate(s, t, constraint)
    if s == t:
        return True
    mr_id = idx.dict.get(tuple(constraint))
    if mr_id is None:
        return False
    return idx.query_ids(s, t, mr_id)


def concise_set(idx: RlcIndex, s: int, t: int) -> set:
    """Every primitive constraint the index answers True for the pair (s, t)."""
    if not (0 <= s < idx.n) or not (0 <= t < idx.n):
        raise NotFound(f"vertex out of range for index over {idx.n} vertices")
    lo = idx.l_out[s]
    li = idx.l_in[t]
    aid = idx.order.aid
    found: set[int] = set()
    for lst, target_aid in ((lo, aid[t]), (li, aid[s])):
        i = bisect_left(lst, target_aid << 32)
        while i < len(lst) and lst[i] >> 32 == target_aid:
            found.add(lst[i] & _MR_MASK)
            i += 1
    i = j = 0
    n1 = len(lo)
    n2 = len(li)
    while i < n1 and j < n2:
        a = lo[i]
        b = li[j]
        if a == b:
            found.add(a & _MR_MASK)
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return {idx.dict.seqs[mr_id] for mr_id in found}


def is_condensed(idx: RlcIndex) -> bool:
    return not condensedness_violations(idx)


def condensedness_violations(idx: RlcIndex) -> list[tuple]:
    """Entries whose reachability is also certified by an independent hub pair.

    For an entry (t, L) in l_out[s] (or (s, L) in l_in[t]) a redundancy is a
    hub x with (x, L) in l_out[s] and (x, L) in l_in[t] where neither side of
    the pair is the entry under inspection; without that exclusion every
    self-certifying entry such as (v, L) in l_out[v] would flag its own
    direct uses.
    """
    aid = idx.order.aid
    inverse = idx.order.inverse
    violations: list[tuple] = []

    def common_hubs(s: int, t: int, mr_id: int, exclude_aid: int):
        lo = idx.l_out[s]
        li = idx.l_in[t]
        i = j = 0
        while i < len(lo) and j < len(li):
            a = lo[i]
            b = li[j]
            if a == b:
                if a & _MR_MASK == mr_id and a >> 32 != exclude_aid:
                    return a >> 32
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        return None

    for s in range(idx.n):
        for packed in idx.l_out[s]:
            t = inverse[(packed >> 32) - 1]
            mr_id = packed & _MR_MASK
            hub = common_hubs(s, t, mr_id, exclude_aid=aid[t])
            if hub is not None:
                violations.append(("out", s, t, idx.dict.seqs[mr_id], inverse[hub - 1]))
    for t in range(idx.n):
        for packed in idx.l_in[t]:
            s = inverse[(packed >> 32) - 1]
            mr_id = packed & _MR_MASK
            hub = common_hubs(s, t, mr_id, exclude_aid=aid[s])
            if hub is not None:
                violations.append(("in", s, t, idx.dict.seqs[mr_id], inverse[hub - 1]))
    return violations


def index_stats(idx: RlcIndex) -> dict:
    """Entry counts, dictionary size, and serialized footprint."""
    in_entries = sum(len(lst) for lst in idx.l_in)
    out_entries = sum(len(lst) for lst in idx.l_out)
    return {
        "vertices": idx.n,
        "k": idx.k,
        "in_entries": in_entries,
        "out_entries": out_entries,
        "total_entries": in_entries + out_entries,
        "distinct_mrs": len(idx.dict),
        "serialized_bytes": len(serialize(idx)),
    }


# -- serialization ----------------------------------------------------------

_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_ENTRY = struct.Struct("<QI")


def _write_str(out: BinaryIO, text: str) -> None:
    data = text.encode("utf-8")
    out.write(_U32.pack(len(data)))
    out.write(data)


def serialize(idx: RlcIndex) -> bytes:
    """Little-endian byte stream; see deserialize for the layout."""
    out = io.BytesIO()
    out.write(_MAGIC)
    out.write(_U32.pack(_VERSION))
    out.write(_U16.pack(idx.k))
    out.write(_U64.pack(idx.n))
    out.write(_U64.pack(len(idx.label_names)))
    for name in idx.label_names:
        _write_str(out, name)
    for name in idx.vertex_names:
        _write_str(out, name)
    for v in idx.order.inverse:
        out.write(_U64.pack(v))
    out.write(_U64.pack(len(idx.dict)))
    for seq in idx.dict.seqs:
        out.write(_U16.pack(len(seq)))
        for lab in seq:
            out.write(_U32.pack(lab))
    for v in range(idx.n):
        for lst in (idx.l_in[v], idx.l_out[v]):
            out.write(_U64.pack(len(lst)))
            for packed in lst:
                out.write(_ENTRY.pack(packed >> 32, packed & _MR_MASK))
    return out.getvalue()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        end = self.pos + size
        if end > len(self.data):
            raise CorruptIndex("truncated index stream")
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk

    def u16(self) -> int:
        return _U16.unpack(self.take(2))[0]

    def u32(self) -> int:
        return _U32.unpack(self.take(4))[0]

    def u64(self) -> int:
        return _U64.unpack(self.take(8))[0]

    def string(self) -> str:
        size = self.u32()
        return self.take(size).decode("utf-8")


def deserialize(data: bytes) -> RlcIndex:
    """Rebuild an index from serialize() output; raises CorruptIndex on damage."""
    r = _Reader(data)
    if r.take(4) != _MAGIC:
        raise CorruptIndex("bad magic")
    version = r.u32()
    if version != _VERSION:
        raise CorruptIndex(f"unsupported version {version}")
    k = r.u16()
    n = r.u64()
    num_labels = r.u64()
    label_names = [r.string() for _ in range(num_labels)]
    vertex_names = [r.string() for _ in range(n)]
    inverse = [r.u64() for _ in range(n)]
    aid = [0] * n
    for rank, v in enumerate(inverse, start=1):
        if not (0 <= v < n) or aid[v]:
            raise CorruptIndex("vertex order is not a bijection")
        aid[v] = rank
    order = VertexOrder(aid=tuple(aid), inverse=tuple(inverse))
    idx = RlcIndex(k, order, vertex_names, label_names)
    mr_count = r.u64()
    for _ in range(mr_count):
        length = r.u16()
        seq = tuple(r.u32() for _ in range(length))
        if not seq or any(lab >= num_labels for lab in seq):
            raise CorruptIndex("dictionary entry out of range")
        idx.dict.intern(seq)
    for v in range(n):
        for lst in (idx.l_in[v], idx.l_out[v]):
            count = r.u64()
            prev = -1
            for _ in range(count):
                hub_aid, mr_id = _ENTRY.unpack(r.take(12))
                if not (1 <= hub_aid <= n) or mr_id >= mr_count:
                    raise CorruptIndex("entry out of range")
                packed = (hub_aid << 32) | mr_id
                if packed <= prev:
                    raise CorruptIndex("entry list not strictly sorted")
                prev = packed
                lst.append(packed)
    if r.pos != len(data):
        raise CorruptIndex("trailing bytes after index payload")
    return idx
