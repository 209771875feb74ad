"""Label-sequence algebra: minimum repeats, primitivity, kernel decomposition.

A label sequence is a plain tuple of non-negative integer label ids, which
gives structural equality and lexicographic ordering for free.  The empty
tuple is representable but rejected by every operation here.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Optional

from .errors import InvalidSequence

LabelSeq = tuple  # tuple[int, ...]; alias used in signatures for readability


class KernelDecomposition(NamedTuple):
    """A sequence written as kernel^repetitions followed by tail.

    kernel is primitive and nonempty, repetitions >= 2, and tail is empty or
    a proper prefix of kernel, so the three fields reconstruct the input
    exactly.
    """

    kernel: LabelSeq
    tail: LabelSeq
    repetitions: int


def failure_function(seq: LabelSeq) -> list[int]:
    """Border array of seq: fail[i] = length of the longest proper border of seq[:i+1]."""
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    return fail


def smallest_period(seq: LabelSeq) -> int:
    """Smallest p such that seq[i] == seq[i+p] wherever both sides exist."""
    if not seq:
        raise InvalidSequence("empty sequence has no period")
    n = len(seq)
    if n == 1:
        return 1
    if n == 2:
        return 1 if seq[0] == seq[1] else 2
    return n - failure_function(seq)[n - 1]


def minimum_repeat(seq: LabelSeq) -> LabelSeq:
    """Shortest L' with seq == L' repeated; seq itself when no shorter repeat exists.

    The result length always divides len(seq) and the result is primitive.
    """
    if not seq:
        raise InvalidSequence("minimum repeat of the empty sequence is undefined")
    n = len(seq)
    if n == 1:
        return seq
    if n == 2:
        return seq[:1] if seq[0] == seq[1] else seq
    p = n - failure_function(seq)[n - 1]
    if n % p == 0:
        return seq[:p]
    return seq


def is_primitive(seq: LabelSeq) -> bool:
    """True iff seq equals its own minimum repeat."""
    if not seq:
        raise InvalidSequence("primitivity of the empty sequence is undefined")
    return minimum_repeat(seq) == seq


def k_mr(seq: LabelSeq, k: int) -> Optional[LabelSeq]:
    """The minimum repeat of seq when its length is at most k, else None."""
    if not seq:
        raise InvalidSequence("empty sequence has no bounded minimum repeat")
    if k < 1:
        raise ValueError("k must be positive")
    mr = minimum_repeat(seq)
    return mr if len(mr) <= k else None


def kernel_decompose(seq: LabelSeq) -> Optional[KernelDecomposition]:
    """Unique decomposition seq == kernel^h + tail with h >= 2, or None.

    The kernel is the smallest-period prefix, which is provably primitive
    whenever it fits at least twice; the tail is whatever the repetitions
    leave over (always shorter than the kernel).
    """
    if not seq:
        raise InvalidSequence("empty sequence has no kernel")
    n = len(seq)
    q = smallest_period(seq)
    h = n // q
    if h < 2:
        return None
    return KernelDecomposition(kernel=seq[:q], tail=seq[q * h:], repetitions=h)


def primitive_count(alphabet_size: int, k: int) -> int:
    """Number of distinct primitive sequences of length 1..k over the alphabet.

    Computed by subtracting, from the |A|^i sequences of each length i, the
    primitive counts of every proper divisor of i.
    """
    if alphabet_size < 1 or k < 1:
        raise ValueError("alphabet_size and k must be positive")
    counts: dict[int, int] = {}
    for i in range(1, k + 1):
        total = alphabet_size**i
        for j in range(1, i):
            if i % j == 0:
                total -= counts[j]
        counts[i] = total
    return sum(counts.values())


def primitive_sequences(alphabet_size: int, max_len: int) -> Iterator[LabelSeq]:
    """All primitive sequences up to max_len, shortest first, lexicographic within a length."""
    if alphabet_size < 1 or max_len < 1:
        raise ValueError("alphabet_size and max_len must be positive")
    stack = [(lab,) for lab in range(alphabet_size)]
    for length in range(1, max_len + 1):
        if length == 1:
            yield from stack
            continue
        nxt = []
        for prefix in stack:
            for lab in range(alphabet_size):
                nxt.append(prefix + (lab,))
        stack = nxt
        for seq in stack:
            if minimum_repeat(seq) == seq:
                yield seq
