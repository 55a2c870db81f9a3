"""Divisor-lattice utilities and the chain index sets of the closed forms.

The closed-form evaluations sum over two combinatorial families rooted at 1:

* divisor chains 1 = a_0 < a_1 < ... < a_r = k with a_{j-1} | a_j;
* chain tuples, which interleave companions b_j between consecutive chain
  entries: a_{j-1} <= b_j < a_j with a_{j-1} | b_j and b_j | a_j.

Counts are tiny (18 tuples at the most composite target below 13), so the
enumerators favor clarity: recursive descent over admissible extensions,
memoized per target.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "mobius",
    "divisors",
    "DivisorChain",
    "ChainTuple",
    "enumerate_divisor_chains",
    "enumerate_chain_tuples",
]


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    """Classical Moebius function by trial division."""
    if n < 1:
        raise ValueError("mobius is defined for positive integers")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if n > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    """All divisors of n, ascending."""
    if n < 1:
        raise ValueError("divisors is defined for positive integers")
    small = []
    large = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


@dataclass(frozen=True, order=True)
class DivisorChain:
    """Strictly increasing divisibility chain (1 = a_0, a_1, ..., a_r = k)."""

    seq: tuple[int, ...]

    def __post_init__(self):
        if not self.seq or self.seq[0] != 1:
            raise ValueError("chain must start at 1")
        for lo, hi in zip(self.seq, self.seq[1:]):
            if not (lo < hi and hi % lo == 0):
                raise ValueError(f"bad chain step {lo} -> {hi}")

    @property
    def target(self) -> int:
        return self.seq[-1]

    @property
    def length(self) -> int:
        """Number of steps r (chain has r+1 entries)."""
        return len(self.seq) - 1


@dataclass(frozen=True, order=True)
class ChainTuple:
    """A divisor chain with a companion b_j chosen inside each step.

    a_seq = (a_0, ..., a_r) with a_0 = 1; b_seq = (b_1, ..., b_r) with
    a_{j-1} <= b_j < a_j, a_{j-1} | b_j, b_j | a_j.  r = 0 (empty b_seq)
    is the single tuple with target 1; its associated product is empty.
    """

    a_seq: tuple[int, ...]
    b_seq: tuple[int, ...]

    def __post_init__(self):
        if not self.a_seq or self.a_seq[0] != 1:
            raise ValueError("a_seq must start at 1")
        if len(self.b_seq) != len(self.a_seq) - 1:
            raise ValueError("b_seq must have one entry per chain step")
        for j, b in enumerate(self.b_seq):
            lo, hi = self.a_seq[j], self.a_seq[j + 1]
            if not (lo <= b < hi and b % lo == 0 and hi % b == 0):
                raise ValueError(f"bad companion {b} for step {lo} -> {hi}")

    @property
    def target(self) -> int:
        return self.a_seq[-1]

    @property
    def length(self) -> int:
        return len(self.b_seq)

    def steps(self) -> tuple[tuple[int, int, int], ...]:
        """Per-step triples (a_{j-1}, b_j, a_j), j = 1..r."""
        return tuple(
            (self.a_seq[j], self.b_seq[j], self.a_seq[j + 1])
            for j in range(len(self.b_seq)))


@lru_cache(maxsize=None)
def enumerate_divisor_chains(k: int) -> tuple[DivisorChain, ...]:
    """All divisibility chains from 1 to k, in lexicographic order."""
    if k < 1:
        raise ValueError("target must be a positive integer")
    if k == 1:
        return (DivisorChain((1,)),)
    chains = []
    for d in divisors(k):
        if d < k:
            for prefix in enumerate_divisor_chains(d):
                chains.append(DivisorChain(prefix.seq + (k,)))
    return tuple(sorted(chains))


@lru_cache(maxsize=None)
def enumerate_chain_tuples(a: int) -> tuple[ChainTuple, ...]:
    """All chain tuples with target a, in lexicographic order."""
    if a < 1:
        raise ValueError("target must be a positive integer")
    if a == 1:
        return (ChainTuple((1,), ()),)
    tuples = []
    for chain in enumerate_divisor_chains(a):
        # independent companion choices per step
        choices: list[list[int]] = []
        for lo, hi in zip(chain.seq, chain.seq[1:]):
            choices.append([b for b in divisors(hi)
                            if lo <= b < hi and b % lo == 0])
        stack: list[tuple[int, ...]] = [()]
        for options in choices:
            stack = [picked + (b,) for picked in stack for b in options]
        for b_seq in stack:
            tuples.append(ChainTuple(chain.seq, b_seq))
    return tuple(sorted(tuples))
