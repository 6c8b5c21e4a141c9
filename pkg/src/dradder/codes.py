"""Delay-insensitive data encodings: dual-rail (1-of-2) and 1-of-4 one-hot codes.

All functions here are pure and total over their stated domains; the
illegal dual-rail state (both rails high) is reported as a decode result,
never raised, because detecting it is part of what simulation monitors do.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class DecodeState(Enum):
    VALID0 = "valid-0"
    VALID1 = "valid-1"
    SPACER = "spacer"
    ILLEGAL = "illegal"


@dataclass(frozen=True)
class RailPair:
    """One dual-rail signal: two wires encoding a bit, a spacer, or garbage."""

    rail1: int
    rail0: int

    def __post_init__(self):
        if self.rail1 not in (0, 1) or self.rail0 not in (0, 1):
            raise ValueError(f"rail levels must be 0 or 1, got {self!r}")


@dataclass(frozen=True)
class OneOfFour:
    """One 1-of-4 signal: four wires F0..F3 encoding two bits or a spacer."""

    f: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.f) != 4 or any(w not in (0, 1) for w in self.f):
            raise ValueError(f"need four 0/1 wire levels, got {self.f!r}")


def encode_dual_rail(bit: int) -> RailPair:
    """Encode one bit: 1 -> (1,0), 0 -> (0,1)."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    return RailPair(rail1=bit, rail0=1 - bit)


def decode_dual_rail(p: RailPair) -> DecodeState:
    """Total decode over the four wire combinations of a rail pair."""
    if p.rail1 and p.rail0:
        return DecodeState.ILLEGAL
    if p.rail1:
        return DecodeState.VALID1
    if p.rail0:
        return DecodeState.VALID0
    return DecodeState.SPACER


def encode_one_of_four(p: int, q: int) -> OneOfFour:
    """Encode the bit pair (p, q) as a one-hot word: (0,0)->F0 ... (1,1)->F3."""
    if p not in (0, 1) or q not in (0, 1):
        raise ValueError(f"bits must be 0 or 1, got ({p!r}, {q!r})")
    wires = [0, 0, 0, 0]
    wires[2 * p + q] = 1
    return OneOfFour(tuple(wires))


def decode_one_of_four(w: OneOfFour) -> tuple[int, int] | DecodeState:
    """Decode a 1-of-4 word to (p, q), or SPACER / ILLEGAL for 0 / >1 wires high."""
    high = [i for i, lvl in enumerate(w.f) if lvl]
    if not high:
        return DecodeState.SPACER
    if len(high) > 1:
        return DecodeState.ILLEGAL
    return divmod(high[0], 2)


@dataclass(frozen=True)
class CodewordSetReport:
    unordered: bool
    complete_one_hot: bool


def _as_word(word) -> tuple[int, ...]:
    if isinstance(word, str):
        if any(c not in "01" for c in word):
            raise ValueError(f"not a binary word: {word!r}")
        return tuple(int(c) for c in word)
    w = tuple(int(b) for b in word)
    if any(b not in (0, 1) for b in w):
        raise ValueError(f"not a binary word: {word!r}")
    return w


def check_codeword_set(words: Iterable[Sequence[int] | str]) -> CodewordSetReport:
    """Sanity-check a set of equal-length binary code words.

    unordered: no word's set of high bits is a subset of another word's.
    complete_one_hot: the set is exactly all n one-hot words of length n.
    """
    ws = [_as_word(w) for w in words]
    if not ws:
        raise ValueError("empty codeword set")
    n = len(ws[0])
    if any(len(w) != n for w in ws):
        raise ValueError("codewords differ in length")

    supports = [frozenset(i for i, b in enumerate(w) if b) for w in ws]
    unordered = True
    for i, si in enumerate(supports):
        for j, sj in enumerate(supports):
            if i != j and si <= sj:
                unordered = False
    one_hot = {tuple(1 if i == k else 0 for i in range(n)) for k in range(n)}
    complete = set(ws) == one_hot
    return CodewordSetReport(unordered=unordered, complete_one_hot=complete)
