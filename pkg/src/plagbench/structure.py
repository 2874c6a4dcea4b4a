"""Structure-based detector: greedy string tiling over token sequences.

The tiling repeatedly claims the longest common substring of the two
sequences whose tokens are not yet covered by an earlier tile, until no
common substring of at least ``min_match`` tokens remains. Ties between
equal-length maximal matches break on the lowest start in the first
sequence, then the lowest start in the second; that makes the tiling fully
deterministic and lets tests compare it against an exhaustive oracle.

The match hunt itself uses a Karp-Rabin rolling hash over windows of a
shrinking search length (starting at 20 and stepping down toward
``min_match``, as in the classic running variant of the algorithm). Hash
hits are candidates only; every candidate is verified by direct token
comparison before it can become a tile. Matches that get partially
occluded by an earlier, longer tile are split into their still-unmarked
aligned fragments and re-queued, so the batch marking is observationally
identical to re-scanning after every single tile.

Similarity normalizes claimed coverage by both lengths:
``2 * coverage / (len(a) + len(b))``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .lexer import TokenSequence
from .similarity import Detector, SimilarityDegree

INITIAL_SEARCH_LENGTH = 20
DEFAULT_MIN_MATCH = 2

_HASH_BASE = 1_000_003
_HASH_MOD = (1 << 61) - 1


class InvalidMinMatch(ValueError):
    pass


class EmptyPair(ValueError):
    """Both sequences are empty; similarity is undefined."""


class AbstractionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Tile:
    start_a: int
    start_b: int
    length: int


@dataclass
class TileSet:
    tiles: list[Tile]
    coverage: int
    min_match: int


def _unmarked_runs(marked: bytearray) -> list[tuple[int, int]]:
    runs = []
    i, n = 0, len(marked)
    while i < n:
        if marked[i]:
            i += 1
            continue
        start = i
        while i < n and not marked[i]:
            i += 1
        runs.append((start, i))
    return runs


def _scan(a: list[int], b: list[int], marked_a: bytearray, marked_b: bytearray,
          s: int) -> list[tuple[int, int, int]]:
    """All maximal unmarked matches of length >= s, deduplicated.

    Returns (start_a, start_b, length) triples. A match is maximal when it
    cannot be extended on either side without hitting a marked token, a
    token mismatch, or a sequence boundary.
    """
    top_power = pow(_HASH_BASE, s - 1, _HASH_MOD)

    table: dict[int, list[int]] = {}
    for start, end in _unmarked_runs(marked_b):
        if end - start < s:
            continue
        h = 0
        for t in range(start, start + s):
            h = (h * _HASH_BASE + b[t]) % _HASH_MOD
        for j in range(start, end - s + 1):
            table.setdefault(h, []).append(j)
            if j + s < end:
                h = ((h - b[j] * top_power) * _HASH_BASE + b[j + s]) % _HASH_MOD

    matches: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int]] = set()
    len_a, len_b = len(a), len(b)
    for start, end in _unmarked_runs(marked_a):
        if end - start < s:
            continue
        h = 0
        for t in range(start, start + s):
            h = (h * _HASH_BASE + a[t]) % _HASH_MOD
        for i in range(start, end - s + 1):
            for j in table.get(h, ()):
                if a[i:i + s] != b[j:j + s]:
                    continue  # hash collision
                mi, mj, length = i, j, s
                while (mi > 0 and mj > 0 and not marked_a[mi - 1] and not marked_b[mj - 1]
                       and a[mi - 1] == b[mj - 1]):
                    mi -= 1
                    mj -= 1
                    length += 1
                while (mi + length < len_a and mj + length < len_b
                       and not marked_a[mi + length] and not marked_b[mj + length]
                       and a[mi + length] == b[mj + length]):
                    length += 1
                if (mi, mj) not in seen:
                    seen.add((mi, mj))
                    matches.append((mi, mj, length))
            if i + s < end:
                h = ((h - a[i] * top_power) * _HASH_BASE + a[i + s]) % _HASH_MOD
    return matches


def _mark_batch(matches: list[tuple[int, int, int]], marked_a: bytearray,
                marked_b: bytearray, floor: int, tiles: list[Tile]) -> None:
    """Claim matches longest-first, splitting any that became occluded.

    ``floor`` is the smallest fragment worth re-queueing in this batch;
    anything shorter is rediscovered by a later, finer scan.
    """
    heap = [(-length, i, j) for i, j, length in matches]
    heapq.heapify(heap)
    while heap:
        neg_length, i, j = heapq.heappop(heap)
        length = -neg_length
        clean = True
        for k in range(length):
            if marked_a[i + k] or marked_b[j + k]:
                clean = False
                break
        if clean:
            for k in range(length):
                marked_a[i + k] = 1
                marked_b[j + k] = 1
            tiles.append(Tile(i, j, length))
            continue
        k = 0
        while k < length:
            while k < length and (marked_a[i + k] or marked_b[j + k]):
                k += 1
            run_start = k
            while k < length and not marked_a[i + k] and not marked_b[j + k]:
                k += 1
            if k - run_start >= floor:
                heapq.heappush(heap, (-(k - run_start), i + run_start, j + run_start))


def _intern(a_keys, b_keys) -> tuple[list[int], list[int]]:
    symbols: dict = {}
    out = []
    for keys in (a_keys, b_keys):
        out.append([symbols.setdefault(k, len(symbols)) for k in keys])
    return out[0], out[1]


def rkr_gst_tiles(a: TokenSequence, b: TokenSequence,
                  min_match: int = DEFAULT_MIN_MATCH) -> TileSet:
    """Greedy string tiling of ``a`` against ``b``.

    Token equality is equality of the lexer's comparison key. The returned
    tiles are pairwise non-overlapping on each side, each at least
    ``min_match`` tokens long, sorted by their start in ``a``.
    """
    if min_match < 1:
        raise InvalidMinMatch(f"min_match must be >= 1, got {min_match}")
    if a.abstraction is not b.abstraction:
        raise AbstractionMismatch(
            f"cannot tile {a.abstraction.value} tokens against {b.abstraction.value} tokens"
        )
    ka, kb = _intern(a.keys(), b.keys())
    tiles: list[Tile] = []
    if ka and kb:
        marked_a = bytearray(len(ka))
        marked_b = bytearray(len(kb))
        s = max(INITIAL_SEARCH_LENGTH, min_match)
        s = min(s, max(min_match, min(len(ka), len(kb))))
        while True:
            matches = _scan(ka, kb, marked_a, marked_b, s)
            longest = max((length for _, _, length in matches), default=0)
            if longest > 2 * s:
                s = longest
                continue
            _mark_batch(matches, marked_a, marked_b, s, tiles)
            if s > 2 * min_match:
                s //= 2
            elif s > min_match:
                s = min_match
            else:
                break
    tiles.sort(key=lambda t: t.start_a)
    return TileSet(tiles, sum(t.length for t in tiles), min_match)


def sba_similarity(a: TokenSequence, b: TokenSequence,
                   min_match: int = DEFAULT_MIN_MATCH) -> SimilarityDegree:
    """Similarity degree under the structural lens; symmetric in a and b.

    The tiling itself is direction-sensitive through its tie-breaking, so
    the pair is put into a canonical order before tiling.
    """
    if len(a) == 0 and len(b) == 0:
        raise EmptyPair("both token sequences are empty")
    first, second = a, b
    if (len(b.keys()), b.keys()) < (len(a.keys()), a.keys()):
        first, second = b, a
    tile_set = rkr_gst_tiles(first, second, min_match)
    value = 2.0 * tile_set.coverage / (len(a) + len(b))
    return SimilarityDegree(min(1.0, max(0.0, value)), Detector.SBA)


def dump_tiles(tile_set: TileSet) -> str:
    """One tile per line: startA startB length."""
    return "\n".join(f"{t.start_a} {t.start_b} {t.length}" for t in tile_set.tiles)
