"""Canonical algebra of clopen subsets of 2^omega.

A clopen set is a finite union of cones [s]; its canonical form is the
sorted antichain of cone words with no sibling pair left unmerged.  The
module also provides the two partition schemes every construction uses:
radial partitions of a punctured cone and Z-indexed decompositions of an
open interval.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DomainError, MalformedInput, UnsupportedCase
from .points import EpPoint, check_word, first_disagreement, flip


def normalize_words(words) -> tuple[str, ...]:
    """Canonical antichain denoting the same union of cones."""
    ws = {check_word(w) for w in words}
    keep: set[str] = set()
    for w in sorted(ws, key=lambda w: (len(w), w)):
        if not any(w[:k] in keep for k in range(len(w) + 1)):
            keep.add(w)
    # merge sibling pairs to a fixpoint; merging preserves the antichain property
    merged = True
    while merged:
        merged = False
        for w in sorted(keep, key=len, reverse=True):
            if w and w[:-1] + flip(w[-1]) in keep:
                keep -= {w, w[:-1] + flip(w[-1])}
                keep.add(w[:-1])
                merged = True
                break
    return tuple(sorted(keep))


@dataclass(frozen=True)
class ClopenSet:
    cones: tuple[str, ...]

    def __post_init__(self):
        if self.cones != normalize_words(self.cones):
            raise MalformedInput("cone list not in canonical form; use ClopenSet.of")

    def __repr__(self):
        if not self.cones:
            return "{}"
        return "{" + ",".join(f"[{w or 'e'}]" for w in self.cones) + "}"

    @staticmethod
    def of(words) -> "ClopenSet":
        return ClopenSet(normalize_words(words))

    @property
    def is_empty(self) -> bool:
        return not self.cones

    @property
    def is_full(self) -> bool:
        return self.cones == ("",)

    def member(self, x: EpPoint) -> bool:
        return any(x.starts_with(w) for w in self.cones)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet.of(self.cones + other.cones)

    def intersection(self, other: "ClopenSet") -> "ClopenSet":
        out = []
        for a in self.cones:
            for b in other.cones:
                if a.startswith(b):
                    out.append(a)
                elif b.startswith(a):
                    out.append(b)
        return ClopenSet.of(out)

    def complement(self) -> "ClopenSet":
        return ClopenSet.of(_complement_words(self.cones))

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersection(other.complement())


def _complement_words(words) -> list[str]:
    if "" in words:
        return []
    if not words:
        return [""]
    left = [w[1:] for w in words if w[0] == "0"]
    right = [w[1:] for w in words if w[0] == "1"]
    return ["0" + u for u in _complement_words(left)] + [
        "1" + u for u in _complement_words(right)
    ]


EMPTY = ClopenSet(())
FULL = ClopenSet(("",))


def combine(a: ClopenSet, b: ClopenSet, mode: str) -> ClopenSet:
    if mode == "union":
        return a.union(b)
    if mode == "intersection":
        return a.intersection(b)
    if mode == "difference":
        return a.difference(b)
    if mode == "complement-of-a":
        return a.complement()
    raise MalformedInput(f"unknown combine mode {mode!r}")


def cone_complement_in(root: str, inner_words) -> tuple[str, ...]:
    """Cones of [root] minus the given subcones (each must extend root)."""
    rel = []
    for w in inner_words:
        if not w.startswith(root):
            raise DomainError(f"[{w}] not inside [{root}]")
        rel.append(w[len(root):])
    return tuple(root + u for u in _complement_words(normalize_words(rel)))


def split_to_depth(word: str, depth: int) -> tuple[str, ...]:
    """All depth-`depth` subcones of [word] (the cone itself if already deep)."""
    if len(word) >= depth:
        return (word,)
    return tuple(
        word + "".join(bits) for bits in itertools.product("01", repeat=depth - len(word))
    )


# ------------------------------------------------------------------ schemes


@dataclass(frozen=True)
class RadialScheme:
    """The canonical partition of [base] minus {center} into flip cones.

    Unordered mode indexes pieces by depth: piece m flips the center's digit
    at position |base| + m.  Ordered mode splits the same cones into the
    family below the center (flipping a 1 to 0) and the family above it
    (flipping a 0 to 1), each indexed in the order it interleaves toward the
    center.  Pieces are never materialized beyond what callers ask for.
    """

    base: str
    center: EpPoint
    ordered: bool

    def __post_init__(self):
        if not self.center.starts_with(self.base):
            raise DomainError(f"center {self.center} outside base [{self.base}]")

    def piece(self, m: int) -> str:
        j = len(self.base) + m
        return self.center.expand(j) + flip(self.center.digit(j))

    def side_positions(self, side: str):
        want = "1" if side == "left" else "0"
        for j in itertools.count(len(self.base)):
            if self.center.digit(j) == want:
                yield j

    def side_piece(self, side: str, m: int) -> str:
        j = next(itertools.islice(self.side_positions(side), m, None))
        return self.center.expand(j) + flip(self.center.digit(j))

    def has_side(self, side: str) -> bool:
        want = "1" if side == "left" else "0"
        return want in self.center.per

    def pieces(self, count: int) -> list[str]:
        return [self.piece(m) for m in range(count)]

    def side_pieces(self, count: int) -> tuple[list[str], list[str]]:
        left = [self.side_piece("left", m) for m in range(count)] if self.has_side("left") else []
        right = [self.side_piece("right", m) for m in range(count)] if self.has_side("right") else []
        return left, right


def radial_partition(base: str, center: EpPoint, ordered: bool, count: int) -> RadialScheme:
    """Build a radial scheme, materializing nothing; `count` is validated only.

    Ordered schemes need the center to interleave from both sides, so a
    center in Q is allowed only when it sits at the matching end of its base
    (then the scheme is one-sided by construction).
    """
    if not center.starts_with(base):
        raise DomainError(f"center {center} outside base [{base}]")
    scheme = RadialScheme(base, center, ordered)
    if ordered and center.q_kind is not None:
        at_min = center.per == "0" and len(center.pre) <= len(base)
        at_max = center.per == "1" and len(center.pre) <= len(base)
        if not (at_min or at_max):
            raise UnsupportedCase(
                "ordered scheme at a Q center needs the center at the base's end"
            )
    if count < 0:
        raise DomainError("count must be >= 0")
    return scheme


# ------------------------------------------------- interval decompositions


@dataclass(frozen=True)
class IntervalDecomposition:
    """(a, b) as an order-coherent Z-indexed union of cones.

    Negative indices descend toward a through the prefix-flip cones of a,
    non-negative indices ascend toward b through those of b; piece(n) is a
    pure accessor and `window` only fixes the materialized serialization.
    """

    a: EpPoint
    b: EpPoint
    window: int
    split: int = field(init=False, default=0)

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"need a < b, got {self.a} >= {self.b}")
        if self.a.per == "1":
            raise UnsupportedCase(f"left endpoint {self.a} has an immediate successor")
        if self.b.per == "0":
            raise UnsupportedCase(f"right endpoint {self.b} has an immediate predecessor")
        object.__setattr__(self, "split", first_disagreement(self.a, self.b))

    def _flip_positions(self, point: EpPoint, digit: str):
        for j in itertools.count(self.split + 1):
            if point.digit(j) == digit:
                yield j

    def piece(self, n: int) -> str:
        if n >= 0:
            j = next(itertools.islice(self._flip_positions(self.b, "1"), n, None))
            return self.b.expand(j) + "0"
        j = next(itertools.islice(self._flip_positions(self.a, "0"), -n - 1, None))
        return self.a.expand(j) + "1"

    def materialized(self) -> dict[int, str]:
        return {n: self.piece(n) for n in range(-self.window - 1, self.window + 1)}

    def member_index(self, x: EpPoint) -> int:
        """Index of the unique piece containing x; x must lie in (a, b)."""
        if not (self.a < x < self.b):
            raise DomainError(f"{x} outside ({self.a}, {self.b})")
        if x.digit(self.split) == "1":
            side, ref, want = 1, self.b, "1"
        else:
            side, ref, want = -1, self.a, "0"
        j = first_disagreement(x, ref)
        count = sum(1 for i in range(self.split + 1, j) if ref.digit(i) == want)
        return count if side == 1 else -count - 1


def interval_decompose(a: EpPoint, b: EpPoint, window: int) -> IntervalDecomposition:
    if window < 0:
        raise DomainError("window must be >= 0")
    return IntervalDecomposition(a, b, window)
