"""Exact arithmetic for eventually periodic points of Cantor space.

Every point handled by the package is an eventually periodic element of
2^omega kept in canonical ``u(v)`` form: ``v`` is primitive (not a proper
power) and ``u`` cannot be shortened by absorbing its last digit into a
rotation of ``v``.  Canonical form gives decidable equality, a decidable
lexicographic order, decidable tail equivalence and repeatable class
enumerations, which everything downstream relies on.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import lcm

from .errors import DomainError, MalformedInput


def check_word(w: str) -> str:
    if not isinstance(w, str) or any(c not in "01" for c in w):
        raise MalformedInput(f"not a binary word: {w!r}")
    return w


def flip(c: str) -> str:
    return "1" if c == "0" else "0"


def words_length_lex(max_len: int | None = None):
    """All binary words in (length, lex) order: '', '0', '1', '00', ..."""
    n = 0
    while max_len is None or n <= max_len:
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)
        n += 1


def primitive_root(v: str) -> str:
    n = len(v)
    for d in range(1, n):
        if n % d == 0 and v == v[:d] * (n // d):
            return v[:d]
    return v


def canonical_parts(pre: str, per: str) -> tuple[str, str]:
    """Reduce (preperiod, period) to the unique canonical form.

    The period is replaced by its primitive root, then the preperiod is
    absorbed digit by digit: while it ends with the period's last digit,
    drop that digit and rotate the period right.
    """
    check_word(pre)
    check_word(per)
    if not per:
        raise MalformedInput("empty period")
    per = primitive_root(per)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1] + per[:-1]
    return pre, per


@dataclass(frozen=True)
class EpPoint:
    """An eventually periodic element of 2^omega in canonical form."""

    pre: str
    per: str

    def __post_init__(self):
        p, q = canonical_parts(self.pre, self.per)
        if (p, q) != (self.pre, self.per):
            raise MalformedInput(
                f"non-canonical point {self.pre}({self.per}); use ep() to normalize"
            )

    def __repr__(self):
        return f"{self.pre}({self.per})"

    def digit(self, n: int) -> str:
        if n < len(self.pre):
            return self.pre[n]
        return self.per[(n - len(self.pre)) % len(self.per)]

    def expand(self, length: int) -> str:
        if length <= len(self.pre):
            return self.pre[:length]
        reps = (length - len(self.pre)) // len(self.per) + 1
        return (self.pre + self.per * reps)[:length]

    def starts_with(self, w: str) -> bool:
        return self.expand(len(w)) == w

    def drop(self, k: int) -> "EpPoint":
        """The shift sigma^k: remove the first k digits."""
        if k <= len(self.pre):
            return ep(self.pre[k:], self.per)
        r = (k - len(self.pre)) % len(self.per)
        return ep("", self.per[r:] + self.per[:r])

    def prepend(self, w: str) -> "EpPoint":
        return ep(check_word(w) + self.pre, self.per)

    @property
    def q_kind(self) -> str | None:
        """'Q0' for eventually-0 points, 'Q1' for eventually-1, else None."""
        if self.per == "0":
            return "Q0"
        if self.per == "1":
            return "Q1"
        return None

    def successor(self) -> "EpPoint":
        """Immediate successor; exists exactly when the point is eventually 1."""
        if self.per != "1" or not self.pre:
            raise DomainError(f"{self} has no immediate successor")
        return ep(self.pre[:-1] + "1", "0")

    def predecessor(self) -> "EpPoint":
        """Immediate predecessor; exists exactly when the point is eventually 0."""
        if self.per != "0" or not self.pre:
            raise DomainError(f"{self} has no immediate predecessor")
        return ep(self.pre[:-1] + "0", "1")

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0


def ep(pre: str, per: str) -> EpPoint:
    """Canonicalizing constructor."""
    p, q = canonical_parts(pre, per)
    return EpPoint(p, q)


ZERO = ep("", "0")
ONE = ep("", "1")

_POINT_RE = re.compile(r"^([01]*)\(([01]*)\)$")


def parse_point(s: str, normalize: bool = False) -> EpPoint:
    """Parse the text notation "u(v)"; rejects non-canonical forms unless normalize."""
    m = _POINT_RE.match(s.strip())
    if m is None or not m.group(2):
        raise MalformedInput(f"cannot parse point {s!r}")
    pre, per = m.group(1), m.group(2)
    if normalize:
        return ep(pre, per)
    return EpPoint(pre, per)


def format_point(x: EpPoint) -> str:
    return f"{x.pre}({x.per})"


def first_disagreement(x: EpPoint, y: EpPoint) -> int | None:
    """Least index where the digits differ, or None if the points are equal."""
    if x == y:
        return None
    bound = len(x.pre) + len(y.pre) + lcm(len(x.per), len(y.per))
    for n in range(bound):
        if x.digit(n) != y.digit(n):
            return n
    raise AssertionError("canonical forms differ but digits agree to the bound")


def compare(x: EpPoint, y: EpPoint) -> int:
    """Lexicographic comparison: -1, 0 or 1."""
    n = first_disagreement(x, y)
    if n is None:
        return 0
    return -1 if x.digit(n) < y.digit(n) else 1


def tail_equiv(x: EpPoint, y: EpPoint) -> bool:
    """True iff some tails of x and y coincide.

    For eventually periodic points this holds exactly when the primitive
    periods are cyclic rotations of each other.
    """
    return len(x.per) == len(y.per) and x.per in y.per + y.per


def classify_q(x: EpPoint) -> str | None:
    return x.q_kind


def min_rotation(v: str) -> str:
    return min(v[i:] + v[:i] for i in range(len(v)))


@dataclass(frozen=True)
class TailClass:
    """A tail-equivalence class, named by the lex-least rotation of its period."""

    rep: EpPoint

    def __post_init__(self):
        if self.rep.pre or self.rep.per != min_rotation(self.rep.per):
            raise MalformedInput(f"not a class representative: {self.rep}")

    def __repr__(self):
        return f"class({self.rep})"

    @staticmethod
    def of(x: EpPoint) -> "TailClass":
        return TailClass(EpPoint("", min_rotation(x.per)))

    def member(self, x: EpPoint) -> bool:
        return tail_equiv(x, self.rep)

    def enum_iter(self):
        """Members as w + rep over all words w in (length, lex) order, deduplicated.

        Every point tail-equivalent to rep arises this way, so the
        enumeration is onto the class and repeatable.
        """
        seen = set()
        for w in words_length_lex():
            x = self.rep.prepend(w)
            if x not in seen:
                seen.add(x)
                yield x

    def enumerate(self, n: int) -> list[EpPoint]:
        return list(itertools.islice(self.enum_iter(), n))


def enumerate_tail_class(x: EpPoint, n: int) -> list[EpPoint]:
    return TailClass.of(x).enumerate(n)


def canonical_class_words(max_len: int | None = None):
    """Primitive lex-least rotation words in (length, lex) order: 0,1,01,001,011,..."""
    for w in words_length_lex(max_len):
        if w and w == primitive_root(w) and w == min_rotation(w):
            yield w


@dataclass(frozen=True)
class SetPresentation:
    """A finitely presented countable subset of 2^omega.

    kind 'classes': a saturated union of finitely many tail classes.
    kind 'all_ep':  all eventually periodic points (union of every class).
    kind 'points':  an explicit finite enumeration.
    """

    kind: str
    classes: tuple[TailClass, ...] = ()
    points: tuple[EpPoint, ...] = ()

    def __post_init__(self):
        if self.kind not in ("classes", "all_ep", "points"):
            raise MalformedInput(f"unknown presentation kind {self.kind!r}")
        if self.kind == "classes" and len(set(self.classes)) != len(self.classes):
            raise MalformedInput("duplicate classes in presentation")

    @staticmethod
    def of_classes(*words: str) -> "SetPresentation":
        cls = tuple(TailClass(EpPoint("", w)) for w in words)
        return SetPresentation("classes", classes=cls)

    @staticmethod
    def all_ep() -> "SetPresentation":
        return SetPresentation("all_ep")

    @property
    def saturated(self) -> bool:
        return self.kind in ("classes", "all_ep")

    def class_iter(self):
        if self.kind == "classes":
            yield from self.classes
        elif self.kind == "all_ep":
            for w in canonical_class_words():
                yield TailClass(EpPoint("", w))
        else:
            raise DomainError("explicit enumerations have no class list")

    def contains(self, x: EpPoint) -> bool:
        if self.kind == "all_ep":
            return True
        if self.kind == "classes":
            return any(c.member(x) for c in self.classes)
        return x in self.points

    def enum_iter(self):
        """Deterministic injective enumeration of the presented set."""
        if self.kind == "points":
            yield from self.points
        elif self.kind == "classes":
            its = [c.enum_iter() for c in self.classes]
            while its:
                for it in its:
                    yield next(it)
        else:
            # diagonal over (class index, member index)
            its: list = []
            words = canonical_class_words()
            for layer in itertools.count():
                its.append(TailClass(EpPoint("", next(words))).enum_iter())
                for it in its:
                    yield next(it)

    def enumerate(self, n: int) -> list[EpPoint]:
        return list(itertools.islice(self.enum_iter(), n))

    def check_dense(self, depth: int) -> bool:
        """Every cone [s] with |s| <= depth is hit within the first 2^(|s|+2) members."""
        for w in words_length_lex(depth):
            window = self.enumerate(2 ** (len(w) + 2))
            if not any(x.starts_with(w) for x in window):
                return False
        return True


def saturate(gens: list[EpPoint]) -> SetPresentation:
    """Saturation of a finite generator set: the union of their tail classes."""
    if not gens:
        raise MalformedInput("saturate needs at least one generator")
    classes: list[TailClass] = []
    for g in gens:
        c = TailClass.of(g)
        if c not in classes:
            classes.append(c)
    return SetPresentation("classes", classes=tuple(classes))


def interleave(points: list[EpPoint], n: int) -> EpPoint:
    """Digit interleaving: result(n*k + j) = points[j](k)."""
    if n < 1 or len(points) != n:
        raise DomainError(f"interleave needs exactly n={n} points")
    pre_len = max(len(x.pre) for x in points)
    per_len = lcm(*(len(x.per) for x in points))
    pre = "".join(points[j].digit(k) for k in range(pre_len) for j in range(n))
    per = "".join(
        points[j].digit(pre_len + k) for k in range(per_len) for j in range(n)
    )
    return ep(pre, per)


def deinterleave(x: EpPoint, n: int) -> list[EpPoint]:
    """Exact inverse of interleave."""
    if n < 1:
        raise DomainError("arity must be >= 1")
    k0 = len(x.pre)
    p = len(x.per)
    return [
        ep(
            "".join(x.digit(n * k + j) for k in range(k0)),
            "".join(x.digit(n * (k0 + k) + j) for k in range(p)),
        )
        for j in range(n)
    ]


def silver_embed(x: EpPoint, depth: int) -> str:
    """Prefix of the block encoding B_0 B_1 ... with B_k = 0^(k+2) 1 x|(k+1).

    The marker runs grow strictly, so any tail of the output determines the
    block frame and hence the input: distinct inputs give tail-inequivalent,
    prefix-determined outputs.
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    out: list[str] = []
    total = 0
    for k in itertools.count():
        block = "0" * (k + 2) + "1" + x.expand(k + 1)
        out.append(block)
        total += len(block)
        if total >= depth:
            break
    return "".join(out)[:depth]
