"""Piecewise cone-translation self-homeomorphisms of 2^omega.

A map is finitely many cone translations [s] -> [t], s+z |-> t+z, together
with finitely many singular points.  Each singular point p carries a lazy
radial scheme: the flip cones of p inside a base cone map index-by-index
onto the flip cones of the assigned target q.  A carve list records leading
radial cones that later refinements have claimed as explicit pieces, so a
singular's live territory stays an exact cone complement.

Everything evaluates exactly on eventually periodic points, and every
evaluation is tail-preserving off the singular centers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import lcm

from .clopen import cone_complement_in
from .errors import DomainError, InvalidMap, UnsupportedCase
from .points import EpPoint, ZERO, ONE, ep, first_disagreement, flip

COMPOSE_PIECE_CAP = 4096


@dataclass(frozen=True)
class ConePiece:
    src: str
    dst: str

    def __repr__(self):
        return f"[{self.src or 'e'}]->[{self.dst or 'e'}]"

    def apply(self, x: EpPoint) -> EpPoint:
        if not x.starts_with(self.src):
            raise DomainError(f"{x} outside [{self.src}]")
        tail = x.drop(len(self.src))
        return ep(self.dst + tail.pre, tail.per)

    def inverse(self) -> "ConePiece":
        return ConePiece(self.dst, self.src)


def _other(side: str) -> str:
    return "right" if side == "left" else "left"


def _side_digit(side: str) -> str:
    return "1" if side == "left" else "0"


@dataclass(frozen=True)
class SingularAssignment:
    """p |-> q with matched radial schemes on [base_p] minus the carves.

    Unordered mode matches the m-th live flip cone of p to the m-th live
    flip cone of q.  Ordered mode matches within each side (cones below the
    center to cones below, above to above), so the induced map is monotone
    increasing at p; swap_sides matches across sides instead.
    """

    p: EpPoint
    q: EpPoint
    base_p: str
    base_q: str
    mode: str = "unordered"
    swap_sides: bool = False
    carved_p: tuple[str, ...] = ()
    carved_q: tuple[str, ...] = ()

    def __post_init__(self):
        if self.mode not in ("unordered", "ordered"):
            raise InvalidMap(f"unknown singular mode {self.mode!r}")
        for center, base, carved in (
            (self.p, self.base_p, self.carved_p),
            (self.q, self.base_q, self.carved_q),
        ):
            if not center.starts_with(base):
                raise InvalidMap(f"center {center} outside base [{base}]")
            for w in carved:
                j = len(w) - 1
                if j < len(base) or w != center.expand(j) + flip(center.digit(j)):
                    raise InvalidMap(f"carve [{w}] is not a flip cone of {center}")

    def __repr__(self):
        return f"{self.p}=>{self.q}@[{self.base_p or 'e'}]"

    # ---------------------------------------------------------- positions

    def _data(self, which: str):
        if which == "src":
            return self.p, self.base_p, set(self.carved_p)
        return self.q, self.base_q, set(self.carved_q)

    def _is_live(self, which: str, j: int) -> bool:
        center, base, carved = self._data(which)
        if j < len(base):
            return False
        return center.expand(j) + flip(center.digit(j)) not in carved

    def _scan_bound(self, which: str, m: int) -> int:
        center, base, carved = self._data(which)
        return (
            len(base)
            + len(center.pre)
            + (m + 2 + len(carved)) * (len(center.per) + 1)
            + 4
        )

    def _nth_live(self, which: str, side: str | None, m: int, start: int | None = None) -> int:
        """Position of the m-th live flip cone (optionally on one side) at or past start."""
        center, base, carved = self._data(which)
        want = _side_digit(side) if side else None
        j = len(base) if start is None else max(start, len(base))
        seen = 0
        for j in range(j, self._scan_bound(which, m) + (start or 0)):
            if want is not None and center.digit(j) != want:
                continue
            if not self._is_live(which, j):
                continue
            if seen == m:
                return j
            seen += 1
        raise InvalidMap(f"singular {self}: fewer than {m + 1} live cones on side {side}")

    def _live_index(self, which: str, side: str | None, j: int) -> int:
        center, base, carved = self._data(which)
        want = _side_digit(side) if side else None
        m = 0
        for k in range(len(base), j):
            if want is not None and center.digit(k) != want:
                continue
            if self._is_live(which, k):
                m += 1
        return m

    def first_live_at_or_after(self, which: str, side: str | None, start: int) -> int | None:
        center, base, carved = self._data(which)
        want = _side_digit(side) if side else None
        for j in range(max(start, len(base)), self._scan_bound(which, 0) + start):
            if want is not None and center.digit(j) != want:
                continue
            if self._is_live(which, j):
                return j
        return None

    def check_matchable(self):
        """Live source and target cones must pair off on each matched side."""
        if self.mode == "unordered":
            return
        for side in ("left", "right"):
            tgt = _other(side) if self.swap_sides else side
            if self._finite_count("src", side) != self._finite_count("dst", tgt):
                raise InvalidMap(
                    f"singular {self}: {side} cones do not match target {tgt} cones"
                )

    def _finite_count(self, which: str, side: str) -> int | None:
        """Number of live cones on a side, or None when infinite."""
        center, base, carved = self._data(which)
        if _side_digit(side) in center.per:
            return None
        bound = max(len(center.pre), len(base))
        return sum(
            1
            for j in range(len(base), bound)
            if center.digit(j) == _side_digit(side) and self._is_live(which, j)
        )

    def src_position_of(self, x: EpPoint) -> int:
        j = first_disagreement(x, self.p)
        if j is None or j < len(self.base_p) or not self._is_live("src", j):
            raise DomainError(f"{x} not in the radial territory of {self}")
        return j

    def matched_dst_position(self, j: int) -> int:
        if self.mode == "unordered":
            side = tgt = None
        else:
            side = "left" if self.p.digit(j) == "1" else "right"
            tgt = _other(side) if self.swap_sides else side
        m = self._live_index("src", side, j)
        return self._nth_live("dst", tgt, m)

    def src_cone_at(self, j: int) -> str:
        return self.p.expand(j) + flip(self.p.digit(j))

    def dst_cone_at(self, j: int) -> str:
        return self.q.expand(j) + flip(self.q.digit(j))

    def apply(self, x: EpPoint) -> EpPoint:
        if x == self.p:
            return self.q
        j = self.src_position_of(x)
        j2 = self.matched_dst_position(j)
        tail = x.drop(j + 1)
        return ep(self.dst_cone_at(j2) + tail.pre, tail.per)

    def inverse(self) -> "SingularAssignment":
        return SingularAssignment(
            self.q, self.p, self.base_q, self.base_p,
            self.mode, self.swap_sides, self.carved_q, self.carved_p,
        )

    # ------------------------------------------------------ materializing

    def territory_src(self) -> tuple[str, ...]:
        return cone_complement_in(self.base_p, self.carved_p)

    def territory_dst(self) -> tuple[str, ...]:
        return cone_complement_in(self.base_q, self.carved_q)

    def materialize_first(self) -> tuple[ConePiece, "SingularAssignment"]:
        """Split off the positionally first live source cone as an explicit piece."""
        j = self._nth_live("src", None, 0)
        j2 = self.matched_dst_position(j)
        piece = ConePiece(self.src_cone_at(j), self.dst_cone_at(j2))
        sa = replace(
            self,
            carved_p=self.carved_p + (piece.src,),
            carved_q=self.carved_q + (piece.dst,),
        )
        return piece, sa._normalized()

    def _normalized(self) -> "SingularAssignment":
        """Fold carves adjacent to a base into a deeper base."""
        sa = self
        while True:
            jp, jq = len(sa.base_p), len(sa.base_q)
            wp = sa.p.expand(jp) + flip(sa.p.digit(jp))
            wq = sa.q.expand(jq) + flip(sa.q.digit(jq))
            new = sa
            if wp in sa.carved_p:
                new = replace(
                    new,
                    base_p=sa.p.expand(jp + 1),
                    carved_p=tuple(w for w in new.carved_p if w != wp),
                )
            if wq in sa.carved_q:
                new = replace(
                    new,
                    base_q=sa.q.expand(jq + 1),
                    carved_q=tuple(w for w in new.carved_q if w != wq),
                )
            if new == sa:
                return sa
            sa = new

    def deepen_to(self, depth: int) -> tuple[list[ConePiece], "SingularAssignment"]:
        """Materialize leading cones until the source base reaches the given length."""
        sa, out = self, []
        while len(sa.base_p) < depth:
            piece, sa = sa.materialize_first()
            out.append(piece)
        return out, sa


def _partition_failure(words) -> str | None:
    """None if the words form a complete prefix code of 2^omega.

    In lexicographic order a prefix containment always appears between
    adjacent entries, so one sorted pass suffices.
    """
    ws = sorted(words)
    for w, v in zip(ws, ws[1:]):
        if v.startswith(w):
            return f"overlap: [{w or 'e'}] meets [{v or 'e'}]"
    if not ws:
        return "empty family"
    depth = max(len(w) for w in ws)
    total = sum(2 ** (depth - len(w)) for w in ws)
    if total != 2 ** depth:
        return f"gap: covers {total} of 2^{depth} atoms at depth {depth}"
    return None


@dataclass(frozen=True)
class MapCertificate:
    clauses: dict
    constant_c: int

    @property
    def ok(self) -> bool:
        return all(v.get("pass") for v in self.clauses.values())

    def failed_clauses(self):
        return [k for k, v in self.clauses.items() if not v.get("pass")]


@dataclass(frozen=True)
class PiecewiseConeHomeo:
    pieces: tuple[ConePiece, ...]
    singulars: tuple[SingularAssignment, ...] = ()

    def __repr__(self):
        return (
            f"PiecewiseConeHomeo({len(self.pieces)} pieces,"
            f" {len(self.singulars)} singulars)"
        )

    @staticmethod
    def identity() -> "PiecewiseConeHomeo":
        return PiecewiseConeHomeo((ConePiece("", ""),))

    @staticmethod
    def of(pairs, singulars=()) -> "PiecewiseConeHomeo":
        pieces = tuple(sorted((ConePiece(s, t) for s, t in pairs), key=lambda c: c.src))
        h = PiecewiseConeHomeo(pieces, tuple(singulars))
        err = h.partition_failure()
        if err:
            raise InvalidMap(err)
        return h

    # ------------------------------------------------------------ structure

    def source_words(self):
        out = [p.src for p in self.pieces]
        for sa in self.singulars:
            out.extend(sa.territory_src())
        return out

    def target_words(self):
        out = [p.dst for p in self.pieces]
        for sa in self.singulars:
            out.extend(sa.territory_dst())
        return out

    def partition_failure(self) -> str | None:
        err = _partition_failure(self.source_words())
        if err:
            return f"source not a partition ({err})"
        err = _partition_failure(self.target_words())
        if err:
            return f"target not a partition ({err})"
        return None

    def region_of(self, x: EpPoint):
        for sa in self.singulars:
            if x == sa.p:
                return ("center", sa)
        for sa in self.singulars:
            if x.starts_with(sa.base_p) and not any(
                x.starts_with(w) for w in sa.carved_p
            ):
                return ("radial", sa)
        for p in self.pieces:
            if x.starts_with(p.src):
                return ("piece", p)
        raise InvalidMap(f"no region contains {x}")

    def apply(self, x: EpPoint) -> EpPoint:
        _, r = self.region_of(x)
        return r.apply(x)

    def inverse(self) -> "PiecewiseConeHomeo":
        return PiecewiseConeHomeo(
            tuple(sorted((p.inverse() for p in self.pieces), key=lambda c: c.src)),
            tuple(sa.inverse() for sa in self.singulars),
        )

    # ------------------------------------------------------------- images

    def _singular_extremes(self, sa: SingularAssignment, w: str):
        """Min and max of the image of territory(sa) intersected with [w] inside base."""
        if sa.p.starts_with(w):
            # {q} plus the matched cones of all live source positions >= len(w)
            lo = hi = sa.q
            if sa.mode == "unordered":
                j = sa.first_live_at_or_after("src", None, len(w))
                if j is not None:
                    j2 = sa.matched_dst_position(j)
                    below = sa.first_live_at_or_after("dst", "left", j2)
                    above = sa.first_live_at_or_after("dst", "right", j2)
                    if below is not None:
                        lo = ep(sa.dst_cone_at(below), "0")
                    if above is not None:
                        hi = ep(sa.dst_cone_at(above), "1")
            else:
                for side in ("left", "right"):
                    j = sa.first_live_at_or_after("src", side, len(w))
                    if j is None:
                        continue
                    j2 = sa.matched_dst_position(j)
                    lo = min(lo, ep(sa.dst_cone_at(j2), "0"))
                    hi = max(hi, ep(sa.dst_cone_at(j2), "1"))
            return lo, hi
        # [w] sits inside a single live radial cone: a plain translation
        j = min(
            k for k in range(len(w)) if k >= len(sa.base_p) and w[k] != sa.p.digit(k)
        )
        j2 = sa.matched_dst_position(j)
        img = sa.dst_cone_at(j2) + w[j + 1 :]
        return ep(img, "0"), ep(img, "1")

    def image_extremes(self, w: str) -> tuple[EpPoint, EpPoint]:
        """Exact min and max of the image of the cone [w]."""
        los, his = [], []
        for p in self.pieces:
            if p.src.startswith(w):
                los.append(ep(p.dst, "0"))
                his.append(ep(p.dst, "1"))
            elif w.startswith(p.src):
                img = p.dst + w[len(p.src):]
                los.append(ep(img, "0"))
                his.append(ep(img, "1"))
        for sa in self.singulars:
            if sa.base_p.startswith(w):
                cones = sa.territory_dst()
                los.append(min(ep(c, "0") for c in cones))
                his.append(max(ep(c, "1") for c in cones))
            elif w.startswith(sa.base_p):
                if any(w.startswith(c) for c in sa.carved_p):
                    continue  # inside an explicitly carved cone; a piece covers it
                lo, hi = self._singular_extremes(sa, w)
                los.append(lo)
                his.append(hi)
        if not los:
            raise InvalidMap(f"no region meets [{w}]")
        return min(los), max(his)

    def image_diameter_exponent(self, w: str) -> int:
        """Largest L with the image of [w] inside a cone of length L."""
        lo, hi = self.image_extremes(w)
        d = first_disagreement(lo, hi)
        return 10 ** 9 if d is None else d

    # ----------------------------------------------------------- validate

    def validate(self, depth: int = 12) -> MapCertificate:
        clauses = {}
        err = _partition_failure(self.source_words())
        clauses["source-partition"] = {"pass": err is None, "detail": err or "ok"}
        err = _partition_failure(self.target_words())
        clauses["target-partition"] = {"pass": err is None, "detail": err or "ok"}

        sing_err = None
        for sa in self.singulars:
            try:
                sa.check_matchable()
            except InvalidMap as e:
                sing_err = str(e)
        clauses["singular-consistency"] = {
            "pass": sing_err is None,
            "detail": sing_err or "ok",
        }

        mono_err = None
        for sa in self.singulars:
            if sa.mode == "ordered" and sa.swap_sides:
                mono_err = f"{sa}: left cones matched to right cones"
        clauses["monotonicity"] = {"pass": mono_err is None, "detail": mono_err or "ok"}

        c = 0
        structural_ok = (
            clauses["source-partition"]["pass"]
            and clauses["target-partition"]["pass"]
            and sing_err is None
        )
        shrink_ok = structural_ok
        if structural_ok:
            boundary = {p.src for p in self.pieces} | {sa.base_p for sa in self.singulars}
            for k in range(depth + 1):
                atoms = {w[:k] for w in boundary if len(w) >= k}
                atoms |= {sa.p.expand(k) for sa in self.singulars}
                for a in atoms:
                    c = max(c, k - self.image_diameter_exponent(a))
            for sa in self.singulars:
                start = len(sa.base_p)
                exps = [
                    self.image_diameter_exponent(sa.p.expand(k))
                    for k in range(start, start + 6)
                ]
                if any(b < a for a, b in zip(exps, exps[1:])):
                    shrink_ok = False
        clauses["modulus"] = {
            "pass": shrink_ok,
            "detail": f"computed distortion constant {c} to depth {depth}",
        }
        return MapCertificate(clauses, c)


# -------------------------------------------------------------- composition


@dataclass(frozen=True)
class DeferredComposition:
    """Lazy outer(inner(x)), used past the piece cap; evaluation stays exact."""

    outer: object
    inner: object

    def apply(self, x: EpPoint) -> EpPoint:
        return self.outer.apply(self.inner.apply(x))

    def inverse(self) -> "DeferredComposition":
        return DeferredComposition(self.inner.inverse(), self.outer.inverse())


class _Defer(Exception):
    pass


def compose(g, h, cap: int = COMPOSE_PIECE_CAP):
    """The map x |-> g(h(x)), concrete whenever the regions align finitely."""
    if isinstance(g, DeferredComposition) or isinstance(h, DeferredComposition):
        return DeferredComposition(g, h)
    try:
        return _compose_concrete(g, h, cap)
    except (_Defer, InvalidMap):
        return DeferredComposition(g, h)


def _compose_concrete(g: PiecewiseConeHomeo, h: PiecewiseConeHomeo, cap: int):
    pieces: list[ConePiece] = []
    singulars: list[SingularAssignment] = []

    def g_regions_meeting(w: str):
        for p in g.pieces:
            if p.src.startswith(w) or w.startswith(p.src):
                yield ("piece", p)
        for sa in g.singulars:
            if sa.base_p.startswith(w):
                yield ("singular", sa)
            elif w.startswith(sa.base_p) and not any(
                w.startswith(c) for c in sa.carved_p
            ):
                yield ("singular", sa)

    def compose_piece(src: str, dst: str):
        """g restricted to [dst], pulled back through the translation src -> dst."""
        for kind, r in g_regions_meeting(dst):
            if kind == "piece":
                if dst.startswith(r.src):
                    pieces.append(ConePiece(src, r.dst + dst[len(r.src):]))
                else:
                    pieces.append(ConePiece(src + r.src[len(dst):], r.dst))
                continue
            sa = r
            if sa.base_p.startswith(dst):
                rel = sa.base_p[len(dst):]
                tail = sa.p.drop(len(sa.base_p))
                singulars.append(
                    replace(
                        sa,
                        p=ep(src + rel + tail.pre, tail.per),
                        base_p=src + rel,
                        carved_p=tuple(src + c[len(dst):] for c in sa.carved_p),
                    )
                )
            else:  # dst strictly inside the singular base
                if sa.carved_p or sa.carved_q or sa.mode == "ordered":
                    raise _Defer
                if sa.p.starts_with(dst):
                    off = len(dst) - len(sa.base_p)
                    tail = sa.p.drop(len(dst))
                    singulars.append(
                        SingularAssignment(
                            p=ep(src + tail.pre, tail.per),
                            q=sa.q,
                            base_p=src,
                            base_q=sa.q.expand(len(sa.base_q) + off),
                            mode="unordered",
                        )
                    )
                else:
                    j = min(
                        k
                        for k in range(len(dst))
                        if k >= len(sa.base_p) and dst[k] != sa.p.digit(k)
                    )
                    j2 = sa.matched_dst_position(j)
                    pieces.append(ConePiece(src, sa.dst_cone_at(j2) + dst[j + 1:]))
            if len(pieces) > cap:
                raise _Defer

    for p in h.pieces:
        compose_piece(p.src, p.dst)

    for sa in h.singulars:
        regions = set()
        for w in sa.territory_dst():
            regions.update(g_regions_meeting(w))
        if len(regions) != 1:
            raise _Defer
        kind, r = regions.pop()
        if kind == "piece":
            if not sa.base_q.startswith(r.src):
                raise _Defer
            tail = sa.q.drop(len(r.src))
            singulars.append(
                replace(
                    sa,
                    q=ep(r.dst + tail.pre, tail.per),
                    base_q=r.dst + sa.base_q[len(r.src):],
                    carved_q=tuple(r.dst + c[len(r.src):] for c in sa.carved_q),
                )
            )
        else:
            g_sa = r
            if sa.q != g_sa.p or sa.mode != g_sa.mode:
                raise _Defer
            if (sa.base_q, sa.carved_q) != (g_sa.base_p, g_sa.carved_p):
                raise _Defer
            singulars.append(
                SingularAssignment(
                    p=sa.p,
                    q=g_sa.q,
                    base_p=sa.base_p,
                    base_q=g_sa.base_q,
                    mode=sa.mode,
                    swap_sides=sa.swap_sides != g_sa.swap_sides,
                    carved_p=sa.carved_p,
                    carved_q=g_sa.carved_q,
                )
            )

    if len(pieces) > cap:
        raise _Defer
    out = PiecewiseConeHomeo(
        tuple(sorted(pieces, key=lambda c: c.src)), tuple(singulars)
    )
    if out.partition_failure():
        raise _Defer
    return out


# -------------------------------------------------------------- monotone_at


@dataclass(frozen=True)
class MonotoneResult:
    monotone: bool
    increasing: bool | None = None
    a: EpPoint | None = None
    b: EpPoint | None = None
    reason: str = ""

    def __bool__(self):
        return self.monotone


def _witness_below(center: EpPoint, min_pos: int) -> EpPoint | None:
    """A point a < center with (a, center) inside flip cones at positions >= min_pos."""
    for j in range(min_pos, min_pos + len(center.pre) + 2 * len(center.per) + 2):
        if center.digit(j) == "1":
            return ep(center.expand(j) + "0", "1")
    return None


def _witness_above(center: EpPoint, min_pos: int) -> EpPoint | None:
    for j in range(min_pos, min_pos + len(center.pre) + 2 * len(center.per) + 2):
        if center.digit(j) == "0":
            return ep(center.expand(j) + "1", "0")
    return None


def _jump_witness(h, x: EpPoint, below: bool):
    """Vacuous witness across an order jump: the interval to the neighbor is empty."""
    try:
        return x.predecessor() if below else x.successor()
    except DomainError:
        return MonotoneResult(False, reason="no points on one side")


def _eventual_side_relation(sa: SingularAssignment):
    """'same', 'opposite' or 'mixed' side matching of an unordered scheme, eventually."""
    skip = len(sa.carved_p) + len(sa.carved_q)
    start = skip + len(sa.p.pre) + len(sa.q.pre) + len(sa.base_p) + len(sa.base_q)
    window = lcm(len(sa.p.per), len(sa.q.per))
    rel = set()
    for m in range(start, start + window):
        j = sa._nth_live("src", None, m)
        j2 = sa.matched_dst_position(j)
        rel.add(sa.p.digit(j) == sa.q.digit(j2))
    if rel == {True}:
        return "same", start
    if rel == {False}:
        return "opposite", start
    return "mixed", start


def monotone_at(h, x: EpPoint) -> MonotoneResult:
    """Decide the local order behavior of h at x, with explicit witnesses a < x < b.

    Exact for piecewise cone maps: near x the map is a translation, a radial
    scheme, or has an order jump that finitely many image bounds resolve.
    """
    if x in (ZERO, ONE):
        raise DomainError("monotone_at is undefined at the endpoints of 2^omega")
    kind, region = h.region_of(x)

    if kind == "center":
        sa = region
        if sa.mode == "ordered":
            increasing = not sa.swap_sides
            lo = len(sa.base_p)
            a = _witness_below(sa.p, lo) or _jump_witness(h, sa.p, below=True)
            b = _witness_above(sa.p, lo) or _jump_witness(h, sa.p, below=False)
            if isinstance(a, MonotoneResult):
                return a
            if isinstance(b, MonotoneResult):
                return b
            return MonotoneResult(True, increasing, a, b)
        relation, start = _eventual_side_relation(sa)
        if relation == "mixed":
            return MonotoneResult(False, reason=f"{sa}: radial cones cross sides")
        m0 = sa._nth_live("src", None, start)
        a = _witness_below(sa.p, m0)
        b = _witness_above(sa.p, m0)
        if a is None or b is None:
            return MonotoneResult(False, reason="missing side near the center")
        return MonotoneResult(True, relation == "same", a, b)

    if kind == "piece":
        s = region.src
    else:
        s = region.src_cone_at(region.src_position_of(x))

    a = _witness_below(x, len(s)) or _jump_witness(h, x, below=True)
    b = _witness_above(x, len(s)) or _jump_witness(h, x, below=False)
    if isinstance(a, MonotoneResult):
        return a
    if isinstance(b, MonotoneResult):
        return b
    return MonotoneResult(True, True, a, b)


# ----------------------------------------------------- interval order isos


@dataclass(frozen=True)
class IntervalOrderIso:
    """Order isomorphism [a,b] -> [c,d] built from matched Z-indexed cones.

    Sends a to c, b to d, and the n-th decomposition cone of (a,b) onto the
    n-th cone of (c,d) by the cone translation, so tail classes are carried
    along everywhere except possibly at the four endpoints.
    """

    a: EpPoint
    b: EpPoint
    c: EpPoint
    d: EpPoint

    def _decomps(self):
        from .clopen import IntervalDecomposition

        return (
            IntervalDecomposition(self.a, self.b, 0),
            IntervalDecomposition(self.c, self.d, 0),
        )

    def piece_pair(self, n: int) -> ConePiece:
        src, dst = self._decomps()
        return ConePiece(src.piece(n), dst.piece(n))

    def apply(self, x: EpPoint) -> EpPoint:
        if x == self.a:
            return self.c
        if x == self.b:
            return self.d
        src, _ = self._decomps()
        return self.piece_pair(src.member_index(x)).apply(x)

    def inverse(self) -> "IntervalOrderIso":
        return IntervalOrderIso(self.c, self.d, self.a, self.b)


def star_order_iso(a: EpPoint, b: EpPoint, c: EpPoint, d: EpPoint) -> IntervalOrderIso:
    """The canonical order isomorphism [a,b] -> [c,d] from matched decompositions.

    The left endpoints must not have immediate successors and the right ones
    no immediate predecessors, so both open intervals split into Z-indexed
    cone families.  Pieces are cone translations, so any saturated set with
    matching endpoint membership is carried onto itself exactly.
    """
    if not a < b or not c < d:
        raise DomainError("need a < b and c < d")
    for e, side in ((a, "left"), (c, "left"), (b, "right"), (d, "right")):
        if side == "left" and e.per == "1":
            raise UnsupportedCase(f"left endpoint {e} has an immediate successor")
        if side == "right" and e.per == "0":
            raise UnsupportedCase(f"right endpoint {e} has an immediate predecessor")
    return IntervalOrderIso(a, b, c, d)
