"""Matched-partition covers around finite anchor sets.

A cover pairs a partition of [src_root] minus the anchor set A with a
partition of [dst_root] minus B = h[A]: around each anchor the partition is
the lazy radial scheme, matched index-by-index (or side-by-side in the
ordered regime) with the scheme around its image, and the finitely many
residual cones are paired explicitly.  Any per-piece pasting of bijections
then extends h continuously at the anchors; the certificate checks this as
an explicit modulus with the cover's computed distortion constant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .clopen import cone_complement_in, split_to_depth
from .conemaps import ConePiece, PiecewiseConeHomeo, SingularAssignment
from .errors import DomainError, InvalidMap, UnsupportedCase
from .points import EpPoint, flip


def _lcp_with(word: str, x: EpPoint) -> int:
    """Leading digits of the word agreeing with the point's expansion."""
    e = x.expand(len(word))
    n = 0
    while n < len(word) and word[n] == e[n]:
        n += 1
    return n


@dataclass(frozen=True)
class AnchorScheme:
    a: EpPoint
    b: EpPoint
    base_a: str
    base_b: str

    def singular(self, regime: str, carved_a=(), carved_b=()) -> SingularAssignment:
        return SingularAssignment(
            self.a,
            self.b,
            self.base_a,
            self.base_b,
            mode="ordered" if regime == "ordered" else "unordered",
            carved_p=tuple(carved_a),
            carved_q=tuple(carved_b),
        )


@dataclass(frozen=True)
class KRCover:
    regime: str
    src_root: str
    dst_root: str
    anchors: tuple[AnchorScheme, ...]
    residual_pairs: tuple[tuple[str, str], ...]
    overrides: tuple[tuple[str, str], ...] = ()
    constant_c: int = 2

    @property
    def anchor_map(self):
        return {s.a: s.b for s in self.anchors}

    def explicit_pairs(self):
        return list(self.residual_pairs) + list(self.overrides)

    def _carves_for(self, scheme: AnchorScheme):
        """Override cones inside an anchor base become carves of its scheme."""
        carved_a, carved_b = [], []
        for s, t in self.overrides:
            if s.startswith(scheme.base_a) and s != scheme.base_a:
                carved_a.append(s)
        sa0 = scheme.singular(self.regime)
        for s, t in self.overrides:
            if s.startswith(scheme.base_a) and s != scheme.base_a:
                j = len(s) - 1
                carved_b.append(sa0.dst_cone_at(sa0.matched_dst_position(j)))
        return tuple(carved_a), tuple(carved_b)

    def fragments(self):
        """Explicit pieces and singular assignments realizing the cover."""
        pieces = [ConePiece(s, t) for s, t in self.explicit_pairs()]
        singulars = []
        for scheme in self.anchors:
            carved_a, carved_b = self._carves_for(scheme)
            singulars.append(scheme.singular(self.regime, carved_a, carved_b))
        return pieces, singulars

    def to_map(self) -> PiecewiseConeHomeo:
        """Total map when the cover spans the whole space."""
        if self.src_root or self.dst_root:
            raise DomainError("only full-space covers assemble into a total map")
        pieces, singulars = self.fragments()
        return PiecewiseConeHomeo(
            tuple(sorted(pieces, key=lambda c: c.src)), tuple(singulars)
        )


def _assign_bases(root: str, pairs, min_base, per_anchor_min):
    """Recursive separation: each anchor gets the maximal subcone it owns alone."""
    if len(pairs) == 1:
        a = pairs[0][0]
        d = max(min_base, len(root), per_anchor_min(a))
        base = a.expand(d)
        return {a: base}, list(cone_complement_in(root, [base]))
    at = len(root)
    left = [p for p in pairs if p[0].digit(at) == "0"]
    right = [p for p in pairs if p[0].digit(at) == "1"]
    if left and right:
        bl, rl = _assign_bases(root + "0", left, min_base, per_anchor_min)
        br, rr = _assign_bases(root + "1", right, min_base, per_anchor_min)
        return {**bl, **br}, rl + rr
    digit = "0" if left else "1"
    inner, res = _assign_bases(root + digit, pairs, min_base, per_anchor_min)
    return inner, [root + flip(digit)] + res


def _segment_of(word: str, sorted_bases) -> int:
    return sum(1 for b in sorted_bases if b < word)


def _pair_residuals(src, dst, regime, src_bases, dst_bases):
    """Cardinality-balanced pairing; ordered regime pairs within anchor segments."""
    if regime == "ordered":
        groups = {}
        for w in sorted(src):
            groups.setdefault(("s", _segment_of(w, src_bases)), []).append(w)
        for w in sorted(dst):
            groups.setdefault(("d", _segment_of(w, dst_bases)), []).append(w)
        pairs = []
        for seg in range(len(src_bases) + 1):
            ws = groups.get(("s", seg), [])
            wt = groups.get(("d", seg), [])
            if bool(ws) != bool(wt):
                raise UnsupportedCase(
                    f"ordered cover: segment {seg} present on one side only"
                )
            pairs.extend(_balance_and_zip(ws, wt))
        return tuple(pairs)
    if bool(src) != bool(dst):
        raise UnsupportedCase("residual cones on one side only")
    return tuple(_balance_and_zip(sorted(src), sorted(dst)))


def _balance_and_zip(ws, wt):
    ws, wt = list(ws), list(wt)
    while len(ws) < len(wt):
        w = ws.pop()
        ws.extend([w + "0", w + "1"])
        ws.sort()
    while len(wt) < len(ws):
        w = wt.pop()
        wt.extend([w + "0", w + "1"])
        wt.sort()
    return list(zip(ws, wt))


BUILD_HORIZON = 32


def _distortion_constant(anchors, pairs, regime) -> int:
    """Worst source-versus-image depth lag, exact to the build horizon.

    Matched radial positions can lag linearly when the anchor periods have
    different digit densities, so the constant is computed rather than fixed;
    2 is the floor for balanced covers.
    """
    c = 2
    for s in anchors:
        for src, dst in pairs:
            c = max(c, _lcp_with(src, s.a) - _lcp_with(dst, s.b))
            c = max(c, _lcp_with(dst, s.b) - _lcp_with(src, s.a))
        sa = s.singular(regime)
        for scheme in (sa, sa.inverse()):
            for j in range(len(scheme.base_p), BUILD_HORIZON):
                if scheme._is_live("src", j):
                    c = max(c, j - scheme.matched_dst_position(j))
    return c


def build_kr_cover(
    pairs,
    regime: str = "plain",
    min_depth: int = 1,
    src_root: str = "",
    dst_root: str = "",
) -> KRCover:
    """Build a cover for the finite anchor bijection {a -> b} inside matched roots.

    Anchors are separated by the recursive tree, each owning the maximal
    subcone around it; the radial schemes around a and b are matched piece
    by piece, and residual cones are balanced by splitting and paired in
    sorted order (segment by segment between anchors in the ordered regime).
    Every explicit piece is split to word length >= min_depth.
    """
    pairs = list(pairs)
    if not pairs:
        raise DomainError("anchor set must be nonempty")
    if len({a for a, _ in pairs}) != len(pairs) or len({b for _, b in pairs}) != len(pairs):
        raise DomainError("anchor assignment must be a bijection")
    for a, b in pairs:
        if not a.starts_with(src_root):
            raise DomainError(f"anchor {a} outside source root [{src_root}]")
        if not b.starts_with(dst_root):
            raise DomainError(f"target {b} outside target root [{dst_root}]")
    if regime not in ("plain", "ordered"):
        raise DomainError(f"unknown regime {regime!r}")

    if regime == "ordered":
        pairs.sort(key=lambda p: p[0])
        for (a1, b1), (a2, b2) in zip(pairs, pairs[1:]):
            if not b1 < b2:
                raise UnsupportedCase("ordered cover needs an order-preserving anchor map")
        for a, b in pairs:
            if a.q_kind != b.q_kind:
                raise UnsupportedCase(
                    f"ordered cover: {a} and {b} have different jump structure"
                )

    def per_anchor_min(x: EpPoint, _side_pre={}):
        need = len(x.pre) if (regime == "ordered" and x.q_kind) else 0
        return max(need, min_depth - 1)

    src_pairs = [(a, b) for a, b in pairs]
    dst_pairs = [(b, a) for a, b in pairs]
    src_bases, src_res = _assign_bases(src_root, src_pairs, min_depth - 1, per_anchor_min)
    dst_bases, dst_res = _assign_bases(dst_root, dst_pairs, min_depth - 1, per_anchor_min)

    # a side with no residual cones cannot absorb the other side's: deepen the
    # last anchor base one level at a time to free sibling cones
    for bases, res, key in ((src_bases, src_res, 0), (dst_bases, dst_res, 1)):
        other = dst_res if key == 0 else src_res
        guard = 0
        while not res and other:
            x = sorted(bases)[-1]
            base = bases[x]
            bases[x] = x.expand(len(base) + 1)
            res.append(base + flip(x.digit(len(base))))
            guard += 1
            if guard > 64:
                raise UnsupportedCase("cannot balance residual cones")

    src_res = [w for cone in src_res for w in split_to_depth(cone, min_depth)]
    dst_res = [w for cone in dst_res for w in split_to_depth(cone, min_depth)]

    anchors = tuple(
        AnchorScheme(a, b, src_bases[a], dst_bases[b])
        for a, b in sorted(pairs, key=lambda p: p[0])
    )
    residual = _pair_residuals(
        src_res,
        dst_res,
        regime,
        sorted(src_bases.values()),
        [dst_bases[b] for a, b in sorted(pairs, key=lambda p: p[0])],
    )
    cover = KRCover(
        regime=regime,
        src_root=src_root,
        dst_root=dst_root,
        anchors=anchors,
        residual_pairs=residual,
        constant_c=_distortion_constant(anchors, residual, regime),
    )
    for scheme in cover.anchors:
        scheme.singular(regime).check_matchable()
    return cover


# ------------------------------------------------------------- verification


@dataclass(frozen=True)
class CoverCertificate:
    clauses: dict

    @property
    def ok(self) -> bool:
        return all(v.get("pass") for v in self.clauses.values())

    def failed_clauses(self):
        return [k for k, v in self.clauses.items() if not v.get("pass")]


def _partition_of_root(words, root: str) -> str | None:
    rel = []
    for w in words:
        if not w.startswith(root):
            return f"[{w or 'e'}] outside root [{root or 'e'}]"
        rel.append(w[len(root):])
    ws = sorted(rel)
    for w, v in zip(ws, ws[1:]):
        if v.startswith(w):
            return f"overlap at [{root + w}]"
    depth = max((len(w) for w in ws), default=0)
    if sum(2 ** (depth - len(w)) for w in ws) != 2 ** depth:
        return "gap in the partition"
    return None


def verify_kr_cover(cover: KRCover, depth: int = 12) -> CoverCertificate:
    """Re-derive conditions (1)-(4) from the stored cover data.

    (1)/(2): the explicit pieces plus anchor bases partition each root;
    (3): the piece matching is a bijection; (4): for every anchor and every
    k <= depth, pieces within 2^-k of the anchor have images within
    2^-(k - c) of its target, and symmetrically for the inverse.
    """
    clauses = {}
    pieces, singulars = cover.fragments()

    src_words = [p.src for p in pieces] + [w for sa in singulars for w in sa.territory_src()]
    err = _partition_of_root(src_words, cover.src_root)
    for sch in cover.anchors:
        if err:
            break
        others = [o for o in cover.anchors if o is not sch]
        if any(o.a.starts_with(sch.base_a) for o in others):
            err = f"base [{sch.base_a}] captures a second anchor"
    clauses["1"] = {"pass": err is None, "detail": err or "ok"}

    dst_words = [p.dst for p in pieces] + [w for sa in singulars for w in sa.territory_dst()]
    err = _partition_of_root(dst_words, cover.dst_root)
    clauses["2"] = {"pass": err is None, "detail": err or "ok"}

    err = None
    seen_src, seen_dst = set(), set()
    for s, t in cover.explicit_pairs():
        if s in seen_src or t in seen_dst:
            err = f"piece [{s}] or image [{t}] matched twice"
        seen_src.add(s)
        seen_dst.add(t)
    for sa in singulars:
        try:
            sa.check_matchable()
        except InvalidMap as e:
            err = str(e)
    clauses["3"] = {"pass": err is None, "detail": err or "ok"}

    err = None
    if clauses["1"]["pass"] and clauses["2"]["pass"]:
        err = _modulus_failure(cover, pieces, singulars, depth)
    clauses["4"] = {
        "pass": err is None,
        "detail": err or f"modulus holds to depth {depth} with c={cover.constant_c}",
    }

    if cover.regime == "ordered":
        err = _ordered_failure(cover, pieces)
        clauses["ordered"] = {"pass": err is None, "detail": err or "ok"}
    return CoverCertificate(clauses)


def _modulus_failure(cover, pieces, singulars, depth) -> str | None:
    c = cover.constant_c
    for direction in ("fwd", "inv"):
        schemes = singulars if direction == "fwd" else [sa.inverse() for sa in singulars]
        expl = pieces if direction == "fwd" else [p.inverse() for p in pieces]
        for sa in schemes:
            for piece in expl:
                k = min(_lcp_with(piece.src, sa.p), depth)
                if _lcp_with(piece.dst, sa.q) < k - c:
                    return (
                        f"piece [{piece.src}] at distance 2^-{k} from {sa.p} maps to"
                        f" [{piece.dst}], too far from {sa.q} ({direction})"
                    )
            # live radial cones: matched positions must not lag more than c
            probe = 0
            for j in range(len(sa.base_p), len(sa.base_p) + depth + 4):
                if not sa._is_live("src", j):
                    continue
                j2 = sa.matched_dst_position(j)
                if j2 < min(j, depth) - c:
                    return (
                        f"radial cone at depth {j + 1} around {sa.p} maps to depth"
                        f" {j2 + 1} around {sa.q} ({direction})"
                    )
                probe += 1
                if probe > depth + 4:
                    break
    return None


def _ordered_failure(cover, pieces) -> str | None:
    for (a1, b1), (a2, b2) in itertools.combinations(
        [(s.a, s.b) for s in cover.anchors], 2
    ):
        if (a1 < a2) != (b1 < b2):
            return f"anchor order broken: {a1},{a2} vs {b1},{b2}"
    regions = sorted(
        [(s, t) for s, t in cover.explicit_pairs()]
        + [(sch.base_a, sch.base_b) for sch in cover.anchors]
    )
    targets = [t for _, t in regions]
    if targets != sorted(targets):
        return "piece matching is not order-preserving"
    for sch in cover.anchors:
        if sch.a.q_kind != sch.b.q_kind:
            return f"jump structure differs at {sch.a} -> {sch.b}"
    return None


def combination_map(cover: KRCover, per_piece=None) -> PiecewiseConeHomeo:
    """Paste per-piece maps over the cover; unassigned pieces use the translation.

    per_piece maps a source cone word to its replacement target word; the
    replacement must stay inside the matched piece's image for the pasting
    to remain a bijection.
    """
    pieces, singulars = cover.fragments()
    if per_piece:
        out = []
        for p in pieces:
            if p.src in per_piece:
                out.append(ConePiece(p.src, per_piece[p.src]))
            else:
                out.append(p)
        pieces = out
    h = PiecewiseConeHomeo(
        tuple(sorted(pieces, key=lambda c: c.src)), tuple(singulars)
    )
    if cover.src_root == "" and cover.dst_root == "":
        err = h.partition_failure()
        if err:
            raise InvalidMap(err)
    return h


def refine_cover(cover: KRCover) -> KRCover:
    """Split every explicit piece into its two children; validity is preserved."""
    res = tuple(
        (s + d, t + d) for s, t in cover.residual_pairs for d in ("0", "1")
    )
    return replace(cover, residual_pairs=res)
