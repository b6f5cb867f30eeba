"""Stage-by-stage synthesis of self-homeomorphisms transporting dense sets.

The engine maintains a finite anchor table (points with pinned images) and a
matched cover of everything else by cone translations and radial schemes.
Each stage absorbs the next witness points and the next enumerated dense-set
point on both sides, rebuilding the cover only inside the pieces that were
touched.  Pieces not touched at a stage refine canonically: the translation
[s] -> [t] counts as the family [s+u] -> [t+u] at the stage's depth, so
covers stay polynomial while the certified conditions quantify over the
refined family.

Two regimes share the machinery: the plain regime uses unordered radial
schemes and free piece pairing; the ordered regime keeps every piece
matching order-coherent, uses interleaved (side-matched) schemes, and
certifies the extra monotonicity conditions.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field, replace

from .conemaps import ConePiece, PiecewiseConeHomeo, SingularAssignment, monotone_at
from .errors import DomainError, InstanceRejected, InvalidMap, UnsupportedCase
from .krcover import build_kr_cover
from .points import EpPoint, SetPresentation, ep, first_disagreement, flip

CANDIDATE_WINDOW = 50000


# ---------------------------------------------------------------- envelopes


def choose_envelopes(X: SetPresentation, D0: SetPresentation, D1: SetPresentation):
    """Saturated envelopes E_i = D_i plus one fresh tail class of X each.

    The fresh classes are the first two classes of X, in canonical primitive
    word order, disjoint from the saturation of D0 and D1; they make each
    E_i minus D_i dense, which the absorption's free choices rely on.
    """
    if not X.saturated:
        raise InstanceRejected("the ambient set must be saturated")
    for d in (D0, D1):
        if d.kind != "classes":
            raise InstanceRejected("dense sets must be presented as unions of classes")
        for c in d.classes:
            if not X.contains(c.rep):
                raise InstanceRejected(f"{c} is not inside the ambient set")
    used = set(D0.classes) | set(D1.classes)
    fresh = []
    for c in X.class_iter():
        if c not in used:
            fresh.append(c)
            if len(fresh) == 2:
                break
    if len(fresh) < 2:
        raise InstanceRejected("ambient set has too few classes to supply envelopes")
    e0 = SetPresentation("classes", classes=D0.classes + (fresh[0],))
    e1 = SetPresentation("classes", classes=D1.classes + (fresh[1],))
    return e0, e1


def gdelta_witness(X: SetPresentation, A: SetPresentation, n: int) -> list[EpPoint]:
    """K_n: the first n+1 enumerated points of X minus A (increasing in n)."""
    out = []
    for x in X.enum_iter():
        if not A.contains(x):
            out.append(x)
            if len(out) == n + 1:
                return out
    raise InstanceRejected("the complement enumeration ran dry")


def _round_robin_dedup(*iters):
    seen = set()
    its = [iter(i) for i in iters]
    while True:
        for it in its:
            x = next(it)
            if x not in seen:
                seen.add(x)
                yield x


def _cone_candidates(classes, root: str):
    """Round-robin enumeration of the classes' members inside [root]."""
    its = [c.enum_iter() for c in classes]
    seen = set()
    while True:
        for it in its:
            x = next(it).prepend(root)
            if x not in seen:
                seen.add(x)
                yield x


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class CdhInstance:
    """Transport problem: h[D0] = D1 and h[X] = X on a saturated ambient set."""

    X: SetPresentation
    D0: SetPresentation
    D1: SetPresentation
    E0: SetPresentation = field(init=False)
    E1: SetPresentation = field(init=False)

    regime = "plain"

    def __post_init__(self):
        e0, e1 = choose_envelopes(self.X, self.D0, self.D1)
        object.__setattr__(self, "E0", e0)
        object.__setattr__(self, "E1", e1)

    def in_envelope(self, x: EpPoint) -> bool:
        return self.E0.contains(x) or self.E1.contains(x)

    def in_residue(self, x: EpPoint) -> bool:
        """Membership in Y = X minus the envelopes."""
        return self.X.contains(x) and not self.in_envelope(x)

    def k_enum(self):
        for x in self.X.enum_iter():
            if not self.in_envelope(x):
                yield x

    def d_enum(self, side: int):
        """One shared enumeration of both envelopes drives both halves."""
        return _round_robin_dedup(
            self.D0.enum_iter(),
            self.D1.enum_iter(),
            self.E0.classes[-1].enum_iter(),
            self.E1.classes[-1].enum_iter(),
        )

    def candidates(self, side: int, root: str):
        """Absorption targets inside [root]: E1 points for the source half, E0
        for the inverse half.  Classes are enumerated cone-relatively (every
        class meets every cone in its prefix-prepended copies)."""
        e = self.E1 if side == 0 else self.E0
        return _cone_candidates(e.classes, root)

    def eligible(self, side: int, d: EpPoint, e: EpPoint) -> bool:
        """The matching rule: e lands in D iff d came from D, on matched sides."""
        if side == 0:
            return self.D1.contains(e) == self.D0.contains(d)
        return self.D0.contains(e) == self.D1.contains(d)

    def check(self, depth: int = 4):
        if not (self.D0.check_dense(depth) and self.D1.check_dense(depth)):
            raise InstanceRejected("dense sets fail the density probe")
        for e in (self.E0, self.E1):
            extra = SetPresentation("classes", classes=(e.classes[-1],))
            if not extra.check_dense(depth):
                raise InstanceRejected("envelope remainder fails the density probe")


@dataclass(frozen=True)
class OrderedInstance:
    """Transport problem with a saturated monotonicity set W kept pointwise stable."""

    D0: SetPresentation
    D1: SetPresentation
    W: SetPresentation
    colors: dict = field(default_factory=dict)

    regime = "ordered"

    def __post_init__(self):
        for d in (self.D0, self.D1):
            if d.kind != "classes":
                raise InstanceRejected("dense sets must be presented as unions of classes")
        if self.W.kind != "classes" or not self.W.saturated:
            raise InstanceRejected("the monotonicity set must be a saturated class union")
        w_cls = set(self.W.classes)
        if w_cls & (set(self.D0.classes) | set(self.D1.classes)):
            raise InstanceRejected("the monotonicity set meets a dense set")
        for c in self.W.classes:
            if c.rep.per in ("0", "1"):
                raise InstanceRejected("the monotonicity set meets the jump points")

    def color_of(self, x: EpPoint):
        for cls, color in self.colors.items():
            if cls.member(x):
                return color
        return ()

    def k_enum(self):
        return self.W.enum_iter()

    def d_enum(self, side: int):
        return (self.D0 if side == 0 else self.D1).enum_iter()

    def candidates(self, side: int, root: str):
        return _cone_candidates((self.D1 if side == 0 else self.D0).classes, root)

    def eligible(self, side: int, d: EpPoint, e: EpPoint) -> bool:
        if d.q_kind != e.q_kind:
            return False
        return self.color_of(d) == self.color_of(e)

    def check(self, depth: int = 4):
        if not (self.D0.check_dense(depth) and self.D1.check_dense(depth)):
            raise InstanceRejected("dense sets fail the density probe")


# -------------------------------------------------------------- stage state


@dataclass(frozen=True)
class Anchor:
    src: EpPoint
    dst: EpPoint
    base_src: str
    base_dst: str
    stage: int
    witness_src: str
    witness_dst: str
    carved_src: tuple[str, ...] = ()
    carved_dst: tuple[str, ...] = ()

    def singular(self, regime: str) -> SingularAssignment:
        return SingularAssignment(
            self.src,
            self.dst,
            self.base_src,
            self.base_dst,
            mode="ordered" if regime == "ordered" else "unordered",
            carved_p=self.carved_src,
            carved_q=self.carved_dst,
        )

    def swapped(self) -> "Anchor":
        return Anchor(
            self.dst, self.src, self.base_dst, self.base_src,
            self.stage, self.witness_dst, self.witness_src,
            self.carved_dst, self.carved_src,
        )


@dataclass(frozen=True)
class EngineState:
    n: int
    anchors: tuple[Anchor, ...]
    pieces: tuple[tuple[str, str], ...]
    events: tuple = ()

    @property
    def virtual_depth(self) -> int:
        """Pieces count as refined to this word length (diameter < 1/(n+1))."""
        return self.n + 1

    def homeo(self, regime: str) -> PiecewiseConeHomeo:
        return PiecewiseConeHomeo(
            tuple(ConePiece(s, t) for s, t in self.pieces),
            tuple(a.singular(regime) for a in self.anchors),
        )

    def swapped(self) -> "EngineState":
        return EngineState(
            self.n,
            tuple(a.swapped() for a in self.anchors),
            tuple((t, s) for s, t in self.pieces),
            self.events,
        )

    def anchor_by_src(self):
        return {a.src: a for a in self.anchors}


def initial_state() -> EngineState:
    return EngineState(0, (), (("", ""),))


class RegionIndex:
    """O(log n) region lookup over a state's prefix-free source cover.

    In a sorted prefix-free word list, the word covering a point is the
    rightmost word lexicographically at most the point's expansion.
    """

    def __init__(self, state: EngineState, regime: str, inverse: bool = False):
        view = state.swapped() if inverse else state
        entries = []
        for s, t in view.pieces:
            entries.append((s, ("piece", s, t)))
        self.schemes = []
        for a in view.anchors:
            sa = a.singular(regime)
            self.schemes.append((a, sa))
            for w in sa.territory_src():
                entries.append((w, ("anchor", a, sa)))
        entries.sort(key=lambda e: e[0])
        self.words = [w for w, _ in entries]
        self.payloads = [p for _, p in entries]
        self.maxlen = max((len(w) for w in self.words), default=0)
        self.centers = {a.src: a for a, _ in self.schemes}

    def locate(self, x: EpPoint):
        if x in self.centers:
            return ("center", self.centers[x], None)
        e = x.expand(self.maxlen + 1)
        i = bisect.bisect_right(self.words, e) - 1
        if i < 0 or not x.starts_with(self.words[i]):
            raise InvalidMap(f"no region contains {x}")
        p = self.payloads[i]
        if p[0] == "piece":
            return p
        _, a, sa = p
        return ("anchor", a, sa)


class _Absorber:
    """One half-stage: absorb points on the source side of the given state."""

    def __init__(self, run, state: EngineState, side: int):
        self.run = run
        self.side = side
        self.state = state if side == 0 else state.swapped()
        self.regime = run.instance.regime
        self.new_n = state.n + 1
        self.anchors = list(self.state.anchors)
        self.pieces = list(self.state.pieces)
        self.events = []

    # ------------------------------------------------------------ plumbing

    def _region_of(self, x: EpPoint):
        for i, a in enumerate(self.anchors):
            if x == a.src:
                return ("center", i)
        for i, a in enumerate(self.anchors):
            if x.starts_with(a.base_src) and not any(
                x.starts_with(c) for c in a.carved_src
            ):
                return ("radial", i)
        for i, (s, t) in enumerate(self.pieces):
            if x.starts_with(s):
                return ("piece", i)
        raise InvalidMap(f"no region contains {x}")

    def _materialize_radial(self, idx: int, depth: int):
        """Emit leading radial cones of an anchor until its live bases pass depth."""
        a = self.anchors[idx]
        sa = a.singular(self.regime)
        guard = 0
        while True:
            first_src = sa._nth_live("src", None, 0)
            first_dst = sa._nth_live("dst", None, 0)
            if first_src >= depth and first_dst >= depth:
                break
            piece, sa = sa.materialize_first()
            self.pieces.append((piece.src, piece.dst))
            guard += 1
            if guard > 4 * depth + 64:
                raise InstanceRejected("radial scheme failed to deepen")
        self.anchors[idx] = replace(
            a,
            base_src=sa.base_p,
            base_dst=sa.base_q,
            carved_src=sa.carved_p,
            carved_dst=sa.carved_q,
        )

    def deepen_all(self, depth: int):
        for i in range(len(self.anchors)):
            self._materialize_radial(i, depth)

    def _isolate_atom(self, piece_idx: int, w: EpPoint):
        """Split the containing piece down to the current refinement atom of w.

        The atom must be deep enough on both sides of the translation, so a
        source-shortening piece gets a correspondingly deeper source atom.
        """
        s, t = self.pieces.pop(piece_idx)
        v = self.state.virtual_depth
        depth = max(len(s), v, v + len(s) - len(t))
        s_atom = w.expand(depth)
        for i in range(len(s), len(s_atom)):
            sib = s_atom[:i] + flip(s_atom[i])
            self.pieces.append((sib, t + sib[len(s):]))
        return s_atom, t + s_atom[len(s):]

    def _existing_targets(self):
        return {a.dst for a in self.anchors}

    def _candidate_stream(self, d: EpPoint, root_dst: str):
        taken = self._existing_targets()
        cand = self.run.instance.candidates(self.side, root_dst)
        for _, e in zip(range(CANDIDATE_WINDOW), cand):
            if e in taken:
                continue
            if not self.run.instance.eligible(self.side, d, e):
                continue
            yield e

    # ----------------------------------------------------------- absorption

    def absorb(self, w: EpPoint, kind: str):
        """Pin the image of w, rebuilding the cover inside its refinement atom."""
        where = self._region_of(w)
        if where[0] == "center":
            self.events.append(
                {"point": repr(w), "kind": kind, "action": "already-absorbed"}
            )
            return
        if where[0] == "radial":
            self._materialize_radial(
                where[1], first_disagreement(w, self.anchors[where[1]].src) + 1
            )
            where = self._region_of(w)
            if where[0] != "piece":
                raise InvalidMap(f"{w} still unresolved after materializing")
        s_atom, t_atom = self._isolate_atom(where[1], w)
        regime = "ordered" if self.regime == "ordered" else "plain"
        if kind == "d":
            cover = target = None
            for e in self._candidate_stream(w, t_atom):
                try:
                    cover = build_kr_cover(
                        [(w, e)],
                        regime=regime,
                        min_depth=self.new_n + 1,
                        src_root=s_atom,
                        dst_root=t_atom,
                    )
                    target = e
                    break
                except UnsupportedCase:
                    continue
            if cover is None:
                raise InstanceRejected(
                    f"no eligible absorption target for {w} inside [{t_atom}]"
                )
        else:
            tail = w.drop(len(s_atom))
            target = ep(t_atom + tail.pre, tail.per)
            cover = build_kr_cover(
                [(w, target)],
                regime=regime,
                min_depth=self.new_n + 1,
                src_root=s_atom,
                dst_root=t_atom,
            )
        scheme = cover.anchors[0]
        self.anchors.append(
            Anchor(
                src=w,
                dst=target,
                base_src=scheme.base_a,
                base_dst=scheme.base_b,
                stage=self.new_n,
                witness_src=scheme.base_a,
                witness_dst=scheme.base_b,
            )
        )
        self.pieces.extend(cover.residual_pairs)
        self.events.append(
            {
                "point": repr(w),
                "kind": kind,
                "action": "absorbed",
                "target": repr(target),
                "atom": [s_atom, t_atom],
            }
        )

    def result(self) -> EngineState:
        state = EngineState(
            self.state.n,
            tuple(self.anchors),
            tuple(self.pieces),
            self.state.events,
        )
        return state if self.side == 0 else state.swapped()


def run_stage(run, state: EngineState) -> EngineState:
    """One full stage: witness points and the next dense points, both halves."""
    n = state.n
    k_points = run.k_prefix(n)
    stage_events = []
    for side in (0, 1):
        worker = _Absorber(run, state, side)
        worker.deepen_all(n + 1)
        for w in k_points:
            worker.absorb(w, "k")
        d = run.d_point(side, n)
        if d is not None:
            worker.absorb(d, "d")
        for ev in worker.events:
            ev["side"] = side
        stage_events.extend(worker.events)
        state = worker.result()
    return EngineState(
        n + 1,
        state.anchors,
        state.pieces,
        state.events + (tuple(stage_events),),
    )


# ----------------------------------------------------------------- the run


class SynthesisRun:
    """Evaluable limit object: drives stages on demand and resolves images.

    The stage maps form a Cauchy sequence by construction (piece diameters
    shrink and refinements stay inside their parents), so the limit image of
    any point is pinned down to arbitrarily long cones, exactly.
    """

    def __init__(self, instance):
        instance.check()
        self.instance = instance
        self.states: list[EngineState] = [initial_state()]
        self._d_enums = {0: [], 1: []}
        self._d_iters = {0: instance.d_enum(0), 1: instance.d_enum(1)}
        self._k_points: list[EpPoint] = []
        self._k_iter = instance.k_enum()
        self._indices: dict = {}

    def index(self, n: int, inverse: bool = False) -> RegionIndex:
        key = (n, inverse)
        if key not in self._indices:
            self._indices[key] = RegionIndex(self.drive(n), self.instance.regime, inverse)
        return self._indices[key]

    # --------------------------------------------------------- enumerations

    def k_prefix(self, n: int) -> list[EpPoint]:
        while len(self._k_points) < n + 1:
            self._k_points.append(next(self._k_iter))
        return self._k_points[: n + 1]

    def d_point(self, side: int, n: int) -> EpPoint | None:
        got = self._d_enums[side]
        while len(got) <= n:
            got.append(next(self._d_iters[side]))
        return got[n]

    # ---------------------------------------------------------------- drive

    def drive(self, n: int) -> EngineState:
        while len(self.states) <= n:
            self.states.append(run_stage(self, self.states[-1]))
        return self.states[n]

    def homeo(self, n: int) -> PiecewiseConeHomeo:
        return self.drive(n).homeo(self.instance.regime)

    # ------------------------------------------------------------- evaluate

    def _resolve(self, state: EngineState, x: EpPoint, k: int, inverse: bool):
        where = self.index(state.n, inverse).locate(x)
        if where[0] == "center":
            return ("point", where[1].dst)
        if where[0] == "anchor":
            sa = where[2]
            j = sa.src_position_of(x)
            j2 = sa.matched_dst_position(j)
            return self._cone_answer(
                x, sa.src_cone_at(j), sa.dst_cone_at(j2), state.virtual_depth, k
            )
        _, s, t = where
        return self._cone_answer(x, s, t, state.virtual_depth, k)

    @staticmethod
    def _cone_answer(x, s, t, depth, k):
        # expand just enough of the translation to reach depth k, never past
        # the stage's own refinement atom: deeper answers must come from later
        # stages, whose rebuilds stay inside these atoms
        atom_cap = max(len(s), depth, depth + len(s) - len(t))
        need = max(len(s), k + len(s) - len(t))
        src = x.expand(min(need, atom_cap))
        return ("cone", t + src[len(s):])

    def evaluate(self, x: EpPoint, k: int, inverse: bool = False):
        """Exact image if x is pinned; else the stage cone of length >= k.

        Returns ("point", image) or ("cone", word, stage): the first stage
        whose refined cover resolves x to depth k, so answers are nested as
        k grows.
        """
        for m in itertools.count():
            state = self.drive(m)
            kind, val = self._resolve(state, x, k, inverse)
            if kind == "point":
                return ("point", val)
            if len(val) >= k:
                return ("cone", val, m)
            if m > k + 64:
                raise DomainError(f"evaluation did not converge for {x} at depth {k}")


# -------------------------------------------------------------- certificates


@dataclass
class CertificateReport:
    clauses: dict

    @property
    def ok(self) -> bool:
        return all(v.get("pass") for v in self.clauses.values())

    def failed_clauses(self):
        return [k for k, v in self.clauses.items() if not v.get("pass")]


def _parent_translation(idx: RegionIndex, x: EpPoint):
    where = idx.locate(x)
    if where[0] == "center":
        return None
    if where[0] == "piece":
        return where[1], where[2]
    sa = where[2]
    j = sa.src_position_of(x)
    return sa.src_cone_at(j), sa.dst_cone_at(sa.matched_dst_position(j))


def _check_refinement(run, upto: int):
    """(f)+(h): stage pieces either continue their parent's translation or sit
    inside one parent refinement atom with the image inside the matched atom."""
    for m in range(1, upto + 1):
        old = run.states[m - 1]
        new = run.states[m]
        old_pieces = set(old.pieces)
        old_centers = {a.src for a in old.anchors}
        idx = run.index(m - 1)
        for s, t in new.pieces:
            if (s, t) in old_pieces:
                continue
            parent = _parent_translation(idx, ep(s, "01"))
            if parent is None:
                return f"stage {m}: piece [{s}] covers a pinned point"
            os, ot = parent
            if not s.startswith(os):
                return f"stage {m}: piece [{s}] escapes its parent [{os}]"
            v = old.virtual_depth
            atom_len = max(len(os), v, v + len(os) - len(ot))
            if len(s) >= atom_len:
                if not t.startswith(ot + s[len(os):atom_len]):
                    return f"stage {m}: image [{t}] escapes its parent atom image"
            elif t != ot + s[len(os):]:
                return f"stage {m}: piece [{s}] breaks its parent's translation"
        for a in new.anchors:
            if a.src in old_centers:
                continue
            parent = _parent_translation(idx, a.src)
            if parent is None:
                continue
            os, ot = parent
            v = old.virtual_depth
            atom = a.src.expand(max(len(os), v, v + len(os) - len(ot)))
            if not a.base_src.startswith(atom):
                return f"stage {m}: anchor base at {a.src} escapes its parent atom"
            if not a.base_dst.startswith(ot + atom[len(os):]):
                return f"stage {m}: anchor image at {a.src} escapes its parent atom"
    return None


def certify(run: SynthesisRun, upto: int, samples: int = 50, seed: int = 7) -> CertificateReport:
    """Exact checks of the stage conditions on everything materialized."""
    import random

    rng = random.Random(seed)
    inst = run.instance
    run.drive(upto)
    clauses = {}

    def clause(name, err):
        clauses[name] = {"pass": err is None, "detail": err or "ok"}

    # (a) anchors only grow, and every witness point is pinned on both sides
    err = None
    for m in range(upto):
        old, new = run.states[m], run.states[m + 1]
        old_pairs = {(a.src, a.dst) for a in old.anchors}
        new_pairs = {(a.src, a.dst) for a in new.anchors}
        if not old_pairs <= new_pairs:
            err = f"stage {m + 1} dropped an anchor"
            break
        srcs = {a.src for a in new.anchors}
        dsts = {a.dst for a in new.anchors}
        for w in run.k_prefix(m):
            if w not in srcs or w not in dsts:
                err = f"witness point {w} not pinned on both sides at stage {m + 1}"
                break
    clause("a", err)

    # (b) the enumerated dense points are pinned by their stage
    err = None
    for m in range(1, upto + 1):
        srcs = {a.src for a in run.states[m].anchors}
        dsts = {a.dst for a in run.states[m].anchors}
        for k in range(m):
            d0 = run.d_point(0, k)
            d1 = run.d_point(1, k)
            if d0 is not None and d0 not in srcs:
                err = f"source point {d0} missed at stage {m}"
            if d1 is not None and d1 not in dsts:
                err = f"target point {d1} missed at stage {m}"
    clause("b", err)

    # (c) anchor transport matches memberships; translations keep classes
    err = None
    state = run.states[upto]
    if inst.regime == "plain":
        in0, in1 = inst.D0.contains, inst.D1.contains
        e_of = inst.in_envelope
        y_of = inst.in_residue
    else:
        in0, in1 = inst.D0.contains, inst.D1.contains
        e_of = lambda x: False
        y_of = inst.W.contains
    for a in state.anchors:
        if in0(a.src) != in1(a.dst):
            err = f"anchor {a.src}->{a.dst} breaks the dense-set matching"
        if inst.regime == "plain" and e_of(a.src) != e_of(a.dst):
            err = f"anchor {a.src}->{a.dst} leaves the envelope"
        if y_of(a.src) != y_of(a.dst):
            err = f"anchor {a.src}->{a.dst} moves the stable set"
    clause("c", err)

    # (d) earlier pins never change
    err = None
    final_pins = run.states[upto].anchor_by_src()
    for m in range(upto):
        for a in run.states[m].anchors:
            later = final_pins.get(a.src)
            if later is None or later.dst != a.dst:
                err = f"pin of {a.src} changed after stage {m}"
    clause("d", err)

    # (e) piece depths: radial positions at stage m start at m or deeper
    err = None
    for m in range(1, upto + 1):
        for a in run.states[m].anchors:
            sa = a.singular(inst.regime)
            if sa._nth_live("src", None, 0) < m or sa._nth_live("dst", None, 0) < m:
                err = f"stage {m}: scheme at {a.src} has a shallow live cone"
    clause("e", err)

    # (f)+(h) refinement with nested images
    clause("f", _check_refinement(run, upto))

    # (g) pieces are translations onto their images; ordered: order isos
    err = None
    h = state.homeo(inst.regime)
    pts = _sample_points(rng, samples)
    for x in pts:
        y = h.apply(x)
        if not _same_class_or_pinned(state, x, y):
            err = f"{x} maps to {y} outside its tail class"
    clause("g", err)

    if inst.regime == "ordered":
        clause("order", _check_order_coherence(state, h, pts))

        # (i) witnesses at absorbed stable points, at every stage from absorption on
        err = None
        w_anchors = [a for a in state.anchors if inst.W.contains(a.src)]
        for a in w_anchors:
            if not ep(a.witness_src, "0") < a.src < ep(a.witness_src, "1"):
                err = f"witness interval degenerate at {a.src}"
        seen_pieces: set = set()
        for m in range(1, upto + 1):
            fresh = [p for p in run.states[m].pieces if p not in seen_pieces]
            seen_pieces.update(fresh)
            for a in w_anchors:
                if a.stage > m:
                    continue
                lo = ep(a.witness_src, "0")
                hi = ep(a.witness_src, "1")
                for s, t in fresh:
                    if lo <= ep(s, "0") and ep(s, "1") <= a.src:
                        if not ep(t, "1") <= a.dst:
                            err = f"stage {m}: piece [{s}] below {a.src} maps above"
                    if a.src <= ep(s, "0") and ep(s, "1") <= hi:
                        if not a.dst <= ep(t, "0"):
                            err = f"stage {m}: piece [{s}] above {a.src} maps below"
        clause("i", err)

        err = None
        for a in state.anchors:
            if inst.W.contains(a.src):
                res = monotone_at(h, a.src)
                if not (res.monotone and res.increasing):
                    err = f"not monotone at {a.src}: {res.reason}"
        clause("monotone", err)

    return CertificateReport(clauses)


def _check_order_coherence(state: EngineState, h: PiecewiseConeHomeo, pts) -> str | None:
    """Global order coherence: disjoint regions map in matching relative order.

    Explicit pieces have pairwise disjoint sources and targets, so sorting by
    source must sort the targets; anchors compare pairwise as points and
    against every piece outside their bases; scheme-internal coherence is the
    singulars' side matching, checked separately.
    """
    pieces = sorted(state.pieces)
    targets = [t for _, t in pieces]
    if targets != sorted(targets):
        i = next(i for i in range(len(targets) - 1) if targets[i] > targets[i + 1])
        return f"pieces [{pieces[i][0]}] and [{pieces[i + 1][0]}] map out of order"
    for a1, a2 in itertools.combinations(state.anchors, 2):
        if (a1.src < a2.src) != (a1.dst < a2.dst):
            return f"anchors {a1.src} and {a2.src} map out of order"
    for a in state.anchors:
        for s, t in state.pieces:
            if s.startswith(a.base_src):
                continue  # carved from this anchor's scheme: side matching rules it
            below_src = ep(s, "1") < a.src
            below_dst = ep(t, "1") < a.dst
            if below_src != below_dst:
                return f"piece [{s}] and anchor {a.src} map out of order"
    # semantic spot check on sampled pairs of unpinned points
    free = [x for x in pts if not any(x == a.src for a in state.anchors)]
    free.sort()
    images = [h.apply(x) for x in free]
    if images != sorted(images):
        return "sampled points map out of order"
    return None


def _sample_points(rng, n):
    out = []
    for _ in range(n):
        pre = "".join(rng.choice("01") for _ in range(rng.randrange(7)))
        per = "".join(rng.choice("01") for _ in range(rng.randrange(1, 4)))
        out.append(ep(pre, per))
    return out


def _same_class_or_pinned(state: EngineState, x: EpPoint, y: EpPoint) -> bool:
    from .points import tail_equiv

    if any(a.src == x for a in state.anchors):
        return True  # pinned points may move between classes inside the envelope
    return tail_equiv(x, y)
