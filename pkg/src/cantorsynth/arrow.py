"""Split spaces over selected base points, projections, lifting, and the
ordered transport pipeline.

The split space over a presented set Y doubles every point of Y: the carrier
is ((2^omega minus Q0) x {0}) union ((Q0 union Y) x {1}) under the
lexicographic order.  For countable saturated Y the machinery stays exact:
the intermediate model doubles only the classes that the dense sets touch,
the ordered engine synthesizes a base homeomorphism that is order-coherent
and keeps the untouched classes pointwise-stable-as-a-set, and the result
lifts back to the full split space by carrying sides along fibers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conemaps import PiecewiseConeHomeo, monotone_at, star_order_iso
from .engine import CertificateReport, OrderedInstance, SynthesisRun, certify
from .errors import DomainError, InstanceRejected, LiftRejected, MalformedInput
from .points import EpPoint, SetPresentation, TailClass, ep, tail_equiv


@dataclass(frozen=True)
class ArrowPoint:
    base: EpPoint
    side: int

    def __post_init__(self):
        if self.side not in (0, 1):
            raise MalformedInput("side must be 0 or 1")

    def __repr__(self):
        return f"<{self.base},{self.side}>"

    def __lt__(self, other):
        if self.base != other.base:
            return self.base < other.base
        return self.side < other.side

    def __le__(self, other):
        return self == other or self < other


def arrow_compare(p: ArrowPoint, q: ArrowPoint) -> int:
    if p == q:
        return 0
    return -1 if p < q else 1


@dataclass(frozen=True)
class ArrowPresentation:
    """The split space over a presented Y with Y disjoint from the jump classes."""

    Y: SetPresentation

    def __post_init__(self):
        if self.Y.kind != "classes":
            raise MalformedInput("split spaces need a class-presented base set")
        for c in self.Y.classes:
            if c.rep.per in ("0", "1"):
                raise MalformedInput("base set must avoid the jump classes")

    def in_carrier(self, p: ArrowPoint) -> bool:
        if p.side == 0:
            return p.base.q_kind != "Q0"
        return p.base.q_kind == "Q0" or self.Y.contains(p.base)

    def doubled(self, x: EpPoint) -> bool:
        return self.Y.contains(x)


def arrow_project(p: ArrowPoint, from_y: ArrowPresentation, to_x: ArrowPresentation) -> ArrowPoint:
    """Collapse the upper copies of points doubled in Y but not in X."""
    for c in to_x.Y.classes:
        if c not in from_y.Y.classes:
            raise DomainError("projection needs X inside Y")
    if not from_y.in_carrier(p):
        raise DomainError(f"{p} outside the carrier")
    if p.side == 1 and from_y.Y.contains(p.base) and not to_x.Y.contains(p.base):
        return ArrowPoint(p.base, 0)
    return p


# ------------------------------------------------------------------- lifting


@dataclass(frozen=True)
class LiftedMap:
    """The lift of a base map along the projection from a larger split space.

    Fibers doubled in Y but not in X follow the base map with their sides
    carried (or flipped where the base map is order-decreasing); everything
    else is forced by the commuting identity with the projection.
    """

    h: PiecewiseConeHomeo
    X: ArrowPresentation
    Y: ArrowPresentation
    orientation: dict = field(default_factory=dict)

    def _direction(self, x: EpPoint) -> bool:
        if x not in self.orientation:
            res = monotone_at(self.h, x)
            if not res.monotone:
                raise LiftRejected(f"base map not monotone at {x}: {res.reason}")
            self.orientation[x] = bool(res.increasing)
        return self.orientation[x]

    def apply(self, p: ArrowPoint) -> ArrowPoint:
        if not self.Y.in_carrier(p):
            raise DomainError(f"{p} outside the carrier")
        image = self.h.apply(p.base)
        side = p.side
        if self.Y.doubled(p.base) and not self.X.Y.contains(p.base):
            if not self._direction(p.base):
                side = 1 - p.side
        return ArrowPoint(image, side)

    def inverse(self) -> "LiftedMap":
        return LiftedMap(self.h.inverse(), self.X, self.Y)

    def project_commutes(self, p: ArrowPoint) -> bool:
        """The defining identity: projecting after lifting equals mapping after
        projecting, exactly."""
        lhs = arrow_project(self.apply(p), self.Y, self.X)
        q = arrow_project(p, self.Y, self.X)
        image = self.h.apply(q.base)
        side = q.side
        if q.side == 1 and not self.X.Y.contains(q.base) and q.base.q_kind != "Q0":
            side = 0
        rhs = ArrowPoint(image, side)
        return lhs == rhs


def lift(h: PiecewiseConeHomeo, X: ArrowPresentation, Y: ArrowPresentation) -> LiftedMap:
    """Lift h along the projection, verifying the hypotheses exactly.

    Off its singular points a piecewise cone map preserves every tail class
    and is locally a translation, so the only work is at the singulars: their
    jump structure must be carried (so the carrier is preserved), the doubled
    classes must map onto themselves, and the map must be monotone at every
    doubled point outside X.
    """
    z_classes = [c for c in Y.Y.classes if c not in X.Y.classes]
    for sa in h.singulars:
        if sa.p.q_kind != sa.q.q_kind:
            raise LiftRejected(f"{sa.p} and {sa.q} have different jump structure")
        p_in_z = any(c.member(sa.p) for c in z_classes)
        q_in_z = any(c.member(sa.q) for c in z_classes)
        if p_in_z != q_in_z:
            raise LiftRejected(f"singular {sa.p}->{sa.q} moves the doubled classes")
        p_in_x = X.Y.contains(sa.p)
        if X.Y.contains(sa.p) != X.Y.contains(sa.q):
            raise LiftRejected(f"singular {sa.p}->{sa.q} moves the model classes")
        if p_in_z:
            res = monotone_at(h, sa.p)
            if not res.monotone:
                raise LiftRejected(f"not monotone at doubled point {sa.p}: {res.reason}")
    return LiftedMap(h, X, Y)


# ------------------------------------------------------------ the pipeline


@dataclass(frozen=True)
class ArrowFamily:
    """One dense family: the points of a tail class carried on chosen sides."""

    cls: TailClass
    sides: tuple[int, ...]

    def __post_init__(self):
        if not self.sides or any(s not in (0, 1) for s in self.sides):
            raise MalformedInput("sides must be a nonempty subset of {0, 1}")
        if self.cls.rep.per == "0" and 0 in self.sides:
            raise MalformedInput("the lower jump class carries no side-0 points")
        if self.cls.rep.per == "1" and 1 in self.sides:
            raise MalformedInput("the upper jump class carries no side-1 points")

    @property
    def color(self):
        return tuple(sorted(self.sides))

    def enum_iter(self):
        for x in self.cls.enum_iter():
            for s in self.sides:
                yield ArrowPoint(x, s)


@dataclass(frozen=True)
class ArrowInstance:
    Y: ArrowPresentation
    D: tuple[ArrowFamily, ...]
    E: tuple[ArrowFamily, ...]

    def __post_init__(self):
        y_classes = set(self.Y.Y.classes)
        for fam in self.D + self.E:
            q = fam.cls.rep.per in ("0", "1")
            if not q and fam.cls not in y_classes:
                raise InstanceRejected(f"family class {fam.cls} is not doubled in Y")

        def signature(fams):
            return sorted((f.cls.rep.per in ("0", "1"), f.cls.rep.per
                           if f.cls.rep.per in ("0", "1") else "", f.color)
                          for f in fams)

        if signature(self.D) != signature(self.E):
            raise InstanceRejected(
                "side signatures of the dense families do not match"
            )

    def enum_points(self, which: str, n: int) -> list[ArrowPoint]:
        fams = self.D if which == "D" else self.E
        its = [f.enum_iter() for f in fams]
        out = []
        while len(out) < n:
            for it in its:
                out.append(next(it))
        return out[:n]

    def member(self, which: str, p: ArrowPoint) -> bool:
        fams = self.D if which == "D" else self.E
        return any(f.cls.member(p.base) and p.side in f.sides for f in fams)


@dataclass
class ArrowSynthesis:
    instance: ArrowInstance
    F: ArrowPresentation
    Z: SetPresentation
    run: SynthesisRun
    lifted: LiftedMap
    report: CertificateReport


def _star_condition_probe(w_pres: SetPresentation, samples: int = 25) -> str | None:
    """Order isomorphisms between clopen intervals carrying W onto W exactly."""
    probes = [("0", "1"), ("00", "01"), ("01", "10"), ("0", "11"), ("101", "0")]
    for w1, w2 in probes:
        a1, b1 = ep(w1, "0"), ep(w1, "1")
        a2, b2 = ep(w2, "0"), ep(w2, "1")
        g = star_order_iso(a1, b1, a2, b2)
        count = 0
        for x in w_pres.enum_iter():
            if not (a1 < x < b1):
                continue
            y = g.apply(x)
            if not w_pres.contains(y):
                return f"interval map [{w1}]->[{w2}] pushed {x} off the stable set"
            if not tail_equiv(x, y):
                return f"interval map [{w1}]->[{w2}] broke the class of {x}"
            count += 1
            if count >= samples:
                break
    return None


def arrow_cdh_synthesize(instance: ArrowInstance, stages: int) -> ArrowSynthesis:
    """The full pipeline on a split space over a saturated presented set.

    Double only the classes the dense sets touch (the model F); the ordered
    engine exchanges the projected dense sets on the base space while keeping
    the untouched classes Z order-stably fixed; the result lifts back to the
    full split space with the commuting identity holding exactly.
    """
    y_classes = list(instance.Y.Y.classes)
    touched = []
    for fam in instance.D + instance.E:
        if fam.cls in y_classes and fam.cls not in touched:
            touched.append(fam.cls)
    z_classes = [c for c in y_classes if c not in touched]
    if not z_classes:
        raise InstanceRejected("no untouched classes left to keep stable")
    F = ArrowPresentation(SetPresentation("classes", classes=tuple(touched)))
    Z = SetPresentation("classes", classes=tuple(z_classes))

    # jump-class families project through unchanged but still need transport,
    # so they enter the base problem alongside the doubled classes
    d_base = [f for f in instance.D if f.cls in touched or f.cls.rep.per in ("0", "1")]
    e_base = [f for f in instance.E if f.cls in touched or f.cls.rep.per in ("0", "1")]
    if not any(f.cls in touched for f in d_base) or not any(
        f.cls in touched for f in e_base
    ):
        raise InstanceRejected("dense families must touch the doubled classes")
    colors = {}
    for f in d_base + e_base:
        colors[f.cls] = f.color
    ordered = OrderedInstance(
        D0=SetPresentation("classes", classes=tuple(f.cls for f in d_base)),
        D1=SetPresentation("classes", classes=tuple(f.cls for f in e_base)),
        W=Z,
        colors=colors,
    )

    star_err = _star_condition_probe(Z)
    run = SynthesisRun(ordered)
    report = certify(run, stages, samples=60)
    report.clauses["star"] = {
        "pass": star_err is None,
        "detail": star_err or "interval transport preserves the stable set",
    }

    w_err = None
    for fam in instance.D + instance.E:
        if any(fam.cls.member(z.rep) for z in Z.classes):
            w_err = f"stable set meets the dense family over {fam.cls}"
    for c in Z.classes:
        if c.rep.per in ("0", "1"):
            w_err = "stable set meets the jump classes"
    report.clauses["w-disjoint"] = {"pass": w_err is None, "detail": w_err or "ok"}

    h = run.homeo(stages)
    lifted = lift(h, F, instance.Y)

    err = None
    prefix = max(4, stages)
    pins = {a.src: a.dst for a in run.states[stages].anchors}
    inv_pins = {a.dst: a.src for a in run.states[stages].anchors}
    moved = 0
    for p in instance.enum_points("D", prefix):
        if p.base in pins:
            image = lifted.apply(p)
            if not instance.member("E", image):
                err = f"{p} lands at {image}, outside the target set"
            moved += 1
    for p in instance.enum_points("E", prefix):
        if p.base in inv_pins:
            pre = lifted.inverse().apply(p)
            if not instance.member("D", pre):
                err = f"{p} is hit from {pre}, outside the source set"
    if moved == 0:
        err = "no dense points were transported"
    report.clauses["transport"] = {"pass": err is None, "detail": err or "ok"}

    return ArrowSynthesis(instance, F, Z, run, lifted, report)


def standard_arrow_instance() -> ArrowInstance:
    """Five doubled classes: two exchanged pairs and one kept stable."""
    y = ArrowPresentation(SetPresentation.of_classes("01", "001", "011", "0001", "0011"))
    d = (
        ArrowFamily(TailClass(ep("", "01")), (0, 1)),
        ArrowFamily(TailClass(ep("", "001")), (0, 1)),
    )
    e = (
        ArrowFamily(TailClass(ep("", "011")), (0, 1)),
        ArrowFamily(TailClass(ep("", "0001")), (0, 1)),
    )
    return ArrowInstance(y, d, e)
