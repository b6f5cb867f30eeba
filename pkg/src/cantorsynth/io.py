"""Canonical JSON serialization for instances, stage dumps and reports.

Everything serializes symbolically: words as digit strings, points in the
"u(v)" notation.  Serialization is byte-deterministic (sorted keys, fixed
separators), so identical runs produce identical files.
"""

from __future__ import annotations

import json

from .arrow import ArrowFamily, ArrowInstance, ArrowPresentation
from .engine import Anchor, CdhInstance, EngineState, OrderedInstance, SynthesisRun
from .errors import MalformedInput
from .points import SetPresentation, TailClass, format_point, parse_point


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


# ------------------------------------------------------------- presentations


def presentation_to_data(p: SetPresentation):
    if p.kind == "classes":
        return {"kind": "classes", "classes": [c.rep.per for c in p.classes]}
    if p.kind == "all_ep":
        return {"kind": "all_ep"}
    return {"kind": "points", "points": [format_point(x) for x in p.points]}


def presentation_from_data(data) -> SetPresentation:
    kind = data.get("kind")
    if kind == "classes":
        return SetPresentation.of_classes(*data["classes"])
    if kind == "all_ep":
        return SetPresentation.all_ep()
    if kind == "points":
        return SetPresentation(
            "points", points=tuple(parse_point(s) for s in data["points"])
        )
    raise MalformedInput(f"unknown presentation kind {kind!r}")


# ----------------------------------------------------------------- instances


def instance_to_data(inst):
    if isinstance(inst, CdhInstance):
        return {
            "mode": "cdh",
            "X": presentation_to_data(inst.X),
            "D0": presentation_to_data(inst.D0),
            "D1": presentation_to_data(inst.D1),
        }
    if isinstance(inst, OrderedInstance):
        return {
            "mode": "ordered",
            "D0": presentation_to_data(inst.D0),
            "D1": presentation_to_data(inst.D1),
            "W": presentation_to_data(inst.W),
            "colors": sorted(
                [c.rep.per, list(color)] for c, color in inst.colors.items()
            ),
        }
    if isinstance(inst, ArrowInstance):
        return {
            "mode": "arrow",
            "Y": [c.rep.per for c in inst.Y.Y.classes],
            "D": [{"class": f.cls.rep.per, "sides": list(f.sides)} for f in inst.D],
            "E": [{"class": f.cls.rep.per, "sides": list(f.sides)} for f in inst.E],
        }
    raise MalformedInput(f"cannot serialize instance {inst!r}")


def instance_from_data(data):
    mode = data.get("mode")
    if mode == "cdh":
        return CdhInstance(
            X=presentation_from_data(data["X"]),
            D0=presentation_from_data(data["D0"]),
            D1=presentation_from_data(data["D1"]),
        )
    if mode == "ordered":
        colors = {
            TailClass(parse_point(f"({w})")): tuple(color)
            for w, color in data.get("colors", [])
        }
        return OrderedInstance(
            D0=presentation_from_data(data["D0"]),
            D1=presentation_from_data(data["D1"]),
            W=presentation_from_data(data["W"]),
            colors=colors,
        )
    if mode == "arrow":
        def fam(d):
            return ArrowFamily(
                TailClass(parse_point(f"({d['class']})")), tuple(d["sides"])
            )

        return ArrowInstance(
            Y=ArrowPresentation(SetPresentation.of_classes(*data["Y"])),
            D=tuple(fam(d) for d in data["D"]),
            E=tuple(fam(d) for d in data["E"]),
        )
    raise MalformedInput(f"unknown instance mode {mode!r}")


# -------------------------------------------------------------------- states


def anchor_to_data(a: Anchor):
    return {
        "src": format_point(a.src),
        "dst": format_point(a.dst),
        "base_src": a.base_src,
        "base_dst": a.base_dst,
        "stage": a.stage,
        "witness_src": a.witness_src,
        "witness_dst": a.witness_dst,
        "carved_src": list(a.carved_src),
        "carved_dst": list(a.carved_dst),
    }


def anchor_from_data(d) -> Anchor:
    return Anchor(
        src=parse_point(d["src"]),
        dst=parse_point(d["dst"]),
        base_src=d["base_src"],
        base_dst=d["base_dst"],
        stage=d["stage"],
        witness_src=d["witness_src"],
        witness_dst=d["witness_dst"],
        carved_src=tuple(d["carved_src"]),
        carved_dst=tuple(d["carved_dst"]),
    )


def state_to_data(st: EngineState):
    return {
        "stage": st.n,
        "virtual_depth": st.virtual_depth,
        "anchors": [anchor_to_data(a) for a in st.anchors],
        "pieces": [[s, t] for s, t in st.pieces],
        "events": [list(stage) for stage in st.events],
    }


def state_from_data(d) -> EngineState:
    return EngineState(
        n=d["stage"],
        anchors=tuple(anchor_from_data(a) for a in d["anchors"]),
        pieces=tuple((s, t) for s, t in d["pieces"]),
        events=tuple(tuple(stage) for stage in d["events"]),
    )


def clopen_to_data(cs):
    return {"kind": "clopen", "cones": list(cs.cones)}


def clopen_from_data(data):
    from .clopen import ClopenSet

    return ClopenSet.of(data["cones"])


def interval_to_data(d):
    return {
        "kind": "interval-decomposition",
        "a": format_point(d.a),
        "b": format_point(d.b),
        "window": d.window,
        "words": {str(n): w for n, w in d.materialized().items()},
    }


def interval_from_data(data):
    from .clopen import interval_decompose

    return interval_decompose(
        parse_point(data["a"]), parse_point(data["b"]), data["window"]
    )


def map_to_data(h):
    return {
        "kind": "cone-map",
        "pieces": [[p.src, p.dst] for p in h.pieces],
        "singulars": [
            {
                "p": format_point(sa.p),
                "q": format_point(sa.q),
                "base_p": sa.base_p,
                "base_q": sa.base_q,
                "mode": sa.mode,
                "swap_sides": sa.swap_sides,
                "carved_p": list(sa.carved_p),
                "carved_q": list(sa.carved_q),
            }
            for sa in h.singulars
        ],
    }


def map_from_data(data):
    from .conemaps import PiecewiseConeHomeo, SingularAssignment

    return PiecewiseConeHomeo.of(
        [(s, t) for s, t in data["pieces"]],
        [
            SingularAssignment(
                p=parse_point(d["p"]),
                q=parse_point(d["q"]),
                base_p=d["base_p"],
                base_q=d["base_q"],
                mode=d["mode"],
                swap_sides=d.get("swap_sides", False),
                carved_p=tuple(d.get("carved_p", ())),
                carved_q=tuple(d.get("carved_q", ())),
            )
            for d in data["singulars"]
        ],
    )


def cover_to_data(cover):
    return {
        "kind": "kr-cover",
        "regime": cover.regime,
        "src_root": cover.src_root,
        "dst_root": cover.dst_root,
        "A": [format_point(s.a) for s in cover.anchors],
        "B": [format_point(s.b) for s in cover.anchors],
        "anchors": [
            {
                "a": format_point(s.a),
                "b": format_point(s.b),
                "base_a": s.base_a,
                "base_b": s.base_b,
            }
            for s in cover.anchors
        ],
        "residual_pairs": [[s, t] for s, t in cover.residual_pairs],
        "overrides": [[s, t] for s, t in cover.overrides],
        "constant_c": cover.constant_c,
    }


def cover_from_data(data):
    from .krcover import AnchorScheme, KRCover

    return KRCover(
        regime=data["regime"],
        src_root=data.get("src_root", ""),
        dst_root=data.get("dst_root", ""),
        anchors=tuple(
            AnchorScheme(
                parse_point(a["a"]), parse_point(a["b"]), a["base_a"], a["base_b"]
            )
            for a in data["anchors"]
        ),
        residual_pairs=tuple((s, t) for s, t in data["residual_pairs"]),
        overrides=tuple((s, t) for s, t in data.get("overrides", [])),
        constant_c=data.get("constant_c", 2),
    )


def partition_dot(words) -> str:
    """DOT rendering of the prefix tree of a source partition."""
    nodes = set()
    for w in words:
        for i in range(len(w) + 1):
            nodes.add(w[:i])
    lines = ["digraph cover {"]
    leaves = set(words)
    for v in sorted(nodes):
        label = v or "e"
        shape = "box" if v in leaves else "circle"
        lines.append(f'  "{label}" [shape={shape}];')
        if v:
            lines.append(f'  "{v[:-1] or "e"}" -> "{label}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def run_to_data(run: SynthesisRun, upto: int):
    run.drive(upto)
    return {
        "kind": "synthesis-dump",
        "instance": instance_to_data(run.instance),
        "stages": upto,
        "states": [state_to_data(s) for s in run.states[: upto + 1]],
    }


def report_to_data(report):
    return {"kind": "certificate-report", "clauses": report.clauses, "ok": report.ok}
