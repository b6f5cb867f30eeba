"""Acceptance suite: one test per criterion, printed pass/fail per line.

Every tolerance is exact (symbolic equality); the only numeric budget is the
ten-second wall clock on the 32-stage run.
"""

import dataclasses
import itertools
import random
import time

import pytest

from cantorsynth.arrow import (
    ArrowPoint,
    ArrowPresentation,
    arrow_cdh_synthesize,
    lift,
    standard_arrow_instance,
)
from cantorsynth.clopen import ClopenSet, interval_decompose
from cantorsynth.conemaps import PiecewiseConeHomeo, SingularAssignment, monotone_at
from cantorsynth.engine import SynthesisRun, certify
from cantorsynth.errors import LiftRejected
from cantorsynth.instances import random_point, standard_ep_instance
from cantorsynth.io import canonical_json, report_to_data, run_to_data
from cantorsynth.krcover import build_kr_cover, verify_kr_cover
from cantorsynth.points import SetPresentation, ep, tail_equiv


def announce(num, ok, text):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, text


@pytest.fixture(scope="module")
def ep_run_32():
    t0 = time.time()
    run = SynthesisRun(standard_ep_instance())
    run.drive(32)
    report = certify(run, 32, samples=50)
    return run, report, time.time() - t0


@pytest.fixture(scope="module")
def arrow_run_16():
    return arrow_cdh_synthesize(standard_arrow_instance(), 16)


def test_criterion_1_stage_clause_suite(ep_run_32):
    run, report, elapsed = ep_run_32
    ok = report.ok and elapsed < 10.0
    announce(
        1,
        ok,
        f"32 stages, clauses a-h {'all pass' if report.ok else report.failed_clauses()},"
        f" {elapsed:.2f}s",
    )


def test_criterion_2_dense_transport():
    run = SynthesisRun(standard_ep_instance())
    run.drive(64)
    inst = run.instance
    pins = {a.src: a.dst for a in run.states[64].anchors}
    hits = {a.dst: a.src for a in run.states[64].anchors}
    # condition (c) as exact set equality at every stage
    ok = True
    for m in range(65):
        st = run.states[m]
        image_of_d0 = {a.dst for a in st.anchors if inst.D0.contains(a.src)}
        d1_anchored = {a.dst for a in st.anchors if inst.D1.contains(a.dst)}
        if image_of_d0 != d1_anchored:
            ok = False
    moved = [pins.get(x) for x in inst.D0.enumerate(16)]
    ok = ok and all(y is not None and inst.D1.contains(y) for y in moved)
    hit = [hits.get(y) for y in inst.D1.enumerate(16)]
    ok = ok and all(x is not None and inst.D0.contains(x) for x in hit)
    announce(2, ok, "h[D0 n G] = D1 n G at 65 stages; 16+16 prefix points exchanged")


def test_criterion_3_tail_preservation(ep_run_32):
    run, _, _ = ep_run_32
    h = run.homeo(32)
    pinned = {a.src for a in run.states[32].anchors}
    rng = random.Random(2024)
    checked = 0
    ok = True
    while checked < 200:
        x = random_point(rng)
        if x in pinned:
            continue
        ok = ok and tail_equiv(h.apply(x), x)
        checked += 1
    announce(3, ok, "200 seeded non-singular points keep their tail class at n=32")


def test_criterion_4_limit_evaluation(ep_run_32):
    run, _, _ = ep_run_32
    rng = random.Random(77)
    ok = True
    for _ in range(100):
        x = random_point(rng)
        words = []
        for k in (4, 8, 12, 16, 20):
            out = run.evaluate(x, k)
            if out[0] == "point":
                words = None
                break
            ok = ok and len(out[1]) >= k
            words.append(out[1])
        if words is None:
            continue
        for shallow, deep in zip(words, words[1:]):
            ok = ok and deep.startswith(shallow)
        probe = ep(words[-1], "01")
        back = run.evaluate(probe, 4, inverse=True)
        ok = ok and back[0] == "cone" and x.starts_with(back[1])
    announce(4, ok, "100 seeded points: nested cones at k=4..20, inverse cone contains x")


def test_criterion_5_kr_cover_suite():
    rng = random.Random(515151)
    ok = True
    for _ in range(100):
        n = rng.randrange(1, 7)
        src, dst = set(), set()
        while len(src) < n:
            src.add(random_point(rng, 5, 3))
        while len(dst) < n:
            dst.add(random_point(rng, 5, 3))
        cover = build_kr_cover(
            list(zip(sorted(src), sorted(dst))), min_depth=rng.randrange(1, 9)
        )
        cert = verify_kr_cover(cover, depth=12)
        ok = ok and cert.ok

    zero, one = ep("", "0"), ep("", "1")
    base = build_kr_cover([(zero, zero), (one, one)], min_depth=4)
    # fault family 1: overlap in the partition
    overlap = dataclasses.replace(
        base, residual_pairs=base.residual_pairs + ((base.residual_pairs[0][0], "1111"),)
    )
    c1 = verify_kr_cover(overlap, depth=12)
    ok = ok and not c1.ok and "1" in c1.failed_clauses()
    # fault family 2: reroute a shrinking radial cone to a far target
    sa = base.fragments()[1][0]
    deep = 8
    far_src, far_dst = base.residual_pairs[0]
    reroute = dataclasses.replace(
        base,
        residual_pairs=tuple(p for p in base.residual_pairs if p != (far_src, far_dst)),
        overrides=(
            (sa.src_cone_at(deep), far_dst),
            (far_src, sa.dst_cone_at(sa.matched_dst_position(deep))),
        ),
    )
    c2 = verify_kr_cover(reroute, depth=12)
    ok = ok and not c2.ok and "4" in c2.failed_clauses()
    announce(5, ok, "100 random covers verify at K=12; both fault families rejected")


def test_criterion_6_oracle_equivalence():
    rng = random.Random(606060)
    ok = True

    atoms = ["".join(bits) for bits in itertools.product("01", repeat=10)]

    def denote(cs):
        return {a for a in atoms if any(a.startswith(w) for w in cs.cones)}

    for _ in range(25):
        ws1 = ["".join(rng.choice("01") for _ in range(rng.randrange(6))) for _ in range(4)]
        ws2 = ["".join(rng.choice("01") for _ in range(rng.randrange(6))) for _ in range(4)]
        a, b = ClopenSet.of(ws1), ClopenSet.of(ws2)
        da, db = denote(a), denote(b)
        ok = ok and denote(a.union(b)) == da | db
        ok = ok and denote(a.intersection(b)) == da & db
        ok = ok and denote(a.difference(b)) == da - db
        ok = ok and denote(a.complement()) == set(atoms) - da

    def brute(x, y):
        return any(
            all(x.digit(m + k) == y.digit(n + k) for k in range(64))
            for m in range(17)
            for n in range(17)
        )

    for _ in range(500):
        x, y = random_point(rng), random_point(rng)
        ok = ok and tail_equiv(x, y) == brute(x, y)

    for _ in range(20):
        a, b = random_point(rng, 4, 2), random_point(rng, 4, 2)
        if not a < b or a.per == "1" or b.per == "0":
            continue
        d = interval_decompose(a, b, 3)
        pieces = {n: d.piece(n) for n in range(-5, 5)}
        for _ in range(30):
            x = random_point(rng, 8, 2)
            if not a < x < b:
                continue
            inside = [n for n, w in pieces.items() if x.starts_with(w)]
            n = d.member_index(x)
            ok = ok and (inside == [n] if n in pieces else inside == [])
        words = [pieces[n] for n in sorted(pieces)]
        ok = ok and all(
            ep(w1, "1") < ep(w2, "0") for w1, w2 in zip(words, words[1:])
        )
    announce(6, ok, "clopen/tail/interval oracles agree (1024 atoms, 500 pairs, depth 8)")


def test_criterion_7_ordered_suite(arrow_run_16):
    res = arrow_run_16
    report = res.run and certify(res.run, 16, samples=60)
    ok = report.ok
    needed = set("abcdefg") | {"order", "i", "monotone"}
    ok = ok and needed <= set(report.clauses)
    h = res.run.homeo(16)
    w_anchors = [
        a for a in res.run.states[16].anchors if res.Z.contains(a.src)
    ]
    w_anchors.sort(key=lambda a: a.stage)
    ok = ok and len(w_anchors) >= 16
    for a in w_anchors[:16]:
        r = monotone_at(h, a.src)
        ok = ok and r.monotone and r.increasing and r.a < a.src < r.b
    announce(7, ok, "16 ordered stages pass a-i; monotone with witnesses at 16 W points")


def test_criterion_8_lifting(arrow_run_16):
    res = arrow_run_16
    rng = random.Random(88)
    ok = True
    count = 0
    while count < 200:
        base = random_point(rng)
        sides = []
        if base.q_kind != "Q0":
            sides.append(0)
        if base.q_kind == "Q0" or res.instance.Y.Y.contains(base):
            sides.append(1)
        if not sides:
            continue
        p = ArrowPoint(base, rng.choice(sides))
        ok = ok and res.lifted.project_commutes(p)
        count += 1

    # constructed non-monotone counterexample: crossing scheme at a stable point
    x_pres = ArrowPresentation(SetPresentation.of_classes("01"))
    y_pres = ArrowPresentation(SetPresentation.of_classes("01", "0011"))
    crossing = PiecewiseConeHomeo.of(
        [], [SingularAssignment(ep("", "0011"), ep("", "0110"), "", "")]
    )
    try:
        lift(crossing, x_pres, y_pres)
        ok = False
    except LiftRejected:
        pass
    announce(8, ok, "projection commutes on 200 points; crossing map is lift-rejected")


def test_criterion_9_determinism():
    runs = []
    for _ in range(2):
        run = SynthesisRun(standard_ep_instance())
        report = certify(run, 10, samples=40)
        runs.append(
            (canonical_json(run_to_data(run, 10)), canonical_json(report_to_data(report)))
        )
    ok = runs[0] == runs[1]
    announce(9, ok, "two identical configs give byte-identical dumps and reports")
