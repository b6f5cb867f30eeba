"""Engine stages: envelopes, witnesses, absorption, certification, evaluation."""

import dataclasses

import pytest

from cantorsynth.engine import (
    CdhInstance,
    OrderedInstance,
    SynthesisRun,
    certify,
    choose_envelopes,
    gdelta_witness,
    initial_state,
)
from cantorsynth.errors import InstanceRejected
from cantorsynth.instances import (
    random_point,
    standard_ep_instance,
    standard_ordered_instance,
)
from cantorsynth.points import SetPresentation, ZERO, ep, tail_equiv


# ---------------------------------------------------------------- envelopes


def test_envelopes_standard_instance():
    inst = standard_ep_instance()
    assert [c.rep for c in inst.E0.classes] == [ZERO, ep("", "1"), ep("", "001")]
    assert [c.rep for c in inst.E1.classes] == [ep("", "01"), ep("", "011")]


def test_envelopes_first_fresh_class():
    e0, _ = choose_envelopes(
        SetPresentation.all_ep(),
        SetPresentation.of_classes("0", "1"),
        SetPresentation.of_classes("0", "1"),
    )
    # first primitive word beyond "0","1" in length-lex order
    assert e0.classes[-1].rep == ep("", "01")


def test_envelopes_next_fresh_class():
    e0, e1 = choose_envelopes(
        SetPresentation.all_ep(),
        SetPresentation.of_classes("0", "1"),
        SetPresentation.of_classes("001"),
    )
    assert e0.classes[-1].rep == ep("", "01")
    assert e1.classes[-1].rep == ep("", "011")


def test_envelopes_reject_small_ambient():
    with pytest.raises(InstanceRejected):
        choose_envelopes(
            SetPresentation.of_classes("0", "1"),
            SetPresentation.of_classes("0", "1"),
            SetPresentation.of_classes("0", "1"),
        )


# ---------------------------------------------------------------- witnesses


def test_gdelta_witness_increasing_and_disjoint():
    X = SetPresentation.all_ep()
    A = SetPresentation.of_classes("0", "1")
    k2 = gdelta_witness(X, A, 2)
    k3 = gdelta_witness(X, A, 3)
    assert k3[:3] == k2
    assert len(k3) == 4
    for x in k3:
        assert not A.contains(x)


def test_gdelta_witness_coverage():
    X = SetPresentation.all_ep()
    A = SetPresentation.of_classes("0", "1")
    first20 = gdelta_witness(X, A, 19)
    assert len(set(first20)) == 20


# ------------------------------------------------------------------- stages


def test_stage_zero_identity():
    st = initial_state()
    assert st.pieces == (("", ""),)
    assert not st.anchors


def test_stage_one_replays_choice_rule():
    run = SynthesisRun(standard_ep_instance())
    run.drive(1)
    pins = {a.src: a.dst for a in run.states[1].anchors}
    # the first witness point is pinned in place by the identity translation
    assert pins[ep("", "0001")] == ep("", "0001")
    # d_0 = 0^w is in D0, so its image is the first class(01) member in its cone
    assert pins[ZERO] == ep("0000", "01")
    # the inverse half gives 0^w a preimage from the fresh envelope class
    assert pins[ep("000", "001")] == ZERO


def test_restriction_agreement_across_stages():
    run = SynthesisRun(standard_ep_instance())
    run.drive(4)
    for m in range(1, 4):
        h_next = run.homeo(m + 1)
        for a in run.states[m].anchors:
            assert h_next.apply(a.src) == a.dst


def test_stage_maps_are_valid_homeos():
    run = SynthesisRun(standard_ep_instance())
    run.drive(6)
    for m in (1, 3, 6):
        cert = run.homeo(m).validate(depth=6)
        assert cert.ok, cert.clauses


def test_certify_small_run():
    run = SynthesisRun(standard_ep_instance())
    rep = certify(run, 8, samples=30)
    assert rep.ok, rep.clauses


def test_certify_ordered_small_run():
    run = SynthesisRun(standard_ordered_instance())
    rep = certify(run, 8, samples=30)
    assert rep.ok, rep.clauses
    assert set("abcdefg") | {"order", "i", "monotone"} <= set(rep.clauses)


def test_certify_detects_tampered_anchor():
    run = SynthesisRun(standard_ep_instance())
    run.drive(4)
    st = run.states[4]
    victim = next(a for a in st.anchors if run.instance.D0.contains(a.src))
    # reroute the pinned image to a wrong class inside the same base cone
    bad = dataclasses.replace(victim, dst=ep(victim.base_dst + "0", "011"))
    anchors = tuple(bad if a is victim else a for a in st.anchors)
    run.states[4] = dataclasses.replace(st, anchors=anchors)
    run._indices.clear()
    rep = certify(run, 4, samples=10)
    assert not rep.ok
    assert "c" in rep.failed_clauses()


def test_skip_with_record_for_reabsorbed_points():
    run = SynthesisRun(standard_ep_instance())
    run.drive(6)
    skips = [
        ev
        for stage in run.states[6].events
        for ev in stage
        if ev["action"] == "already-absorbed"
    ]
    assert skips  # witness prefixes repeat, so later stages skip them


def test_tail_preservation_off_anchors():
    run = SynthesisRun(standard_ep_instance())
    run.drive(8)
    h = run.homeo(8)
    pinned = {a.src for a in run.states[8].anchors}
    import random

    rng = random.Random(5)
    for _ in range(50):
        x = random_point(rng)
        if x not in pinned:
            assert tail_equiv(h.apply(x), x)


# ---------------------------------------------------------------- determinism


def test_runs_are_deterministic():
    r1 = SynthesisRun(standard_ep_instance())
    r2 = SynthesisRun(standard_ep_instance())
    r1.drive(6)
    r2.drive(6)
    for s1, s2 in zip(r1.states, r2.states):
        assert s1.anchors == s2.anchors
        assert s1.pieces == s2.pieces


# ------------------------------------------------------------------ evaluate


def test_evaluate_absorbed_point_exact():
    run = SynthesisRun(standard_ep_instance())
    run.drive(2)
    d0 = run.d_point(0, 0)
    kind, val = run.evaluate(d0, 4)[:2]
    assert kind == "point"
    assert run.instance.D1.contains(val)


def test_evaluate_nested_cones():
    run = SynthesisRun(standard_ep_instance())
    x = ep("0110", "100")
    answers = []
    for k in (4, 8, 12, 16, 20):
        out = run.evaluate(x, k)
        assert out[0] == "cone" and len(out[1]) >= k
        answers.append(out[1])
    for shallow, deep in zip(answers, answers[1:]):
        assert deep.startswith(shallow)


def test_nesting_iff_across_stage_pairs():
    """Containment of pieces across any two stages matches containment of
    their images, in both directions."""
    run = SynthesisRun(standard_ep_instance())
    run.drive(8)
    import random

    rng = random.Random(17)
    h_pairs = {}
    for m in (2, 4, 6, 8):
        st = run.states[m]
        h_pairs[m] = list(st.pieces)
    for m, n in [(2, 4), (2, 8), (4, 6), (6, 8)]:
        coarse = rng.sample(h_pairs[m], min(30, len(h_pairs[m])))
        fine = rng.sample(h_pairs[n], min(60, len(h_pairs[n])))
        for s_i, t_i in coarse:
            for s_j, t_j in fine:
                src_inside = s_j.startswith(s_i)
                dst_inside = t_j.startswith(t_i)
                assert src_inside == dst_inside, (m, n, s_i, s_j)


def test_evaluate_sound_against_later_stage_maps():
    """The cone returned at a stage contains the value of every later map."""
    run = SynthesisRun(standard_ep_instance())
    import random

    rng = random.Random(23)
    for _ in range(25):
        x = random_point(rng)
        out = run.evaluate(x, 10)
        if out[0] != "cone":
            continue
        word, stage = out[1], out[2]
        for later in (stage + 1, stage + 4):
            y = run.homeo(later).apply(x)
            assert y.starts_with(word), (x, word, later)


def test_evaluate_depth_zero_whole_space():
    run = SynthesisRun(standard_ep_instance())
    out = run.evaluate(ep("01", "10"), 0)
    assert out == ("cone", "", 0)


def test_evaluate_inverse_roundtrip():
    run = SynthesisRun(standard_ep_instance())
    x = ep("10", "011")
    kind, word, stage = run.evaluate(x, 10)
    assert kind == "cone"
    back = run.evaluate(ep(word, "01"), 4, inverse=True)
    assert back[0] == "cone"
    assert x.starts_with(back[1]) or back[1].startswith(x.expand(len(back[1])))


def test_instance_rejected_exit_path():
    with pytest.raises(InstanceRejected):
        CdhInstance(
            X=SetPresentation.of_classes("0", "1"),
            D0=SetPresentation.of_classes("0", "1"),
            D1=SetPresentation.of_classes("0", "1"),
        )


def test_ordered_with_jump_class_dense_sets():
    """Absorptions at jump points use one-sided schemes; the least element
    can only be pinned to itself."""
    inst = OrderedInstance(
        D0=SetPresentation.of_classes("0", "001"),
        D1=SetPresentation.of_classes("0", "0001"),
        W=SetPresentation.of_classes("011"),
    )
    rep = certify(SynthesisRun(inst), 8, samples=30)
    assert rep.ok, rep.failed_clauses()
    run = SynthesisRun(inst)
    run.drive(4)
    pins = {a.src: a.dst for a in run.states[4].anchors}
    assert pins[ZERO] == ZERO


def test_cdh_overlapping_dense_sets():
    """A class shared by both dense sets: overlap points may be pinned in place."""
    inst = CdhInstance(
        X=SetPresentation.all_ep(),
        D0=SetPresentation.of_classes("0", "01"),
        D1=SetPresentation.of_classes("01", "001"),
    )
    rep = certify(SynthesisRun(inst), 8, samples=30)
    assert rep.ok, rep.failed_clauses()


def test_cdh_finite_class_ambient():
    inst = CdhInstance(
        X=SetPresentation.of_classes("0", "1", "01", "001", "011", "0001", "0011"),
        D0=SetPresentation.of_classes("0", "1"),
        D1=SetPresentation.of_classes("01"),
    )
    rep = certify(SynthesisRun(inst), 8, samples=30)
    assert rep.ok, rep.failed_clauses()


def test_ordered_rejects_w_meeting_dense_sets():
    with pytest.raises(InstanceRejected):
        OrderedInstance(
            D0=SetPresentation.of_classes("001"),
            D1=SetPresentation.of_classes("0001"),
            W=SetPresentation.of_classes("001"),
        )


def test_ordered_rejects_w_in_jump_classes():
    with pytest.raises(InstanceRejected):
        OrderedInstance(
            D0=SetPresentation.of_classes("001"),
            D1=SetPresentation.of_classes("0001"),
            W=SetPresentation.of_classes("0"),
        )
