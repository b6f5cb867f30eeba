"""Point arithmetic: canonical forms, order, tail equivalence, embeddings.

Oracles used here are independent of the implementation paths they check:
plain digit expansion for order, bounded shift search for tail equivalence,
and naive block concatenation for the embedding.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorsynth.errors import MalformedInput
from cantorsynth.points import (
    EpPoint,
    SetPresentation,
    TailClass,
    ZERO,
    ONE,
    canonical_parts,
    classify_q,
    compare,
    deinterleave,
    enumerate_tail_class,
    ep,
    first_disagreement,
    format_point,
    interleave,
    parse_point,
    saturate,
    silver_embed,
    tail_equiv,
    words_length_lex,
)

words = st.text(alphabet="01", max_size=6)
periods = st.text(alphabet="01", min_size=1, max_size=4)
points = st.builds(ep, words, periods)


# ---------------------------------------------------------------- oracles


def expand_naive(pre, per, length):
    out = pre
    while len(out) < length:
        out += per
    return out[:length]


def brute_tail_equiv(x, y, max_shift=16, length=64):
    """Search for shifts m, n <= max_shift making the tails agree on a window."""
    for m in range(max_shift + 1):
        for n in range(max_shift + 1):
            if all(x.digit(m + k) == y.digit(n + k) for k in range(length)):
                return True
    return False


def silver_naive(x, depth):
    out = ""
    k = 0
    while len(out) < depth:
        out += "0" * (k + 2) + "1" + expand_naive(x.pre, x.per, k + 1)
        k += 1
    return out[:depth]


# ---------------------------------------------------------- canonical form


def test_canonicalize_absorbs_into_constant_period():
    assert canonical_parts("0", "0") == ("", "0")


def test_canonicalize_primitive_root():
    assert canonical_parts("", "0101") == ("", "01")


def test_canonicalize_rotation_absorption():
    # check by direct expansion that both forms denote the same sequence
    assert canonical_parts("011", "01") == ("01", "10")
    assert expand_naive("011", "01", 16) == expand_naive("01", "10", 16)


def test_canonicalize_rejects_empty_period():
    with pytest.raises(MalformedInput):
        canonical_parts("01", "")


@given(words, periods)
def test_canonicalize_idempotent(pre, per):
    p, q = canonical_parts(pre, per)
    assert canonical_parts(p, q) == (p, q)


@given(words, periods)
def test_canonical_form_preserves_digits(pre, per):
    x = ep(pre, per)
    assert x.expand(40) == expand_naive(pre, per, 40)


@given(words, periods, words, periods)
def test_equality_iff_same_expansion(p1, v1, p2, v2):
    x, y = ep(p1, v1), ep(p2, v2)
    bound = len(p1) + len(p2) + 4 * len(v1) * len(v2)
    same = expand_naive(p1, v1, bound) == expand_naive(p2, v2, bound)
    assert (x == y) == same


def test_parse_and_format_roundtrip():
    for s in ["(0)", "01(10)", "10(01)", "(011)"]:
        assert format_point(parse_point(s)) == s


def test_parse_rejects_malformed():
    for s in ["0()", "01", "(01", "ab(0)", "(2)"]:
        with pytest.raises(MalformedInput):
            parse_point(s)


def test_parse_noncanonical_needs_normalize():
    with pytest.raises(MalformedInput):
        parse_point("0(0)")
    assert parse_point("0(0)", normalize=True) == ZERO


# -------------------------------------------------------------------- order


def test_compare_least_element():
    assert compare(ZERO, ep("01", "0")) == -1


def test_compare_first_disagreement_example():
    # (01)^w = 0101..., 01(10)^w = 0110...: disagree at index 2
    x, y = ep("", "01"), ep("01", "10")
    assert first_disagreement(x, y) == 2
    assert compare(x, y) == -1


@given(points)
def test_compare_reflexive(x):
    assert compare(x, x) == 0


@given(points, points)
def test_compare_agrees_with_digit_oracle(x, y):
    naive = 0
    for n in range(64):
        if x.digit(n) != y.digit(n):
            naive = -1 if x.digit(n) < y.digit(n) else 1
            break
    if naive != 0:
        assert compare(x, y) == naive
    # no disagreement to depth 64 at these sizes means equality
    else:
        assert compare(x, y) == 0


@given(points, points, points)
def test_order_total_and_transitive(x, y, z):
    assert compare(x, y) == -compare(y, x)
    if x <= y <= z:
        assert x <= z


# --------------------------------------------------------- tail equivalence


def test_tail_equiv_rotation():
    assert tail_equiv(ep("", "01"), ep("", "10"))


def test_tail_equiv_distinct_constants():
    assert not tail_equiv(ZERO, ONE)


def test_tail_equiv_brute_force_example():
    x, y = ep("111", "001"), ep("", "010")
    assert brute_tail_equiv(x, y, max_shift=12, length=24)
    assert tail_equiv(x, y)


@given(points)
def test_tail_equiv_reflexive(x):
    assert tail_equiv(x, x)


@given(points, points)
def test_tail_equiv_symmetric(x, y):
    assert tail_equiv(x, y) == tail_equiv(y, x)


@given(points, points, points)
def test_tail_equiv_transitive(x, y, z):
    if tail_equiv(x, y) and tail_equiv(y, z):
        assert tail_equiv(x, z)


@settings(max_examples=200)
@given(points, points)
def test_tail_equiv_matches_bounded_search(x, y):
    assert tail_equiv(x, y) == brute_tail_equiv(x, y)


# ------------------------------------------------------- class enumeration


def test_enumerate_representative_first():
    assert enumerate_tail_class(ZERO, 1) == [ZERO]


def test_enumerate_declared_order():
    got = enumerate_tail_class(ep("", "01"), 3)
    assert got == [ep("", "01"), ep("0", "01"), ep("1", "01")]
    # the third member is the rotation (10)^w in canonical form
    assert got[2] == ep("", "10")


def test_enumerate_empty_prefix():
    assert enumerate_tail_class(ep("11", "010"), 0) == []


@given(points, st.integers(1, 30))
def test_enumeration_injective_and_equivalent(x, n):
    members = enumerate_tail_class(x, n)
    assert len(set(members)) == n
    assert all(tail_equiv(m, x) for m in members)


@given(st.sampled_from(["0", "1", "01", "001", "011"]))
def test_class_density(word):
    cls = TailClass(EpPoint("", word))
    for s in words_length_lex(5):
        window = cls.enumerate(2 ** (len(s) + 2))
        assert any(m.starts_with(s) for m in window)


# ------------------------------------------------------- saturation and Q


def test_saturate_single_class():
    pres = saturate([ZERO])
    assert pres.contains(ep("1101", "0"))
    assert not pres.contains(ONE)


def test_saturate_q():
    q = saturate([ZERO, ONE])
    assert q.contains(ep("10", "0")) and q.contains(ep("0", "1"))
    assert not q.contains(ep("", "01"))


def test_saturate_merges_equivalent_generators():
    pres = saturate([ep("", "01"), ep("", "10")])
    assert len(pres.classes) == 1


def test_classify_q():
    assert classify_q(ZERO) == "Q0"
    assert classify_q(ep("0", "1")) == "Q1"
    assert classify_q(ep("", "01")) is None


def test_presentation_enumeration_dense():
    assert SetPresentation.all_ep().check_dense(3)
    assert saturate([ep("", "01")]).check_dense(3)


def test_all_ep_enumeration_injective():
    pts = SetPresentation.all_ep().enumerate(200)
    assert len(set(pts)) == 200


# ------------------------------------------------------------ interleaving


def test_interleave_binary_example():
    assert interleave([ZERO, ONE], 2) == ep("", "01")


def test_interleave_identity():
    x = ep("011", "010")
    assert interleave([x], 1) == x


@given(st.lists(points, min_size=1, max_size=3))
def test_deinterleave_roundtrip(xs):
    n = len(xs)
    assert deinterleave(interleave(xs, n), n) == xs


@given(points, points)
def test_interleave_digits_match_formula(x, y):
    z = interleave([x, y], 2)
    for k in range(20):
        assert z.digit(2 * k) == x.digit(k)
        assert z.digit(2 * k + 1) == y.digit(k)


@settings(max_examples=50)
@given(points, points)
def test_interleave_preserves_saturation(x, y):
    """Shifted, prefixed copies of an interleaving split into tail-equivalent parts."""
    z = interleave([x, y], 2)
    for w in ["", "0", "10", "01101100"]:
        for k in range(9):
            parts = deinterleave(z.drop(k).prepend(w), 2)
            # each component stays in the union of the generating classes
            for p in parts:
                assert tail_equiv(p, x) or tail_equiv(p, y)


# --------------------------------------------------------------- embedding


def test_silver_prefix_against_naive_expansion():
    assert silver_embed(ZERO, 16) == silver_naive(ZERO, 16)
    assert silver_embed(ep("1", "01"), 40) == silver_naive(ep("1", "01"), 40)
    # frozen: blocks 0010, 000100, 00001000 truncated to depth 16
    assert silver_embed(ZERO, 16) == "0010000100000010"


def test_silver_injective_in_first_block():
    x, y = ZERO, ep("1", "0")
    assert x.digit(0) != y.digit(0)
    assert silver_embed(x, 4) != silver_embed(y, 4)


def test_silver_outputs_tail_inequivalent():
    """Bounded brute force: no shifts m, n <= 16 align the outputs on 64 digits."""
    a = silver_embed(ZERO, 96)
    b = silver_embed(ONE, 96)
    for m in range(17):
        for n in range(17):
            window = 64
            assert a[m : m + window] != b[n : n + window]


@given(points, points)
def test_silver_prefix_determined_and_injective(x, y):
    if x != y:
        assert silver_embed(x, 128) != silver_embed(y, 128)
    else:
        assert silver_embed(x, 64) == silver_embed(y, 64)
