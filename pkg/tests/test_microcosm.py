"""Pointwise transformations and the tower of families they live in."""

from fractions import Fraction
import functools

import pytest
from hypothesis import given, settings, strategies as st

from gmachines.errors import WrapSplitRequired
from gmachines.microcosm import (IDENTITY, MicrocosmSpec, Perm,
                                 TransformationDescriptor, apply, apply_box,
                                 apply_mset, classify, compose,
                                 decompose_star, member)
from gmachines.space import MSet, equal_ae

from conftest import seg


def T(slope=1, offset=0, perm=None, shifts=None):
    return TransformationDescriptor(slope, Fraction(offset), perm, shifts)


def test_compose_inverse_translations():
    assert compose(T(offset=1), T(offset=-1)).is_identity()


def test_compose_affine():
    c = compose(T(slope=2), T(offset=3))
    assert c.slope == 2 and c.offset == 6


def test_swap_is_involutive():
    p12 = T(perm=Perm({1: 2, 2: 1}))
    assert compose(p12, p12).is_identity()


def test_inverse_round_trip():
    t = T(slope=3, offset=-2, perm=Perm({1: 2, 2: 3, 3: 1}),
          shifts={2: Fraction(1, 3)})
    assert compose(t, t.inverse()).is_identity()
    assert compose(t.inverse(), t).is_identity()


def test_apply_point():
    assert apply(IDENTITY, Fraction(7)) == (Fraction(7), {})
    assert apply(T(offset=2), Fraction(1, 2)) == (Fraction(5, 2), {})
    # coordinate shifts wrap around the unit circle
    x, cs = apply(T(shifts={1: Fraction(1, 2)}), Fraction(0),
                  {1: Fraction(3, 4)})
    assert cs[1] == Fraction(1, 4)


def test_apply_mset_translation():
    out = apply_mset(T(offset=3), seg(0, 2))
    assert equal_ae(out, seg(3, 5))


def test_apply_mset_shift_without_wrap():
    src = seg(0, 1, **{"1": ("3/4", 1)})
    out = apply_mset(T(shifts={1: Fraction(1, 2)}), src)
    assert equal_ae(out, seg(0, 1, **{"1": ("1/4", "1/2")}))


def test_shift_straddling_seam():
    src = seg(0, 1, **{"1": (0, "3/4")})
    t = T(shifts={1: Fraction(1, 2)})
    # the box-level map cannot represent a torn image ...
    with pytest.raises(WrapSplitRequired):
        apply_box(t, src.boxes[0])
    # ... but the set-level one splits it
    torn = MSet(seg(0, 1, **{"1": (0, "1/4")}).boxes
                + seg(0, 1, **{"1": ("1/2", 1)}).boxes)
    assert equal_ae(apply_mset(t, src), torn)


def test_classify_translation():
    got = {str(s) for s in classify(T(offset=5))}
    assert got == {"z", "aff", "m(1)", "mbar(1)"}


def test_classify_dilation_has_no_rigid_family():
    got = {str(s) for s in classify(T(slope=2))}
    assert got == {"h", "aff"}


def test_classify_reports_least_index():
    t = T(offset=2, perm=Perm({1: 3, 3: 1}))
    got = {str(s) for s in classify(t)}
    assert got == {"m(3)", "mbar(3)"}


def test_member_is_monotone_in_index():
    t = T(offset=2, perm=Perm({1: 3, 3: 1}), shifts={2: Fraction(1, 4)})
    assert not member(t, MicrocosmSpec.parse("m(3)"))
    assert member(t, MicrocosmSpec.parse("mbar(3)"))
    assert member(t, MicrocosmSpec.parse("mbar(7)"))
    assert member(t, MicrocosmSpec.parse("macrocosm"))
    assert not member(t, MicrocosmSpec.parse("aff"))


def test_spec_parse_and_fields():
    s = MicrocosmSpec.parse("m(3)")
    assert (s.kind, s.index) == ("m", 3)
    assert str(s) == "m(3)"
    assert MicrocosmSpec.parse("z").kind == "z"
    with pytest.raises(ValueError):
        MicrocosmSpec.parse("q(2)")


def test_decompose_star_identity():
    assert decompose_star(Perm({})) == []


def test_decompose_star_transposition():
    assert decompose_star(Perm({1: 2, 2: 1})) == [2]


def _rebuild(factors):
    return functools.reduce(lambda acc, a: Perm({1: a, a: 1}).compose(acc),
                            factors, Perm({}))


def test_decompose_star_three_cycle():
    p = Perm.from_cycle([1, 2, 3])
    facs = decompose_star(p)
    assert _rebuild(facs).to_json() == p.to_json()
    assert len(facs) <= 2 * 3


@st.composite
def perms(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    import random
    rng = random.Random(draw(st.integers(0, 2 ** 16)))
    img = list(range(1, n + 1))
    rng.shuffle(img)
    return Perm({i + 1: img[i] for i in range(n)})


@given(perms())
@settings(max_examples=50, deadline=None)
def test_decompose_star_rebuilds_and_stays_short(p):
    facs = decompose_star(p)
    assert _rebuild(facs).to_json() == p.to_json()
    assert len(facs) <= 2 * len(p.support()) if p.support() else facs == []


@st.composite
def descriptors(draw):
    slope = draw(st.sampled_from([1, 2, Fraction(1, 2)]))
    offset = draw(st.fractions(min_value=-2, max_value=2, max_denominator=3))
    perm = draw(perms()) if draw(st.booleans()) else None
    shifts = None
    if draw(st.booleans()):
        shifts = {draw(st.integers(1, 3)):
                  draw(st.fractions(min_value=0, max_value="2/3",
                                    max_denominator=3))}
    return TransformationDescriptor(slope, offset, perm, shifts)


_POINTS = [(Fraction(1, 5), {1: Fraction(1, 7), 2: Fraction(2, 7),
                             3: Fraction(3, 7), 4: Fraction(4, 7),
                             5: Fraction(5, 7)})]


def _same(f, g):
    return all(apply(f, x, dict(cs)) == apply(g, x, dict(cs))
               for x, cs in _POINTS)


@given(descriptors(), descriptors(), descriptors())
@settings(max_examples=60, deadline=None)
def test_compose_is_associative_pointwise(f, g, h):
    assert _same(compose(compose(f, g), h), compose(f, compose(g, h)))


@given(descriptors())
@settings(max_examples=60, deadline=None)
def test_identity_is_neutral(f):
    assert _same(compose(f, IDENTITY), f)
    assert _same(compose(IDENTITY, f), f)


@given(descriptors())
@settings(max_examples=60, deadline=None)
def test_json_round_trip(f):
    back = TransformationDescriptor.from_json(f.to_json())
    assert back.key() == f.key()
