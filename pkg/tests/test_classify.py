import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aglab.classify import (
    EQUIVALENT_KINDS,
    ClassKind,
    characterization_witness,
    classify,
    completely_regular,
    completely_regular_witness,
    global_flags,
    intra_regular_witness,
    left_quasi_regular_witness,
    left_regular_witness,
    regular_witness,
    right_regular_witness,
    verify_witness,
    weakly_regular_witness,
    witness,
)
from aglab.enumeration import EnumSpec, enumerate_backtracking, enumerate_naive
from aglab.magma import Magma, constant_magma

ALL_WITNESS_FUNCS = [
    regular_witness,
    weakly_regular_witness,
    intra_regular_witness,
    right_regular_witness,
    left_regular_witness,
    left_quasi_regular_witness,
    completely_regular_witness,
]


@pytest.mark.parametrize("func", ALL_WITNESS_FUNCS)
def test_example_d_has_no_witness(example, func):
    assert func(example, example.index("d")) is None


def test_example_zero_element(example):
    a = example.index("a")
    assert regular_witness(example, a) == a


def test_example_characterization_absent_at_d(example):
    assert characterization_witness(example, example.index("d")) is None


def test_addition_mod_2_witnesses(z2):
    assert regular_witness(z2, 1) == 1
    assert weakly_regular_witness(z2, 0) == (0, 0)
    assert weakly_regular_witness(z2, 1) == (0, 1)
    assert intra_regular_witness(z2, 0) == (0, 0)
    assert right_regular_witness(z2, 1) == 1
    assert right_regular_witness(z2, 0) == 0
    assert left_regular_witness(z2, 1) == 1
    assert left_quasi_regular_witness(z2, 0) == (0, 0)
    assert left_quasi_regular_witness(z2, 1) == (0, 1)
    assert characterization_witness(z2, 0) == (0, 0)
    assert all(completely_regular(z2, a) for a in z2.elements)


def test_constant_magma_classes():
    m = constant_magma(2)
    assert left_regular_witness(m, 0) == 0
    assert completely_regular(m, 0)
    # every product is 0, so 1 is never reached
    assert not completely_regular(m, 1)


def test_classify_example(example):
    report = classify(example)
    c = example.index("c")
    for kind in ClassKind:
        assert not report[kind].holds_globally
        assert report[kind].first_failing_element == c
        assert report[kind].witnesses[example.index("d")] is None


def test_classify_addition_mod_2(z2):
    assert all(classify(z2).flags().values())


def test_report_json_shape(example):
    d = classify(example).to_dict(example)
    assert set(d) == {k.value for k in ClassKind}
    entry = d["weakly_regular"]
    assert set(entry) == {"global", "witnesses", "first_failing"}
    assert entry["witnesses"]["d"] is None
    assert entry["witnesses"]["a"] == ["a", "a"]
    assert entry["first_failing"] == "c"


def _brute_least(m, arity, equation):
    for params in itertools.product(m.elements, repeat=arity):
        if equation(*params):
            return params if arity > 1 else params[0]
    return None


@st.composite
def magmas(draw, max_order=4):
    n = draw(st.integers(1, max_order))
    flat = draw(st.lists(st.integers(0, n - 1), min_size=n * n, max_size=n * n))
    return Magma.from_flat(n, flat)


@settings(max_examples=200)
@given(magmas())
def test_witnesses_sound_and_least(m):
    t = m.table
    for a in m.elements:
        eqs = {
            ClassKind.REGULAR: (1, lambda x: t[t[a][x]][a] == a),
            ClassKind.WEAKLY_REGULAR: (2, lambda x, y: t[t[a][x]][t[a][y]] == a),
            ClassKind.INTRA_REGULAR: (2, lambda x, y: t[t[x][t[a][a]]][y] == a),
            ClassKind.RIGHT_REGULAR: (1, lambda x: t[t[a][a]][x] == a),
            ClassKind.LEFT_REGULAR: (1, lambda x: t[x][t[a][a]] == a),
            ClassKind.LEFT_QUASI_REGULAR: (2, lambda x, y: t[t[x][a]][t[y][a]] == a),
        }
        for kind, (arity, eq) in eqs.items():
            w = witness(m, kind, a)
            assert w == _brute_least(m, arity, eq)
            if w is not None:
                assert verify_witness(m, kind, a, w)
        cw = completely_regular_witness(m, a)
        parts = [witness(m, k, a) for k in (ClassKind.REGULAR, ClassKind.LEFT_REGULAR, ClassKind.RIGHT_REGULAR)]
        assert (cw is None) == (None in parts)
        if cw is not None:
            assert verify_witness(m, ClassKind.COMPLETELY_REGULAR, a, cw)
        assert characterization_witness(m, a) == _brute_least(m, 2, lambda x, z: t[t[x][a]][t[a][z]] == a)


@settings(max_examples=100)
@given(magmas())
def test_global_flag_matches_per_element(m):
    report = classify(m)
    for kind in ClassKind:
        kr = report[kind]
        assert kr.holds_globally == all(w is not None for w in kr.witnesses)
        assert (kr.first_failing_element is None) == kr.holds_globally
        assert global_flags(m)[kind] == kr.holds_globally
    assert classify(m) == report


def test_intra_regular_members_have_witnesses():
    for n in (1, 2, 3):
        for m in enumerate_naive(EnumSpec(n, ag=True, classes=(ClassKind.INTRA_REGULAR,))):
            assert all(intra_regular_witness(m, a) is not None for a in m.elements)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_six_flags_equal_with_left_identity(n):
    for m in enumerate_backtracking(EnumSpec(n, ag=True, left_identity=True)):
        flags = global_flags(m)
        assert len({flags[k] for k in EQUIVALENT_KINDS}) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_characterization_iff_intra_with_left_identity(n):
    for m in enumerate_backtracking(EnumSpec(n, ag=True, left_identity=True)):
        intra = all(intra_regular_witness(m, a) is not None for a in m.elements)
        char = all(characterization_witness(m, a) is not None for a in m.elements)
        assert intra == char


def test_class_kind_parse():
    assert ClassKind.parse("left-quasi-regular") is ClassKind.LEFT_QUASI_REGULAR
    assert ClassKind.parse("REGULAR") is ClassKind.REGULAR
    with pytest.raises(ValueError):
        ClassKind.parse("semisimple")
