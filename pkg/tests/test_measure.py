import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmeasure import DimensionError, Event, MeasureSpace, chi, expectation, inner, norm, nu, pos_neg_split, simple_form


def test_nu_examples(half):
    assert nu(half, half.empty()) == 0.0
    assert nu(half, half.event([0])) == 0.5
    space = MeasureSpace([0.1, 0.2, 0.7])
    assert nu(space, space.event([1, 2])) == pytest.approx(0.9, abs=1e-15)


def test_inner_examples(half):
    assert inner(half, np.ones(2), chi(half, half.event([0]))) == pytest.approx(0.5)
    assert inner(half, np.zeros(2), np.zeros(2)) == 0
    space = MeasureSpace([0.3, 0.0, 0.2, 0.5])
    for members in ([], [1], [0, 2], [0, 1, 2, 3]):
        A = space.event(members)
        assert inner(space, chi(space, A), chi(space, A)).real == pytest.approx(nu(space, A), abs=1e-15)
        assert norm(space, chi(space, A)) == pytest.approx(np.sqrt(nu(space, A)), abs=1e-15)


def test_inner_is_conjugate_linear_in_first_slot(half):
    f, g = np.array([1j, 0]), np.array([1, 0])
    assert inner(half, f, g) == pytest.approx(-0.5j)
    assert inner(half, g, f) == pytest.approx(0.5j)


def test_expectation(half):
    assert expectation(half, np.ones(2)) == 1.0
    assert expectation(half, [1, 2]) == 1.5
    A = half.event([1])
    assert expectation(half, chi(half, A)) == nu(half, A)


def test_expectation_warns_off_probability_spaces():
    with pytest.warns(UserWarning):
        expectation(MeasureSpace.counting(3), np.ones(3))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        expectation(MeasureSpace.uniform(3), np.ones(3))


def test_chi():
    space = MeasureSpace.uniform(3)
    np.testing.assert_array_equal(chi(space, space.omega()), np.ones(3))
    np.testing.assert_array_equal(chi(space, space.empty()), np.zeros(3))
    np.testing.assert_array_equal(chi(space, space.event([0, 2])), [1, 0, 1])


def test_pos_neg_split():
    fp, fm = pos_neg_split([-1, 2])
    np.testing.assert_array_equal(fp, [0, 2])
    np.testing.assert_array_equal(fm, [1, 0])
    fp, fm = pos_neg_split([0.5, 3])
    np.testing.assert_array_equal(fp, [0.5, 3])
    assert not fm.any()
    fp, fm = pos_neg_split(np.zeros(3))
    assert not fp.any() and not fm.any()


def test_simple_form_example():
    form = simple_form([1, 2, 1])
    np.testing.assert_array_equal(form.levels, [1, 2])
    assert [list(e) for e in form.level_events] == [[0, 2], [1]]
    assert [list(e) for e in form.upper_events] == [[0, 1, 2], [1]]
    assert len(simple_form(np.zeros(4)).levels) == 0
    A = Event.from_indices(5, [1, 3])
    form = simple_form(A.mask.astype(float))
    assert list(form.levels) == [1.0] and form.level_events == (A,)


def test_simple_form_rejects_negative():
    with pytest.raises(ValueError):
        simple_form([1, -1])


@given(st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0, 3.0, 7.5]), min_size=1, max_size=12))
def test_simple_form_reconstructs(values):
    f = np.array(values)
    form = simple_form(f)
    np.testing.assert_array_equal(form.reconstruct(), f)
    # the upper events are nested and decrease with the level
    for big, small in zip(form.upper_events, form.upper_events[1:]):
        assert small.issubset(big) and small != big
    assert np.all(form.increments() > 0)


def test_event_algebra():
    A, B = Event.from_indices(4, [0, 1]), Event.from_indices(4, [1, 2])
    assert list(A | B) == [0, 1, 2]
    assert list(A & B) == [1]
    assert list(A - B) == [0]
    assert list(~A) == [2, 3]
    assert (A - B).isdisjoint(B)
    assert (A & B).issubset(A)


def test_weights_validation():
    with pytest.raises(ValueError):
        MeasureSpace([0.5, -0.1])
    with pytest.raises(ValueError):
        MeasureSpace([np.nan, 1])
    space = MeasureSpace([0.25, 0.75])
    assert space.probability
    assert not MeasureSpace.counting(2).probability
    with pytest.raises(ValueError):
        space.event([2])


def test_dimension_mismatch(half):
    with pytest.raises(DimensionError):
        nu(half, Event.from_indices(3, [0]))
    with pytest.raises(DimensionError):
        inner(half, np.ones(3), np.ones(3))
