import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bsf.errors import DimensionError, FaceError, ParseError
from bsf.pareto import (
    SampleSet,
    dominates,
    enumerate_faces,
    load_sample,
    nondominated_filter,
    save_sample,
    skeleton_decompose,
    subsample,
)


def brute_force_front(F):
    """O(n^2) pairwise oracle."""
    F = np.asarray(F, dtype=float)
    keep = []
    for i in range(len(F)):
        dominated = False
        for j in range(len(F)):
            if i != j and np.all(F[j] <= F[i]) and np.any(F[j] < F[i]):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


# -- dominance ---------------------------------------------------------------


@pytest.mark.parametrize(
    "x,y,expected",
    [
        ((1, 2), (1, 3), True),
        ((1, 2), (1, 2), False),
        ((0, 5), (1, 4), False),
    ],
)
def test_dominates(x, y, expected):
    assert dominates(x, y) is expected


def test_dominates_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        dominates((1, 2), (1, 2, 3))


@settings(max_examples=200)
@given(st.integers(0, 10_000))
def test_dominance_antisymmetric_and_transitive(seed):
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, 4, size=(3, 3)).astype(float)
    assert not (dominates(x, y) and dominates(y, x))
    if dominates(x, y) and dominates(y, z):
        assert dominates(x, z)


# -- non-dominated filter -------------------------------------------------------


def test_filter_simple():
    S = SampleSet([(1, 2), (2, 1), (2, 2)])
    out = nondominated_filter(S)
    np.testing.assert_array_equal(out.objectives, [(1, 2), (2, 1)])


def test_filter_singleton():
    S = SampleSet([(3.5, 1.2)])
    np.testing.assert_array_equal(nondominated_filter(S).objectives, S.objectives)


def test_filter_keeps_duplicates_and_order():
    S = SampleSet([(2, 1), (1, 2), (2, 1), (3, 3)])
    out = nondominated_filter(S)
    np.testing.assert_array_equal(out.objectives, [(2, 1), (1, 2), (2, 1)])


def test_filter_matches_brute_force():
    rng = np.random.default_rng(0)
    F = rng.normal(size=(200, 3))
    S = SampleSet(F)
    out = nondominated_filter(S)
    np.testing.assert_array_equal(out.objectives, F[brute_force_front(F)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 120))
def test_filter_matches_brute_force_random(seed, m, n):
    rng = np.random.default_rng(seed)
    # integer grids force plenty of ties and duplicates
    F = rng.integers(0, 4, size=(n, m)).astype(float)
    out = nondominated_filter(SampleSet(F))
    np.testing.assert_array_equal(out.objectives, F[brute_force_front(F)])


# -- subsample -------------------------------------------------------------------


def test_subsample_full_face_equals_filter():
    rng = np.random.default_rng(1)
    S = SampleSet(rng.normal(size=(60, 3)))
    np.testing.assert_array_equal(
        subsample(S, (0, 1, 2)).objectives, nondominated_filter(S).objectives
    )


def test_subsample_projected_front():
    S = SampleSet([(0, 5, 9), (3, 3, 9), (5, 0, 9), (9, 9, 0)])
    out = subsample(S, (0, 1))
    np.testing.assert_array_equal(out.objectives, [(0, 5, 9), (3, 3, 9), (5, 0, 9)])


def test_subsample_single_objective_is_argmin():
    S = SampleSet([(3, 0), (1, 5), (2, 2)])
    out = subsample(S, (0,))
    np.testing.assert_array_equal(out.objectives, [(1, 5)])


def test_subsample_rejects_empty_face():
    S = SampleSet([(1, 2)])
    with pytest.raises(FaceError):
        subsample(S, ())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_subsample_matches_projection_oracle(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 5))
    F = rng.integers(0, 5, size=(int(rng.integers(1, 100)), m)).astype(float)
    size = int(rng.integers(1, m + 1))
    face = tuple(sorted(rng.choice(m, size=size, replace=False).tolist()))
    out = subsample(SampleSet(F), face)
    np.testing.assert_array_equal(out.objectives, F[brute_force_front(F[:, list(face)])])


# -- skeleton decomposition --------------------------------------------------------


def test_skeleton_decompose_counts_m3():
    S = SampleSet(np.random.default_rng(2).normal(size=(30, 3)))
    parts = skeleton_decompose(S, 3)
    assert len(parts) == 7
    sizes = [len(face) for face in parts]
    assert sizes == sorted(sizes)


def test_skeleton_decompose_counts_m5():
    S = SampleSet(np.random.default_rng(3).normal(size=(40, 5)))
    assert len(skeleton_decompose(S, 3)) == 25


def test_skeleton_full_face_entry_is_filter():
    S = SampleSet(np.random.default_rng(4).normal(size=(25, 3)))
    parts = skeleton_decompose(S, 3)
    np.testing.assert_array_equal(
        parts[(0, 1, 2)].objectives, nondominated_filter(S).objectives
    )


def test_enumerate_faces_order():
    faces = list(enumerate_faces(3, 3))
    assert faces == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]


# -- sample set wrangling ------------------------------------------------------------


def test_sample_set_rejects_nan():
    with pytest.raises(DimensionError):
        SampleSet([(np.nan, 1.0)])


def test_sample_set_ambient_orders_solutions_first():
    S = SampleSet([(1.0, 2.0)], solutions=[(9.0,)])
    np.testing.assert_array_equal(S.ambient(), [(9.0, 1.0, 2.0)])


def test_concat_checks_dimensions():
    with pytest.raises(DimensionError):
        SampleSet.concat([SampleSet([(1, 2)]), SampleSet([(1, 2, 3)])])


# -- CSV round trip -------------------------------------------------------------------


def test_csv_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(5)
    S = SampleSet(rng.normal(size=(17, 3)) * 1e3, solutions=rng.normal(size=(17, 2)))
    path = tmp_path / "sample.csv"
    save_sample(S, path)
    back = load_sample(path)
    np.testing.assert_array_equal(back.objectives, S.objectives)
    np.testing.assert_array_equal(back.solutions, S.solutions)


def test_csv_header_and_single_row(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("f1,f2\n1.0,2.0\n")
    S = load_sample(path)
    assert S.n == 1 and S.m == 2 and S.solutions is None


def test_csv_rejects_nan_with_line_number(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1,f2\n1.0,2.0\nnan,3.0\n")
    with pytest.raises(ParseError, match="line 3"):
        load_sample(path)


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1.0,2.0\n")
    with pytest.raises(ParseError, match="line 1"):
        load_sample(path)


def test_csv_rejects_short_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1,f2\n1.0\n")
    with pytest.raises(ParseError, match="line 2"):
        load_sample(path)
