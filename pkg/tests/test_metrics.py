import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.distance import cdist

from scalogen.metrics import EvalReport, FeatureSet, knn_radii, precision_recall


def fs(rows, label=""):
    return FeatureSet(np.asarray(rows, dtype=float), label)


def brute_radii(v, k):
    d = cdist(v, v)
    np.fill_diagonal(d, np.inf)
    return np.sort(d, axis=1)[:, k - 1]


def brute_precision_recall(real, fake, k):
    rr = brute_radii(real, k)
    rf = brute_radii(fake, k)
    p = np.mean([np.any(np.linalg.norm(real - f, axis=1) <= rr) for f in fake])
    r = np.mean([np.any(np.linalg.norm(fake - x, axis=1) <= rf) for x in real])
    return float(p), float(r)


def test_knn_radii_collinear_example():
    pts = fs([[0.0], [1.0], [3.0]])
    np.testing.assert_array_equal(knn_radii(pts, 1), [1.0, 1.0, 2.0])
    np.testing.assert_array_equal(knn_radii(pts, 2), [3.0, 2.0, 3.0])


def test_knn_radii_duplicate_points_zero():
    pts = fs([[2.0, 2.0], [2.0, 2.0], [5.0, 5.0]])
    assert knn_radii(pts, 1)[0] == 0.0
    assert knn_radii(pts, 1)[1] == 0.0


def test_knn_radii_excludes_self():
    pts = fs(np.random.default_rng(0).normal(size=(10, 3)))
    assert np.all(knn_radii(pts, 1) > 0.0)


def test_knn_radii_matches_bruteforce():
    v = np.random.default_rng(1).normal(size=(10, 4))
    got = knn_radii(fs(v), 3)
    np.testing.assert_allclose(got, brute_radii(v, 3), rtol=0, atol=0)


def test_knn_radii_monotone_in_k():
    v = np.random.default_rng(2).normal(size=(12, 3))
    prev = knn_radii(fs(v), 1)
    for k in (2, 3, 4, 5):
        cur = knn_radii(fs(v), k)
        assert np.all(cur >= prev)
        prev = cur


def test_knn_radii_argument_errors():
    pts = fs([[0.0], [1.0], [2.0]])
    with pytest.raises(ValueError):
        knn_radii(pts, 0)
    with pytest.raises(ValueError):
        knn_radii(pts, 3)


def test_identical_sets_perfect_scores():
    v = np.random.default_rng(3).normal(size=(8, 5))
    rep = precision_recall(fs(v, "real"), fs(v, "fake"), k=2)
    assert rep.precision == 1.0
    assert rep.recall == 1.0
    assert (rep.k, rep.m_real, rep.m_fake) == (2, 8, 8)


def test_distant_sets_score_zero():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(9, 3))
    b = rng.normal(size=(9, 3)) + 1000.0
    rep = precision_recall(fs(a), fs(b), k=2)
    assert rep.precision == 0.0
    assert rep.recall == 0.0


def test_hand_worked_planar_example():
    # real: unit square corners plus center points; fake: center cluster plus
    # one far outlier. k = 2 radii worked by hand below.
    real = fs([[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5], [0.5, 0.4]])
    fake = fs([[0.5, 0.45], [0.52, 0.5], [0.5, 0.55], [8, 8], [0.48, 0.5], [0.5, 0.35]])
    rep = precision_recall(real, fake, k=2)
    # real 2-NN radii (0.64-0.78) cover the five cluster fakes; the outlier
    # at (8,8) is outside every sphere: precision 5/6
    assert rep.precision == pytest.approx(5 / 6)
    # fake manifold: a tight cluster (radii ~0.05-0.15) covering the two
    # center points, plus the outlier whose 2-NN radius 10.59 reaches only
    # the nearest corner (1,1) at distance 9.90; the other three corners sit
    # at 10.63-11.31: recall 3/6
    assert rep.recall == pytest.approx(3 / 6)


def test_precision_recall_matches_bruteforce():
    rng = np.random.default_rng(5)
    real = rng.normal(size=(15, 4))
    fake = rng.normal(size=(17, 4)) * 1.3 + 0.2
    rep = precision_recall(fs(real), fs(fake), k=3)
    p, r = brute_precision_recall(real, fake, 3)
    assert rep.precision == p
    assert rep.recall == r


@given(
    seed=st.integers(0, 2**32),
    m_real=st.integers(4, 20),
    m_fake=st.integers(4, 20),
    k=st.integers(1, 3),
    spread=st.floats(0.1, 3.0),
)
@settings(max_examples=50)
def test_precision_recall_oracle_property(seed, m_real, m_fake, k, spread):
    rng = np.random.default_rng(seed)
    real = rng.normal(size=(m_real, 3))
    fake = rng.normal(size=(m_fake, 3)) * spread
    rep = precision_recall(fs(real), fs(fake), k=k)
    p, r = brute_precision_recall(real, fake, k)
    assert rep.precision == p
    assert rep.recall == r
    assert 0.0 <= rep.precision <= 1.0
    assert 0.0 <= rep.recall <= 1.0


def test_scores_monotone_in_k():
    rng = np.random.default_rng(6)
    real = fs(rng.normal(size=(30, 4)))
    fake = fs(rng.normal(size=(30, 4)) + 0.5)
    prev = precision_recall(real, fake, k=1)
    for k in (2, 3, 4, 5):
        cur = precision_recall(real, fake, k=k)
        assert cur.precision >= prev.precision
        assert cur.recall >= prev.recall
        prev = cur


def test_precision_recall_swap_symmetry():
    rng = np.random.default_rng(7)
    a = fs(rng.normal(size=(12, 3)))
    b = fs(rng.normal(size=(14, 3)))
    ab = precision_recall(a, b, k=2)
    ba = precision_recall(b, a, k=2)
    assert ab.precision == ba.recall
    assert ab.recall == ba.precision


def test_isometry_invariance():
    rng = np.random.default_rng(8)
    real = rng.normal(size=(10, 3))
    fake = rng.normal(size=(11, 3))
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    shift = np.array([5.0, -2.0, 0.5])
    base = precision_recall(fs(real), fs(fake), k=2)
    moved = precision_recall(fs(real @ q + shift), fs(fake @ q + shift), k=2)
    assert moved.precision == pytest.approx(base.precision, abs=1e-12)
    assert moved.recall == pytest.approx(base.recall, abs=1e-12)


def test_block_tiling_boundary():
    # more vectors than one distance block; compare against the direct path
    rng = np.random.default_rng(9)
    v = rng.normal(size=(600, 2))
    got = knn_radii(fs(v), 3)
    np.testing.assert_array_equal(got, brute_radii(v, 3))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        precision_recall(fs(np.zeros((4, 3))), fs(np.zeros((4, 2))), k=1)


def test_feature_set_validation():
    with pytest.raises(ValueError):
        FeatureSet(np.zeros(4))
    with pytest.raises(ValueError):
        FeatureSet(np.array([[np.nan, 0.0]]))
    assert len(FeatureSet(np.zeros((3, 2)))) == 3


def test_eval_report_validation():
    with pytest.raises(ValueError):
        EvalReport(precision=1.2, recall=0.0, k=1, m_real=5, m_fake=5)
    with pytest.raises(ValueError):
        EvalReport(precision=0.5, recall=-0.1, k=1, m_real=5, m_fake=5)
    # NaN marks a skipped evaluation and is allowed
    rep = EvalReport(precision=float("nan"), recall=float("nan"), k=3, m_real=1, m_fake=1)
    assert np.isnan(rep.precision)
