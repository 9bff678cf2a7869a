import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banditsep.core import (
    ExampleStream,
    LabeledExample,
    LinearSeparator,
    load_dataset,
    probe_strong_separability,
    run_bandit_session,
    run_fullinfo_session,
    sample_prediction,
    save_dataset,
    verify_strong_separability,
    verify_weak_separability,
)
from banditsep.learners import MulticlassPerceptron, OvaLearner


def test_labeled_example_validation():
    with pytest.raises(ValueError):
        LabeledExample(x=np.array([1.0]), y=0)
    with pytest.raises(ValueError):
        LabeledExample(x=np.array([[1.0]]), y=1)
    ex = LabeledExample(x=[1, 2], y=3)
    assert ex.x.dtype == float


def test_separator_validation():
    with pytest.raises(ValueError):
        LinearSeparator(np.eye(2), margin=0.1, kind="medium")
    with pytest.raises(ValueError):
        LinearSeparator(np.eye(2), margin=0.0, kind="weak")
    sep = LinearSeparator(np.eye(2) / 2, margin=0.1, kind="strong")
    assert sep.total_sq_norm == pytest.approx(0.5)


def test_sample_prediction_point_mass_skips_rng():
    rng = np.random.default_rng(0)
    before = rng.bit_generator.state["state"]["state"]
    assert sample_prediction(np.array([0.0, 1.0, 0.0]), rng) == 2
    assert rng.bit_generator.state["state"]["state"] == before
    # a genuine draw consumes randomness
    sample_prediction(np.array([0.5, 0.5]), rng)
    assert rng.bit_generator.state["state"]["state"] != before


def test_stream_needs_exactly_one_source():
    ex = [LabeledExample(x=np.ones(2), y=1)]
    with pytest.raises(ValueError):
        ExampleStream(K=2, d=2)
    with pytest.raises(ValueError):
        ExampleStream(K=2, d=2, examples=ex, adversary=object())
    with pytest.raises(ValueError):
        ExampleStream(K=2, d=2, adversary=object())  # missing rounds


def test_bandit_session_reveals_only_correctness():
    class Probe:
        K = 2

        def __init__(self):
            self.seen = []

        def predict_proba(self, x):
            return np.array([1.0, 0.0])

        def update(self, x, yhat, z):
            self.seen.append((yhat, z))

    ex = [LabeledExample(x=np.ones(2), y=1), LabeledExample(x=np.ones(2), y=2)]
    probe = Probe()
    trace = run_bandit_session(probe, ExampleStream(K=2, d=2, examples=ex), seed=0)
    assert probe.seen == [(1, 0), (1, 1)]
    assert trace.mistakes == 1
    assert trace.records == [(1, 1, 0, 0), (2, 1, 1, 1)]


def test_session_determinism():
    rng = np.random.default_rng(3)
    ex = [
        LabeledExample(x=rng.standard_normal(3), y=int(rng.integers(1, 4)))
        for _ in range(50)
    ]
    stream = ExampleStream(K=3, d=3, examples=ex)
    t1 = run_bandit_session(OvaLearner(3, 3), stream, seed=7)
    t2 = run_bandit_session(OvaLearner(3, 3), stream, seed=7)
    assert t1.records == t2.records


def test_fullinfo_session_reveals_label():
    ex = [LabeledExample(x=np.array([1.0, 0.0]), y=2)]
    learner = MulticlassPerceptron(2, 2)
    run_fullinfo_session(learner, ExampleStream(K=2, d=2, examples=ex))
    # the update used the true label, not just the correctness bit
    assert learner.W[1, 0] == 1.0 and learner.W[0, 0] == -1.0


def test_verify_weak_accepts_and_locates_violation():
    W = np.array([[0.5, 0.0], [-0.5, 0.0]])
    sep = LinearSeparator(W, margin=0.1, kind="weak")
    good = [LabeledExample(x=np.array([1.0, 0.0]), y=1)]
    assert verify_weak_separability(good, sep, 0.1) == (True, None)
    bad = good + [LabeledExample(x=np.array([1.0, 0.0]), y=2)]
    ok, viol = verify_weak_separability(bad, sep, 0.1)
    assert not ok and viol == (2, 1)


def test_verify_weak_rejects_overweight_witness():
    sep = LinearSeparator(np.eye(2), margin=0.1, kind="weak")  # total norm 2
    ok, viol = verify_weak_separability([], sep, 0.1)
    assert not ok and viol is None


def test_verify_strong_checks_both_sides():
    W = np.array([[0.5, 0.0], [-0.5, 0.0]])
    sep = LinearSeparator(W, margin=0.2, kind="strong")
    ex = [LabeledExample(x=np.array([1.0, 0.0]), y=1)]
    assert verify_strong_separability(ex, sep, 0.2) == (True, None)
    # positive own score but the competitor is not pushed below -gamma/2
    W2 = np.array([[0.5, 0.0], [0.0, 0.5]])
    sep2 = LinearSeparator(W2, margin=0.2, kind="strong")
    ok, viol = verify_strong_separability(ex, sep2, 0.2)
    assert not ok and viol == (1, 2)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.booleans()),
                min_size=1, max_size=20), st.floats(0.01, 0.3))
def test_two_class_weak_implies_strong_at_half_margin(points, gamma):
    """With two classes, any weak separator (w1, w2) converts into a strong
    one via ((w1 - w2)/2, (w2 - w1)/2) at the same margin."""
    rng = np.random.default_rng(0)
    w1, w2 = rng.standard_normal(2), rng.standard_normal(2)
    scale = 1.0 / np.sqrt(np.sum(w1 ** 2) + np.sum(w2 ** 2))
    w1, w2 = w1 * scale, w2 * scale
    sep = LinearSeparator(np.stack([w1, w2]), margin=gamma, kind="weak")
    ex = [
        LabeledExample(x=np.array([a, b]), y=1 if flip else 2)
        for a, b, flip in points
    ]
    ok, _ = verify_weak_separability(ex, sep, gamma)
    if not ok:
        return
    conv = np.stack([(w1 - w2) / 2.0, (w2 - w1) / 2.0])
    strong = LinearSeparator(conv, margin=gamma, kind="strong")
    assert verify_strong_separability(ex, strong, gamma)[0]


def test_probe_strong_separability():
    ex = [
        LabeledExample(x=np.array([0.9, 0.0]), y=1),
        LabeledExample(x=np.array([-0.9, 0.0]), y=2),
    ]
    assert probe_strong_separability(ex, K=2, gamma=0.1, budget=500, seed=0)
    clash = ex + [LabeledExample(x=np.array([0.9, 0.0]), y=2)]
    assert not probe_strong_separability(clash, K=2, gamma=0.1, budget=200, seed=0)


def test_dataset_roundtrip(tmp_path):
    rng = np.random.default_rng(5)
    ex = [
        LabeledExample(x=rng.uniform(-1, 1, size=3), y=int(rng.integers(1, 4)))
        for _ in range(20)
    ]
    W = rng.standard_normal((3, 3))
    W /= np.sqrt(np.sum(W ** 2))
    wit = LinearSeparator(W, margin=0.05, kind="weak")
    path = tmp_path / "ds.txt"
    save_dataset(path, ex, K=3, d=3, gamma=0.05, radius=1.0, mode="weak", witness=wit)
    back = load_dataset(path)
    assert back.K == 3 and back.d == 3 and back.gamma == 0.05 and back.radius == 1.0
    assert len(back) == 20
    for a, b in zip(ex, back.examples):
        assert a.y == b.y and np.array_equal(a.x, b.x)
    assert np.array_equal(back.witness.weights, W)
    assert back.witness.kind == "weak"


def test_dataset_roundtrip_without_witness(tmp_path):
    ex = [LabeledExample(x=np.array([0.25, -0.5]), y=2)]
    path = tmp_path / "ds.txt"
    save_dataset(path, ex, K=2, d=2, gamma=0.1, radius=1.0, mode="strong")
    back = load_dataset(path)
    assert back.witness is None and len(back) == 1
