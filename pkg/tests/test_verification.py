import json
import random

import pytest

from twostep.backprop import GradientSet, classical_backward, two_step_backward
from twostep.loss import LossKind, loss_grad
from twostep.matrix import ColumnVector, Matrix, ShapeError
from twostep.network import Network, NetworkSpec, forward, init_network, output
from twostep.verification import (
    closed_form_a111,
    closed_form_a121,
    compare_gradients,
    finite_difference_gradients,
    relative_error,
)

from .conftest import random_matrix, random_spec, random_vector

W1 = Matrix([[0.5, 0.1]])
W2 = Matrix([[2.0, -1.0]])
W1_121 = Matrix([[0.5, 0.1], [-0.3, 0.2]])
W2_121 = Matrix([[2.0, 1.0, -1.0]])


def _two_step(net, x, y=None, kind=LossKind.PAPER_IDENTITY):
    trace = forward(net, x)
    y = y if y is not None else ColumnVector.zeros(net.spec.sizes[-1])
    return two_step_backward(net, trace, loss_grad(kind, output(trace), y))[1]


def _net(sizes, act, w1, w2):
    return Network(NetworkSpec(sizes, act, act, "augmented"), (w1, w2))


class TestClosedForms:
    def test_a111_identity(self):
        dw1, dw2 = closed_form_a111(W1, W2, 2.0, "identity")
        assert dw1.tolist() == [[4.0, 2.0]]
        assert dw2.row(0) == pytest.approx([1.1, 1.0], abs=1e-12)

    def test_a111_zero_input(self):
        dw1, _ = closed_form_a111(W1, W2, 0.0, "identity")
        assert dw1[0, 0] == 0.0
        assert dw1[0, 1] == 2.0

    def test_a121_identity(self):
        dw1, dw2 = closed_form_a121(W1_121, W2_121, 2.0, "identity")
        assert dw2.row(0) == pytest.approx([1.1, -0.4, 1.0], abs=1e-12)
        assert dw1.tolist() == [[4.0, 2.0], [2.0, 1.0]]

    @pytest.mark.parametrize("act", ["identity", "sigmoid", "tanh"])
    def test_random_draws_match_two_step(self, act, rng):
        for _ in range(25):
            w1, w2, x = random_matrix(rng, 1, 2, -2, 2), random_matrix(rng, 1, 2, -2, 2), rng.uniform(-2, 2)
            got = _two_step(_net((1, 1, 1), act, w1, w2), [x])
            assert compare_gradients(got, GradientSet(closed_form_a111(w1, w2, x, act)), 1e-12).passed
            w1, w2 = random_matrix(rng, 2, 2, -2, 2), random_matrix(rng, 1, 3, -2, 2)
            got = _two_step(_net((1, 2, 1), act, w1, w2), [x])
            assert compare_gradients(got, GradientSet(closed_form_a121(w1, w2, x, act)), 1e-12).passed

    def test_sigmoid_worked_weights(self):
        got = _two_step(_net((1, 1, 1), "sigmoid", W1, W2), [2.0])
        assert compare_gradients(got, GradientSet(closed_form_a111(W1, W2, 2.0, "sigmoid")), 1e-12).passed

    def test_rejects_relu_and_bad_shapes(self):
        with pytest.raises(ValueError):
            closed_form_a111(W1, W2, 1.0, "relu")
        with pytest.raises(ShapeError):
            closed_form_a111(W1_121, W2, 1.0, "identity")
        with pytest.raises(ShapeError):
            closed_form_a121(W1, W2_121, 1.0, "identity")


class TestFiniteDifferences:
    def test_worked_example(self):
        net = _net((1, 1, 1), "identity", W1, W2)
        for digits in (40, None):
            fd = finite_difference_gradients(net, "paper-identity", [2.0], [0.0], 1e-6, digits)
            assert fd.layer(1).row(0) == pytest.approx([4.0, 2.0], abs=1e-9)
            assert fd.layer(2).row(0) == pytest.approx([1.1, 1.0], abs=1e-9)

    def test_at_minimum(self):
        net = init_network(NetworkSpec((2, 3, 2), "identity", "identity"), 4)
        x = [0.3, -0.8]
        y = output(forward(net, x))
        fd = finite_difference_gradients(net, LossKind.SQUARED_ERROR, x, y)
        assert all(abs(v) <= 1e-9 for g in fd for v in g.data)

    def test_sigmoid_a231_seed42(self):
        net = init_network(NetworkSpec((2, 3, 1), "sigmoid", "sigmoid"), 42)
        x, y = [0.4, -1.3], [0.7]
        fd = finite_difference_gradients(net, "squared-error", x, y)
        analytic = _two_step(net, x, ColumnVector(y), LossKind.SQUARED_ERROR)
        report = compare_gradients(analytic, fd, 1e-5, ("two-step", "finite-diff"))
        assert report.passed, report.table()

    def test_network_untouched(self, rng):
        net = init_network(NetworkSpec((3, 4, 2), "tanh", "sigmoid"), 9)
        before = [w.data for w in net.weights]
        finite_difference_gradients(net, "squared-error", random_vector(rng, 3), random_vector(rng, 2))
        finite_difference_gradients(net, "squared-error", random_vector(rng, 3), random_vector(rng, 2), digits=None)
        assert [w.data for w in net.weights] == before

    def test_decimal_and_double_agree_on_large_gradients(self, rng):
        for _ in range(10):
            spec = random_spec(rng, max_depth=2)
            net = init_network(spec, rng.randrange(2**32))
            x, y = random_vector(rng, spec.sizes[0]), random_vector(rng, spec.sizes[-1])
            hi = finite_difference_gradients(net, "squared-error", x, y)
            lo = finite_difference_gradients(net, "squared-error", x, y, digits=None)
            for a, b in zip(hi, lo):
                for p, q in zip(a.data, b.data):
                    assert abs(p - q) <= 1e-8

    def test_triple_agreement(self, rng):
        for _ in range(15):
            spec = random_spec(rng, max_depth=3)
            net = init_network(spec, rng.randrange(2**32))
            x, y = random_vector(rng, spec.sizes[0]), random_vector(rng, spec.sizes[-1])
            kind = rng.choice(list(LossKind))
            trace = forward(net, x)
            g = loss_grad(kind, output(trace), y)
            _, two = two_step_backward(net, trace, g)
            assert compare_gradients(two, classical_backward(net, trace, g), 1e-12).passed
            assert compare_gradients(two, finite_difference_gradients(net, kind, x, y), 1e-5).passed

    def test_bad_eps(self):
        net = _net((1, 1, 1), "identity", W1, W2)
        with pytest.raises(ValueError):
            finite_difference_gradients(net, "squared-error", [1.0], [0.0], 0.0)
        with pytest.raises(ShapeError):
            finite_difference_gradients(net, "squared-error", [1.0, 2.0], [0.0])


class TestCompare:
    def test_identical(self):
        g = GradientSet((W1_121, W2_121))
        report = compare_gradients(g, g)
        assert report.passed and report.max_abs == 0.0 and report.max_rel == 0.0

    def test_factor_two(self):
        a = GradientSet((W1_121, W2_121))
        b = GradientSet((W1_121, W2_121.replace(0, 1, 2.0)))
        report = compare_gradients(a, b, 1e-5)
        assert report.max_rel == pytest.approx(0.5)
        assert report.at == (2, 0, 1)
        assert not report.passed
        assert [e.passed for e in report.layers] == [True, False]

    def test_floor(self):
        assert relative_error(0.0, 0.0) == 0.0
        assert relative_error(1e-14, 0.0) == pytest.approx(1e-2)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            compare_gradients(GradientSet((W1,)), GradientSet((W1, W2)))
        with pytest.raises(ShapeError):
            compare_gradients(GradientSet((W1,)), GradientSet((W1_121,)))

    def test_serialization(self):
        a = GradientSet((W1_121, W2_121))
        report = compare_gradients(a, GradientSet((W1_121, W2_121.replace(0, 0, 1.0))), labels=("x", "y"))
        doc = json.loads(report.to_json())
        assert doc["pass"] is False and doc["at"] == [2, 0, 0]
        assert set(doc["layers"][0]) == {"layer", "max_abs", "max_rel", "at", "pass"}
        table = report.table()
        assert "compare x vs y" in table and "FAIL" in table
