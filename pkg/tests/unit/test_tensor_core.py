"""Unit tests for the tensor_core differentiation engine."""

import threading

import numpy as np
import pytest

from exceptions import ContractViolation
from tensor_core import (
    Tensor,
    add,
    backward,
    concat,
    embedding,
    exp,
    gelu,
    index,
    is_grad_enabled,
    layer_norm,
    log,
    log_softmax,
    masked_softmax,
    matmul,
    multiply,
    no_grad,
    reduce_mean,
    reduce_sum,
    relu,
    reshape,
    scale,
    transpose,
)

SEEDS = range(20)
H = 1e-5


def _leaves(arrays):
    return [Tensor(a.copy(), requires_grad=True) for a in arrays]


def _probe_loss(out: Tensor, probe: np.ndarray) -> Tensor:
    """Scalar root sum(out * probe), so every output entry gets its own weight."""
    return reduce_sum(multiply(out, Tensor(probe)))


def gradient_error(fn, arrays, seed: int) -> float:
    """
    Relative error between backward() and central differences.

    Args:
        fn: Maps a list of leaf Tensors to an output Tensor.
        arrays: Input values.
        seed: Seed of the random output probe.
    """
    leaves = _leaves(arrays)
    out = fn(leaves)
    probe = np.random.default_rng(1000 + seed).normal(size=out.shape)
    grads = backward(_probe_loss(out, probe))

    worst = 0.0
    for k, array in enumerate(arrays):
        analytic = grads.get(leaves[k], np.zeros_like(array))
        numeric = np.zeros_like(array)
        for idx in np.ndindex(array.shape):
            plus = [a.copy() for a in arrays]
            minus = [a.copy() for a in arrays]
            plus[k][idx] += H
            minus[k][idx] -= H
            f_plus = _probe_loss(fn([Tensor(a) for a in plus]), probe).item()
            f_minus = _probe_loss(fn([Tensor(a) for a in minus]), probe).item()
            numeric[idx] = (f_plus - f_minus) / (2 * H)
        scale_ = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), 1e-8)
        worst = max(worst, float(np.linalg.norm(analytic - numeric) / scale_))
    return worst


def _away_from_zero(rng, shape):
    values = rng.uniform(0.2, 1.5, size=shape)
    return values * rng.choice([-1.0, 1.0], size=shape)


class TestForwardExamples:
    """Tests for forward values of the primitives."""

    def test_softmax_of_equal_logits(self):
        """Should split probability evenly."""
        out = masked_softmax(Tensor([[0.0, 0.0]]))
        np.testing.assert_allclose(out.data, [[0.5, 0.5]])

    def test_softmax_with_blocked_key(self):
        """Should give a masked key zero weight."""
        out = masked_softmax(Tensor([[3.0, 5.0]]), np.array([[0.0, -np.inf]]))
        np.testing.assert_allclose(out.data, [[1.0, 0.0]])

    def test_fully_masked_row_is_uniform(self):
        """Should return the uniform distribution when every key is masked."""
        out = masked_softmax(Tensor([[1.0, 2.0, 3.0]]), np.full((1, 3), -np.inf))
        np.testing.assert_allclose(out.data, [[1 / 3, 1 / 3, 1 / 3]])
        assert np.all(np.isfinite(out.data))

    def test_fully_masked_row_passes_no_gradient(self):
        """Should give zero gradient through a fully masked row."""
        x = Tensor(np.array([[1.0, 2.0, 3.0], [0.5, -1.0, 2.0]]), requires_grad=True)
        mask = np.array([[-np.inf] * 3, [0.0, 0.0, -np.inf]])
        probe = np.array([[1.0, -2.0, 0.5], [2.0, 1.0, -1.0]])
        grads = backward(_probe_loss(masked_softmax(x, mask), probe))
        np.testing.assert_array_equal(grads[x][0], np.zeros(3))
        assert np.any(grads[x][1] != 0)

    def test_identity_matmul(self):
        """Should return the right operand when multiplying by the identity."""
        out = matmul(Tensor(np.eye(2)), Tensor([[1.0, 2.0], [3.0, 4.0]]))
        np.testing.assert_array_equal(out.data, [[1.0, 2.0], [3.0, 4.0]])

    def test_log_softmax_rows_normalised(self):
        """Should produce rows whose exponentials sum to one."""
        x = Tensor(np.random.default_rng(0).normal(size=(4, 6)) * 10)
        np.testing.assert_allclose(np.exp(log_softmax(x).data).sum(axis=1), 1.0, atol=1e-12)

    def test_gelu_values(self):
        """Should match x * Phi(x) at reference points."""
        out = gelu(Tensor([0.0, 1.0, -1.0]))
        np.testing.assert_allclose(out.data, [0.0, 0.8413447460685429, -0.15865525393145707], rtol=1e-12)


class TestBackwardExamples:
    """Tests for backward() on hand-computable graphs."""

    def test_softmax_rows_sum_constant(self):
        """Should give zero gradient since softmax rows always sum to one."""
        x = Tensor(np.array([[0.3, -1.2, 2.0], [1.0, 1.0, 0.0]]), requires_grad=True)
        grads = backward(reduce_sum(masked_softmax(x)))
        np.testing.assert_allclose(grads[x], np.zeros((2, 3)), atol=1e-15)

    def test_square_gradient(self):
        """Should return 2x for sum(x * x)."""
        x = Tensor(np.array([1.0, 2.0, 3.0]), requires_grad=True)
        grads = backward(reduce_sum(multiply(x, x)))
        np.testing.assert_array_equal(grads[x], [2.0, 4.0, 6.0])

    def test_five_node_graph_matches_finite_differences(self):
        """Should match central differences on a small composite graph."""

        def graph(t):
            a, b = t
            hidden = add(matmul(a, b), exp(scale(a, 0.5)))
            return log_softmax(relu(hidden) + hidden)

        rng = np.random.default_rng(5)
        arrays = [rng.normal(size=(3, 3)), rng.normal(size=(3, 3))]
        assert gradient_error(graph, arrays, seed=5) < 1e-4

    def test_shared_subgraph_accumulates(self):
        """Should sum gradients of a node used twice."""
        x = Tensor(np.array([1.5, -0.5]), requires_grad=True)
        y = scale(x, 3.0)
        grads = backward(reduce_sum(add(y, y)))
        np.testing.assert_array_equal(grads[x], [6.0, 6.0])

    def test_non_scalar_root_rejected(self):
        """Should raise ContractViolation for a root with several values."""
        x = Tensor(np.ones(3), requires_grad=True)
        with pytest.raises(ContractViolation):
            backward(scale(x, 2.0))

    def test_constant_root_has_no_leaves(self):
        """Should return an empty map when nothing requires gradients."""
        assert backward(reduce_sum(Tensor(np.ones(3)))) == {}

    def test_named_parameter_keys(self):
        """Should key gradients by the leaf tensor itself."""
        w = Tensor(np.array([2.0]), requires_grad=True, name="w")
        grads = backward(reduce_sum(multiply(w, Tensor([3.0]))))
        (leaf,) = grads
        assert leaf is w and leaf.name == "w"
        np.testing.assert_array_equal(grads[w], [3.0])


class TestFiniteDifferences:
    """Analytic gradients of every primitive against central differences."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_add_with_leading_broadcast(self, seed):
        """Should reduce a broadcast bias gradient over the leading axes."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(2, 3, 4)), rng.normal(size=(4,))]
        assert gradient_error(lambda t: add(t[0], t[1]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_multiply(self, seed):
        """Should differentiate the elementwise product in both operands."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(3, 4)), rng.normal(size=(3, 4))]
        assert gradient_error(lambda t: multiply(t[0], t[1]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_scale_and_exp(self, seed):
        """Should differentiate exp of a scaled input."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(5,))]
        assert gradient_error(lambda t: exp(scale(t[0], -0.7)), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_log(self, seed):
        """Should differentiate log on positive inputs."""
        rng = np.random.default_rng(seed)
        arrays = [rng.uniform(0.5, 3.0, size=(4,))]
        assert gradient_error(lambda t: log(t[0]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_relu(self, seed):
        """Should pass gradient only where the input is positive."""
        rng = np.random.default_rng(seed)
        arrays = [_away_from_zero(rng, (3, 4))]
        assert gradient_error(lambda t: relu(t[0]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_gelu(self, seed):
        """Should differentiate the exact erf-based GELU."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(3, 4))]
        assert gradient_error(lambda t: gelu(t[0]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_batched_matmul(self, seed):
        """Should reduce a shared weight gradient over the batch axis."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(2, 3, 4)), rng.normal(size=(4, 5))]
        assert gradient_error(lambda t: matmul(t[0], t[1]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_transpose_and_reshape(self, seed):
        """Should route gradients back through axis permutations and reshapes."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(2, 3, 4))]
        fn = lambda t: reshape(transpose(t[0], (1, 0, 2)), (3, 8))  # noqa: E731
        assert gradient_error(fn, arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_concat(self, seed):
        """Should split the gradient between concatenated parts."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(2, 3)), rng.normal(size=(2, 2))]
        assert gradient_error(lambda t: concat([t[0], t[1]], axis=1), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_index_with_repeats(self, seed):
        """Should accumulate gradients of repeated gather indices."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(4, 3))]
        key = (np.array([0, 2, 2, 3]), np.array([1, 0, 0, 2]))
        assert gradient_error(lambda t: index(t[0], key), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_embedding(self, seed):
        """Should scatter row gradients into the table."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(5, 3))]
        ids = np.array([[0, 4, 4], [1, 0, 2]])
        assert gradient_error(lambda t: embedding(t[0], ids), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_reductions(self, seed):
        """Should differentiate sums and means along an axis."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(3, 4))]
        fn = lambda t: add(reduce_sum(t[0], axis=0), reduce_mean(t[0], axis=0))  # noqa: E731
        assert gradient_error(fn, arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_masked_softmax(self, seed):
        """Should differentiate softmax under an additive mask."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(2, 3, 4))]
        mask = np.where(rng.random((3, 4)) < 0.3, -np.inf, 0.0)
        mask[:, 0] = 0.0
        assert gradient_error(lambda t: masked_softmax(t[0], mask), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_log_softmax(self, seed):
        """Should differentiate the normalised log-probabilities."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(3, 5))]
        assert gradient_error(lambda t: log_softmax(t[0]), arrays, seed) < 1e-4

    @pytest.mark.parametrize("seed", SEEDS)
    def test_layer_norm(self, seed):
        """Should differentiate the input, gain and shift of layer norm."""
        rng = np.random.default_rng(seed)
        arrays = [rng.normal(size=(2, 3, 6)), rng.normal(1.0, 0.3, size=(6,)), rng.normal(size=(6,))]
        assert gradient_error(lambda t: layer_norm(t[0], t[1], t[2]), arrays, seed) < 1e-4


class TestShapeContract:
    """Tests for the leading-dimension broadcasting rule."""

    def test_trailing_suffix_broadcasts(self):
        """Should add a (d,) bias to an (L, d) matrix."""
        out = add(Tensor(np.zeros((2, 3))), Tensor(np.arange(3.0)))
        np.testing.assert_array_equal(out.data, [[0, 1, 2], [0, 1, 2]])

    def test_mismatch_names_both_shapes(self):
        """Should reject non-leading broadcasting and name both shapes."""
        with pytest.raises(ContractViolation, match=r"\(2, 3\).*\(2, 1\)"):
            add(Tensor(np.zeros((2, 3))), Tensor(np.zeros((2, 1))))

    def test_matmul_inner_mismatch(self):
        """Should reject matrices with different inner dimensions."""
        with pytest.raises(ContractViolation):
            matmul(Tensor(np.zeros((2, 3))), Tensor(np.zeros((4, 2))))

    def test_embedding_out_of_range(self):
        """Should reject ids outside the table."""
        with pytest.raises(ContractViolation):
            embedding(Tensor(np.zeros((3, 2))), [0, 3])

    def test_layer_norm_gain_shape(self):
        """Should reject a gain that does not match the last axis."""
        with pytest.raises(ContractViolation):
            layer_norm(Tensor(np.zeros((2, 4))), Tensor(np.ones(3)), Tensor(np.zeros(3)))


class TestNoGrad:
    """Tests for the no_grad context."""

    def test_values_unchanged_and_graph_skipped(self):
        """Should compute the same values without recording parents."""
        x = Tensor(np.array([1.0, 2.0]), requires_grad=True)
        recorded = exp(x)
        with no_grad():
            assert not is_grad_enabled()
            skipped = exp(x)
        assert is_grad_enabled()
        np.testing.assert_array_equal(recorded.data, skipped.data)
        assert recorded.requires_grad
        assert not skipped.requires_grad

    def test_thread_local(self):
        """Should leave other threads recording."""
        seen = []
        with no_grad():
            worker = threading.Thread(target=lambda: seen.append(is_grad_enabled()))
            worker.start()
            worker.join()
        assert seen == [True]

    def test_determinism(self):
        """Should give bit-identical outputs for identical inputs."""
        rng = np.random.default_rng(9)
        a, b = rng.normal(size=(3, 4)), rng.normal(size=(4, 2))
        first = log_softmax(matmul(Tensor(a), Tensor(b))).data
        second = log_softmax(matmul(Tensor(a), Tensor(b))).data
        np.testing.assert_array_equal(first, second)
