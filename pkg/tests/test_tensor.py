"""Tensor primitives, tape semantics, GRU, optimizer, serialization."""

import numpy as np
import pytest

from docbot import tensor as T
from docbot.errors import ShapeError, TrainingError


class TestPrimitives:
    def test_softmax_equal_logits(self):
        out = T.softmax(T.Tensor([1.0, 1.0, 1.0]), axis=0)
        assert np.allclose(out.data, [1 / 3, 1 / 3, 1 / 3], atol=1e-15)

    def test_softmax_shift_invariance(self):
        x = np.array([0.3, -1.2, 2.5, 0.0])
        a = T.softmax(T.Tensor(x), axis=0).data
        b = T.softmax(T.Tensor(x + 17.5), axis=0).data
        assert np.allclose(a, b, atol=1e-12)

    def test_softmax_rows_sum_to_one(self):
        rng = np.random.default_rng(0)
        x = T.Tensor(rng.normal(size=(5, 7)) * 30)
        rows = T.softmax(x, axis=1).data.sum(axis=1)
        assert np.all(np.abs(rows - 1.0) <= 1e-12)

    def test_conv2d_all_ones(self):
        y = T.conv2d(T.Tensor(np.ones((1, 1, 3, 3))), T.Tensor(np.ones((1, 1, 3, 3))))
        assert y.data.reshape(-1)[0] == pytest.approx(9.0)

    def test_conv2d_shape_error_names_shapes(self):
        with pytest.raises(ShapeError) as err:
            T.conv2d(T.Tensor(np.ones((1, 2, 4, 4))), T.Tensor(np.ones((1, 3, 3, 3))))
        assert "(1, 2, 4, 4)" in str(err.value) and "(1, 3, 3, 3)" in str(err.value)

    def test_matmul_shape_error(self):
        with pytest.raises(ShapeError):
            T.matmul(T.Tensor(np.ones((2, 3))), T.Tensor(np.ones((4, 2))))

    def test_add_broadcast_mismatch(self):
        with pytest.raises(ShapeError):
            T.add(T.Tensor(np.ones((2, 3))), T.Tensor(np.ones((4,))))

    def test_rank_limit(self):
        with pytest.raises(ShapeError):
            T.Tensor(np.ones((1, 1, 1, 1, 1)))

    def test_ops_do_not_mutate_inputs(self):
        x = T.Tensor(np.array([1.0, -2.0, 3.0]))
        before = x.data.copy()
        T.relu(x)
        T.sigmoid(x)
        T.mul(x, 2.0)
        assert np.array_equal(x.data, before)

    def test_maxpool_window_clamp(self):
        y = T.maxpool2d(T.Tensor(np.full((1, 1, 2, 2), 3.0)), (3, 3), (3, 3))
        assert y.shape == (1, 1, 1, 1) and y.data.reshape(-1)[0] == 3.0

    def test_embedding_lookup_bounds(self):
        table = T.Tensor(np.zeros((4, 2)))
        with pytest.raises(ShapeError):
            T.embedding_lookup(table, np.array([4]))


class TestBackward:
    def test_sum_gives_ones(self):
        w = T.Parameter(np.arange(6, dtype=np.float64).reshape(2, 3), "w")
        with T.Tape() as tape:
            loss = T.tsum(w)
        T.backward(tape, loss)
        assert np.array_equal(w.grad, np.ones((2, 3)))

    def test_sigmoid_at_zero(self):
        # d/dx [c * sigmoid(x)] at x=0 is 0.25 * c
        c = 3.0
        x = T.Parameter(np.array([0.0]), "x")
        with T.Tape() as tape:
            loss = T.tsum(T.mul(T.sigmoid(x), c))
        T.backward(tape, loss)
        assert x.grad[0] == pytest.approx(0.25 * c, abs=1e-12)

    def test_non_scalar_loss_rejected(self):
        x = T.Parameter(np.ones(3), "x")
        with T.Tape() as tape:
            y = T.mul(x, 2.0)
        with pytest.raises(TrainingError):
            T.backward(tape, y)

    def test_gradients_accumulate_across_backward_calls(self):
        x = T.Parameter(np.ones(2), "x")
        for _ in range(2):
            with T.Tape() as tape:
                loss = T.tsum(x)
            T.backward(tape, loss)
        assert np.array_equal(x.grad, np.full(2, 2.0))

    def test_reused_tensor_accumulates(self):
        x = T.Parameter(np.array([2.0]), "x")
        with T.Tape() as tape:
            loss = T.tsum(T.mul(x, x))  # d/dx x^2 = 2x
        T.backward(tape, loss)
        assert x.grad[0] == pytest.approx(4.0)

    def test_no_tape_records_nothing(self):
        x = T.Parameter(np.ones(2), "x")
        y = T.tsum(x)  # outside any tape
        assert y.requires_grad is False


class TestGru:
    def _zero_gru(self, d_in, d_h):
        rng = np.random.default_rng(0)
        g = T.GruParams.create(d_in, d_h, rng, "g")
        for p in g.parameters():
            p.data[...] = 0.0
        return g

    def test_zero_params_halve_state(self):
        g = self._zero_gru(3, 4)
        h_prev = T.Tensor(np.array([1.0, -2.0, 0.5, 4.0]))
        h = T.gru_step(T.Tensor(np.array([0.3, 0.1, -0.2])), h_prev, g)
        assert np.allclose(h.data, h_prev.data * 0.5, atol=1e-15)

    def test_zero_fixed_point(self):
        g = self._zero_gru(3, 4)
        h = T.gru_step(T.Tensor(np.zeros(3)), T.Tensor(np.zeros(4)), g)
        assert np.allclose(h.data, 0.0)

    def test_t_steps_geometric_decay(self):
        g = self._zero_gru(2, 3)
        h = T.Tensor(np.array([1.0, 2.0, -4.0]))
        x = T.Tensor(np.zeros(2))
        for _ in range(5):
            h = T.gru_step(x, h, g)
        assert np.allclose(h.data, np.array([1.0, 2.0, -4.0]) * 0.5**5, atol=1e-15)

    def test_state_magnitude_bounded(self):
        rng = np.random.default_rng(3)
        g = T.GruParams.create(4, 4, rng, "g")
        h = T.Tensor(rng.normal(size=4))
        bound = max(np.abs(h.data).max(), 1.0)
        for _ in range(20):
            h = T.gru_step(T.Tensor(rng.normal(size=4)), h, g)
            assert np.abs(h.data).max() <= bound + 1e-12


class TestOptimizer:
    def test_sgd_definition(self):
        p = T.Parameter(np.array([1.0]), "p")
        p.grad[...] = 1.0
        opt = T.Optimizer([p], T.OptimizerConfig(algorithm="sgd", lr=0.1, clip_norm=None))
        opt.step()
        assert p.data[0] == pytest.approx(0.9)

    def test_zero_gradient_no_change(self):
        p = T.Parameter(np.array([1.0, 2.0]), "p")
        opt = T.Optimizer([p], T.OptimizerConfig(algorithm="adam", lr=0.5))
        opt.step()
        assert np.array_equal(p.data, np.array([1.0, 2.0]))

    def test_adam_first_step_magnitude(self):
        for scale in (1.0, 100.0):
            p = T.Parameter(np.zeros(4), "p")
            p.grad[...] = scale
            opt = T.Optimizer([p], T.OptimizerConfig(algorithm="adam", lr=0.01, clip_norm=None))
            opt.step()
            assert np.allclose(np.abs(p.data), 0.01, rtol=1e-6)

    def test_clipping_scales_global_norm(self):
        p = T.Parameter(np.zeros(100), "p")
        p.grad[...] = 10.0  # norm 100 > clip 5
        opt = T.Optimizer([p], T.OptimizerConfig(algorithm="sgd", lr=1.0, clip_norm=5.0))
        opt.step()
        assert np.linalg.norm(p.data) == pytest.approx(5.0)

    def test_non_finite_gradient_names_parameter(self):
        p = T.Parameter(np.zeros(2), "embedding.table")
        p.grad[...] = np.nan
        opt = T.Optimizer([p], T.OptimizerConfig())
        with pytest.raises(TrainingError) as err:
            opt.step()
        assert "embedding.table" in str(err.value)


class TestSerialization:
    def test_bit_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        arrays = {
            "a": rng.normal(size=(3, 4)),
            "b": rng.normal(size=(2, 2, 2)).astype(np.float32),
            "c": rng.normal(size=7),
        }
        path = tmp_path / "params.dbtc"
        T.save_arrays(path, arrays, {"note": "x"})
        loaded, extra = T.load_arrays(path)
        for name, arr in arrays.items():
            assert loaded[name].dtype == arr.dtype
            assert np.array_equal(loaded[name], arr)
            assert loaded[name].tobytes() == arr.tobytes()
        assert extra == {"note": "x"}

    def test_file_identical_after_resave(self, tmp_path):
        arrays = {"w": np.linspace(0, 1, 12).reshape(3, 4)}
        p1, p2 = tmp_path / "a.dbtc", tmp_path / "b.dbtc"
        T.save_arrays(p1, arrays)
        loaded, _ = T.load_arrays(p1)
        T.save_arrays(p2, loaded)
        assert p1.read_bytes() == p2.read_bytes()


class TestKernelParity:
    """numba and numpy paths agree (whichever is active vs the reference)."""

    def test_conv2d_matches_reference(self):
        from docbot.tensor import kernels

        rng = np.random.default_rng(1)
        x = rng.normal(size=(3, 2, 6, 5))
        w = rng.normal(size=(4, 2, 3, 3))
        gy = rng.normal(size=(3, 4, 4, 3))
        assert np.allclose(kernels.conv2d_forward(x, w), kernels._conv2d_forward_np(x, w), atol=1e-10)
        gx, gw = kernels.conv2d_backward(x, w, gy)
        gx_ref, gw_ref = kernels._conv2d_backward_np(x, w, gy)
        assert np.allclose(gx, gx_ref, atol=1e-10)
        assert np.allclose(gw, gw_ref, atol=1e-10)

    def test_attention_matches_reference(self):
        from docbot.tensor import kernels

        rng = np.random.default_rng(2)
        p = rng.normal(size=(2, 5, 4))
        q = rng.normal(size=(2, 5, 4))
        v = rng.normal(size=4)
        gs = rng.normal(size=(2, 5, 5))
        assert np.allclose(kernels.attn_scores_forward(p, q, v), kernels._attn_scores_forward_np(p, q, v), atol=1e-10)
        for got, ref in zip(
            kernels.attn_scores_backward(p, q, v, gs), kernels._attn_scores_backward_np(p, q, v, gs)
        ):
            assert np.allclose(got, ref, atol=1e-10)

    def test_maxpool_matches_reference(self):
        from docbot.tensor import kernels

        rng = np.random.default_rng(3)
        x = rng.normal(size=(2, 3, 7, 7))
        y, arg = kernels.maxpool2d_forward(x, 3, 3, 3, 3)
        y_ref, arg_ref = kernels._maxpool2d_forward_np(x, 3, 3, 3, 3)
        assert np.array_equal(y, y_ref)
        assert np.array_equal(arg, arg_ref)

    def test_embedding_grad_matches_reference(self):
        from docbot.tensor import kernels

        rng = np.random.default_rng(4)
        ids = rng.integers(0, 6, size=(3, 4))
        gy = rng.normal(size=(3, 4, 5))
        g1 = np.zeros((6, 5))
        g2 = np.zeros((6, 5))
        kernels.embedding_grad(ids, gy, g1)
        kernels._embedding_grad_np(ids.reshape(-1), gy.reshape(-1, 5), g2)
        assert np.allclose(g1, g2, atol=1e-12)


class TestOptimizerStepFunction:
    def test_functional_form_carries_adam_state(self):
        p = T.Parameter(np.zeros(3), "p")
        cfg = T.OptimizerConfig(algorithm="adam", lr=0.1, clip_norm=None)
        p.grad[...] = 1.0
        state = T.optimizer_step([p], cfg)
        first = p.data.copy()
        p.zero_grad()
        p.grad[...] = 1.0
        T.optimizer_step([p], cfg, state=state)
        assert state.t == 2
        assert not np.array_equal(p.data, first)
