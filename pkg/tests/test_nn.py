import numpy as np
import pytest

import gradcheck
from ddzlab.nn import (
    SGD,
    RMSProp,
    Dense,
    Embedding,
    LSTM,
    MultiHead,
    load_checkpoint,
    loss_bce,
    loss_masked_cross_entropy,
    loss_mse,
    save_checkpoint,
)
from ddzlab.nn.checkpoint import CheckpointMismatch, read_header


class TestDense:
    def test_zero_weights_zero_output(self):
        layer = Dense(4, 3)
        layer.W[...] = 0.0
        y, _ = layer.forward(np.ones((2, 4)))
        assert not y.any()

    def test_identity_dense(self):
        layer = Dense(4, 4)
        layer.W[...] = np.eye(4)
        x = np.random.default_rng(0).standard_normal((5, 4))
        y, _ = layer.forward(x)
        assert np.allclose(y, x)

    def test_scalar_closed_form(self):
        # y = sigmoid(w x + b); dL/dw for L = y is y(1-y)x
        layer = Dense(1, 1, "sigmoid")
        layer.W[...] = 0.7
        layer.b[...] = -0.2
        x = np.array([[1.3]])
        y, cache = layer.forward(x)
        _, grads = layer.backward(cache, np.ones((1, 1)))
        want = y * (1 - y) * 1.3
        assert np.allclose(grads["dense.W"], want)

    @pytest.mark.parametrize("act", ["linear", "relu", "sigmoid", "tanh"])
    def test_gradcheck(self, act):
        rng = np.random.default_rng(hash(act) % 2**32)
        for _ in range(5):
            n_in, n_out = int(rng.integers(1, 8)), int(rng.integers(1, 8))
            layer = Dense(n_in, n_out, act, rng=rng)
            x = rng.standard_normal((3, n_in))
            assert gradcheck.check_layer(layer, x, rng) < gradcheck.TOL


class TestEmbedding:
    def test_lookup(self):
        emb = Embedding(5, 3)
        idx = np.array([[0, 4], [2, 2]])
        y, _ = emb.forward(idx)
        assert y.shape == (2, 2, 3)
        assert np.allclose(y[0, 1], emb.table[4])

    def test_gradcheck(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            emb = Embedding(6, 4, rng=rng)
            idx = rng.integers(0, 6, size=(3, 5))
            assert gradcheck.check_layer(emb, idx, rng) < gradcheck.TOL

    def test_repeated_indices_accumulate(self):
        emb = Embedding(3, 2)
        idx = np.array([[1, 1, 1]])
        y, cache = emb.forward(idx)
        _, grads = emb.backward(cache, np.ones_like(y))
        assert np.allclose(grads["emb.table"][1], 3.0)


class TestLSTM:
    def test_gradcheck(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            n_in, hidden, T = int(rng.integers(1, 6)), int(rng.integers(1, 6)), int(rng.integers(1, 7))
            lstm = LSTM(n_in, hidden, rng=rng)
            x = rng.standard_normal((2, T, n_in))
            assert gradcheck.check_layer(lstm, x, rng) < gradcheck.TOL

    def test_zero_input_zero_bias(self):
        lstm = LSTM(3, 4)
        lstm.W[...] = 0.0
        y, _ = lstm.forward(np.zeros((2, 5, 3)))
        assert not y.any()


class TestMultiHead:
    def test_gradcheck(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            heads = MultiHead(6, (5, 5, 2, 2), rng=rng)
            x = rng.standard_normal((3, 6))
            assert gradcheck.check_layer(heads, x, rng) < gradcheck.TOL


class TestLossMSE:
    def test_equal_zero(self):
        loss, grad = loss_mse(np.ones(5), np.ones(5))
        assert loss == 0.0
        assert not grad.any()

    def test_constant_offset(self):
        loss, _ = loss_mse(np.full(7, 2.5), np.full(7, 1.0))
        assert np.isclose(loss, 1.5**2)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            loss_mse(np.ones(3), np.ones(4))

    def test_gradcheck(self):
        rng = np.random.default_rng(6)
        target = rng.standard_normal(8)
        pred = rng.standard_normal(8)
        err = gradcheck.check_loss(lambda p: loss_mse(p, target), pred, rng)
        assert err < gradcheck.TOL


class TestMaskedCrossEntropy:
    def test_two_equal_logits(self):
        logits = np.zeros((1, 4))
        mask = np.array([[True, True, False, False]])
        loss, _ = loss_masked_cross_entropy(logits, np.array([0]), mask)
        assert np.isclose(loss, np.log(2))

    def test_forced_class(self):
        logits = np.random.default_rng(0).standard_normal((3, 5))
        mask = np.zeros((3, 5), dtype=bool)
        labels = np.array([1, 3, 0])
        mask[np.arange(3), labels] = True
        loss, grad = loss_masked_cross_entropy(logits, labels, mask)
        assert np.isclose(loss, 0.0)
        assert not grad.any()

    def test_label_outside_mask(self):
        mask = np.array([[True, False]])
        with pytest.raises(ValueError):
            loss_masked_cross_entropy(np.zeros((1, 2)), np.array([1]), mask)

    def test_matches_renormalization_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            K = int(rng.integers(2, 7))
            logits = rng.standard_normal((1, K))
            mask = rng.random(K) < 0.7
            if not mask.any():
                mask[0] = True
            label = int(rng.choice(np.flatnonzero(mask)))
            loss, _ = loss_masked_cross_entropy(logits, np.array([label]), mask[None, :])
            # oracle: exponentiate allowed logits, renormalize explicitly
            ex = np.exp(logits[0][mask])
            p = np.exp(logits[0][label]) / ex.sum()
            assert np.isclose(loss, -np.log(p), atol=1e-10)

    def test_gradcheck(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            K = int(rng.integers(2, 8))
            logits = rng.standard_normal((4, K))
            mask = rng.random((4, K)) < 0.7
            mask[:, 0] = True
            labels = np.array([int(rng.choice(np.flatnonzero(m))) for m in mask])
            err = gradcheck.check_loss(
                lambda p: loss_masked_cross_entropy(p, labels, mask), logits, rng
            )
            assert err < gradcheck.TOL


class TestBCE:
    def test_half(self):
        loss, _ = loss_bce(np.array(0.5), np.array(1.0))
        assert np.isclose(loss, np.log(2))

    def test_converges_to_zero(self):
        assert loss_bce(np.array(1 - 1e-9), np.array(1.0))[0] < 1e-6
        assert loss_bce(np.array(1e-9), np.array(0.0))[0] < 1e-6

    def test_gradcheck(self):
        rng = np.random.default_rng(9)
        p = rng.uniform(0.05, 0.95, size=6)
        label = (rng.random(6) < 0.5).astype(float)
        err = gradcheck.check_loss(lambda q: loss_bce(q, label), p, rng)
        assert err < gradcheck.TOL


class TestOptimizers:
    def test_zero_grad_no_change(self):
        p = {"w": np.ones(3)}
        for opt in (SGD(0.1), RMSProp(0.1)):
            opt.step(p, {"w": np.zeros(3)})
            assert np.allclose(p["w"], 1.0)

    def test_sgd_rule(self):
        p = {"w": np.array([2.0])}
        SGD(1.0).step(p, {"w": np.array([0.5])})
        assert np.allclose(p["w"], 1.5)

    def test_counter_and_nonfinite_skip(self):
        opt = RMSProp(0.1)
        p = {"w": np.ones(2)}
        assert opt.step(p, {"w": np.ones(2)})
        assert opt.update_counter == 1
        assert not opt.step(p, {"w": np.array([np.nan, 1.0])})
        assert opt.update_counter == 1
        assert opt.skipped == 1

    def test_rmsprop_converges_on_quadratic_bowl(self):
        p = {"w": np.array([3.0, -2.0])}
        opt = RMSProp(0.05)
        losses = []
        for _ in range(100):
            grad = {"w": 2 * p["w"]}
            losses.append(float((p["w"] ** 2).sum()))
            opt.step(p, grad)
        assert all(b < a for a, b in zip(losses, losses[1:]))


class TestCheckpoint:
    def test_round_trip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(10)
        params = {
            "a.W": rng.standard_normal((3, 4)),
            "a.b": rng.standard_normal(4),
            "z": np.float32(rng.standard_normal(5).astype(np.float32)),
        }
        path = tmp_path / "net.ckpt"
        save_checkpoint(path, params, "spec123", "layout456", 7)
        loaded, header = load_checkpoint(path, "spec123", "layout456")
        assert header["update_counter"] == 7
        for k in params:
            assert loaded[k].tobytes() == np.ascontiguousarray(params[k]).tobytes()

    def test_hash_mismatch(self, tmp_path):
        path = tmp_path / "net.ckpt"
        save_checkpoint(path, {"w": np.ones(2)}, "spec123", "layout456", 0)
        with pytest.raises(CheckpointMismatch):
            load_checkpoint(path, "other", "layout456")
        with pytest.raises(CheckpointMismatch):
            load_checkpoint(path, "spec123", "other")

    def test_header_readable(self, tmp_path):
        path = tmp_path / "net.ckpt"
        save_checkpoint(path, {"w": np.ones(2)}, "s", "l", 3)
        h = read_header(path)
        assert h["spec_hash"] == "s"
        assert h["tensors"][0]["name"] == "w"
