"""Central finite-difference gradient checking helpers (the oracle side
of every analytic-gradient test)."""

import numpy as np

H = 1e-5
TOL = 1e-4


def rel_err(a, b):
    denom = max(1.0, abs(a), abs(b))
    return abs(a - b) / denom


def check_layer(layer, inputs, rng, n_probe=4):
    """Compare analytic parameter/input gradients of a layer against
    central finite differences of the scalar objective sum(y * R).

    Returns the max relative error observed.
    """
    y, cache = layer.forward(inputs)
    R = rng.standard_normal(y.shape)
    _, grads = layer.backward(cache, R)

    def objective():
        out, _ = layer.forward(inputs)
        return float((out * R).sum())

    worst = 0.0
    for name, param in layer.params().items():
        flat = param.reshape(-1)
        probes = rng.choice(flat.size, size=min(n_probe, flat.size), replace=False)
        for i in probes:
            orig = flat[i]
            flat[i] = orig + H
            fp = objective()
            flat[i] = orig - H
            fm = objective()
            flat[i] = orig
            numeric = (fp - fm) / (2 * H)
            analytic = grads[name].reshape(-1)[i]
            worst = max(worst, rel_err(numeric, analytic))
    # input gradient, when the layer propagates one (embeddings do not)
    dx, _ = layer.backward(cache, R)
    if dx is not None and np.issubdtype(np.asarray(inputs).dtype, np.floating):
        flat = inputs.reshape(-1)
        probes = rng.choice(flat.size, size=min(n_probe, flat.size), replace=False)
        for i in probes:
            orig = flat[i]
            flat[i] = orig + H
            fp = objective()
            flat[i] = orig - H
            fm = objective()
            flat[i] = orig
            numeric = (fp - fm) / (2 * H)
            worst = max(worst, rel_err(numeric, dx.reshape(-1)[i]))
    return worst


def check_loss(fn, pred, rng, n_probe=6):
    """Finite-difference check of a (value, grad) loss on its prediction."""
    _, grad = fn(pred)
    worst = 0.0
    flat = pred.reshape(-1)
    probes = rng.choice(flat.size, size=min(n_probe, flat.size), replace=False)
    for i in probes:
        orig = flat[i]
        flat[i] = orig + H
        fp = fn(pred)[0]
        flat[i] = orig - H
        fm = fn(pred)[0]
        flat[i] = orig
        numeric = (fp - fm) / (2 * H)
        worst = max(worst, rel_err(numeric, np.asarray(grad).reshape(-1)[i]))
    return worst


def check_model(forward_backward, param_tensors, rng, n_probe=3):
    """Whole-model check. forward_backward() -> (objective value, grads);
    objective must be deterministic."""
    value, grads = forward_backward()
    worst = 0.0
    for name, param in param_tensors.items():
        flat = param.reshape(-1)
        probes = rng.choice(flat.size, size=min(n_probe, flat.size), replace=False)
        for i in probes:
            orig = flat[i]
            flat[i] = orig + H
            fp = forward_backward()[0]
            flat[i] = orig - H
            fm = forward_backward()[0]
            flat[i] = orig
            numeric = (fp - fm) / (2 * H)
            analytic = grads[name].reshape(-1)[i]
            worst = max(worst, rel_err(numeric, analytic))
    return worst
