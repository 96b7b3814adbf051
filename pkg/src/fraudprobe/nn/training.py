"""Minibatch training loop shared by the detector, forecaster and the
neural score regressor."""

import numpy as np

from . import tensor as T
from .optim import Adam


def iterate_batches(n, batch_size, rng):
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start:start + batch_size]


def train(model, inputs, targets=None, loss_kind="mse", epochs=10, lr=1e-3,
          batch_size=32, seed=0, forward=None, reconstruct_input=False,
          extra_params=()):
    """Train `model` in place; returns the per-epoch mean loss curve.

    inputs/targets are numpy arrays indexed along axis 0.  `forward`
    overrides input construction for a batch (used for joint embedding
    fine-tuning); it receives the selected indices and must return a
    Tensor.  With `reconstruct_input` the loss target is the input
    tensor itself, so embedding parameters feeding the input get their
    full gradient (both the input path and the target path).
    `extra_params` (e.g. embedding tables living outside the model) are
    optimized alongside the model's own parameters.
    """
    n = len(inputs)
    if n == 0:
        raise ValueError("no training data")
    if loss_kind not in T.LOSSES:
        raise ValueError(f"unknown loss {loss_kind!r}")
    if targets is None and not reconstruct_input:
        raise ValueError("targets required unless reconstruct_input is set")
    loss_fn = T.LOSSES[loss_kind]
    opt = Adam(list(model.parameters()) + list(extra_params), lr=lr)
    rng = np.random.default_rng(seed)
    curve = []
    for _ in range(epochs):
        total = 0.0
        count = 0
        for idx in iterate_batches(n, batch_size, rng):
            x = forward(idx) if forward is not None else T.Tensor(inputs[idx])
            pred = model(x)
            target = x if reconstruct_input else np.asarray(targets)[idx]
            loss = loss_fn(pred, target)
            opt.zero_grad()
            loss.backward()
            opt.step()
            total += float(loss.data) * len(idx)
            count += len(idx)
        curve.append(total / count)
    return curve
