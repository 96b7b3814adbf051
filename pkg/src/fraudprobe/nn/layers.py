"""Dense and LSTM layers plus the three model shapes used downstream.

Weight init is uniform in +/-1/sqrt(fan_in), drawn from the rng handed
in by the caller, so a model is fully determined by (architecture,
seed).
"""

import numpy as np

from . import tensor as T

ACTIVATIONS = {
    "linear": lambda x: x,
    "tanh": T.tanh,
    "relu": T.relu,
    "sigmoid": T.sigmoid,
}


def _init(rng, *shape):
    limit = 1.0 / np.sqrt(shape[0])
    return rng.uniform(-limit, limit, size=shape)


class Dense:
    def __init__(self, in_dim, out_dim, activation="linear", rng=None):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        rng = rng or np.random.default_rng(0)
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.activation = activation
        self.w = T.Tensor(_init(rng, in_dim, out_dim), requires_grad=True)
        self.b = T.Tensor(np.zeros(out_dim), requires_grad=True)

    def __call__(self, x):
        if x.data.shape[-1] != self.in_dim:
            raise ValueError(f"dense expects width {self.in_dim}, got {x.data.shape[-1]}")
        if x.data.ndim == 3:
            # time-distributed: fold (B, T) together for the matmul
            B, S, F = x.data.shape
            flat = T.reshape(x, (B * S, F))
            out = T.add(T.matmul(flat, self.w), self.b)
            out = T.reshape(out, (B, S, self.out_dim))
        else:
            out = T.add(T.matmul(x, self.w), self.b)
        return ACTIVATIONS[self.activation](out)

    def parameters(self):
        return [self.w, self.b]


class Lstm:
    """Single LSTM layer over (B, T, in_dim) returning all hidden states."""

    def __init__(self, in_dim, hidden, rng=None):
        rng = rng or np.random.default_rng(0)
        self.in_dim = in_dim
        self.hidden = hidden
        self.wx = T.Tensor(_init(rng, in_dim, 4 * hidden), requires_grad=True)
        self.wh = T.Tensor(_init(rng, hidden, 4 * hidden), requires_grad=True)
        self.b = T.Tensor(np.zeros(4 * hidden), requires_grad=True)

    def __call__(self, x):
        if x.data.ndim != 3 or x.data.shape[-1] != self.in_dim:
            raise ValueError(f"lstm expects (B, T, {self.in_dim}), got {x.data.shape}")
        return T.lstm_seq(x, self.wx, self.wh, self.b)

    def parameters(self):
        return [self.wx, self.wh, self.b]


class Mlp:
    """Dense stack; hidden layers share one activation, output is linear."""

    kind = "mlp"

    def __init__(self, in_dim, hidden, out_dim=1, activation="relu", seed=0):
        rng = np.random.default_rng(seed)
        self.config = {"in_dim": in_dim, "hidden": list(hidden),
                       "out_dim": out_dim, "activation": activation, "seed": seed}
        self.layers = []
        prev = in_dim
        for h in hidden:
            self.layers.append(Dense(prev, h, activation, rng))
            prev = h
        self.layers.append(Dense(prev, out_dim, "linear", rng))

    def __call__(self, x):
        for layer in self.layers:
            x = layer(x)
        return x

    def parameters(self):
        return [p for layer in self.layers for p in layer.parameters()]


class SequenceAutoencoder:
    """LSTM encoder/decoder reconstructing its own input sequence.

    hidden = (h1, ..., hk); the narrowest hidden size is the bottleneck
    and must stay below the flattened input width seq_len * in_dim.
    """

    kind = "seq_autoencoder"

    def __init__(self, in_dim, hidden, seq_len, seed=0):
        if min(hidden) >= seq_len * in_dim:
            raise ValueError(
                f"bottleneck {min(hidden)} must be smaller than the "
                f"flattened input width {seq_len * in_dim}")
        rng = np.random.default_rng(seed)
        self.config = {"in_dim": in_dim, "hidden": list(hidden),
                       "seq_len": seq_len, "seed": seed}
        self.lstms = []
        prev = in_dim
        for h in hidden:
            self.lstms.append(Lstm(prev, h, rng))
            prev = h
        self.out = Dense(prev, in_dim, "linear", rng)

    def __call__(self, x):
        for lstm in self.lstms:
            x = lstm(x)
        return self.out(x)

    def parameters(self):
        params = [p for lstm in self.lstms for p in lstm.parameters()]
        return params + self.out.parameters()


class SequenceRegressor:
    """LSTM stack -> last hidden state -> scalar output."""

    kind = "seq_regressor"

    def __init__(self, in_dim, hidden, seed=0):
        rng = np.random.default_rng(seed)
        self.config = {"in_dim": in_dim, "hidden": list(hidden), "seed": seed}
        self.lstms = []
        prev = in_dim
        for h in hidden:
            self.lstms.append(Lstm(prev, h, rng))
            prev = h
        self.out = Dense(prev, 1, "linear", rng)

    def __call__(self, x):
        for lstm in self.lstms:
            x = lstm(x)
        return self.out(T.last_step(x))

    def parameters(self):
        params = [p for lstm in self.lstms for p in lstm.parameters()]
        return params + self.out.parameters()


MODEL_KINDS = {cls.kind: cls for cls in (Mlp, SequenceAutoencoder, SequenceRegressor)}
