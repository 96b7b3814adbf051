"""Reverse-mode autodiff on numpy arrays.

A `Tensor` records the op that produced it (parents + a closure that
maps the output gradient to parent gradients).  `backward()` walks the
recorded graph once in reverse topological order and accumulates into
`.grad`.  Ops are deliberately coarse: whole LSTM sequences and
embedding joins are single taped nodes backed by the `_kernels`
backends, so the graph stays short and the per-op numpy overhead low.

Gradient convention: call `zero_grad()` on leaves before `backward()`;
accumulation is additive, so a leaf that does not influence the loss
keeps an exactly-zero gradient.
"""

import numpy as np

from .. import _kernels


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward_fn")

    def __init__(self, data, requires_grad=False, _parents=(), _backward_fn=None):
        self.data = np.asarray(data, dtype=np.float64)
        if _backward_fn is None and not np.all(np.isfinite(self.data)):
            raise ValueError("non-finite values rejected at tensor boundary")
        self.requires_grad = requires_grad or any(p.requires_grad for p in _parents)
        self.grad = None
        self._parents = _parents
        self._backward_fn = _backward_fn

    @property
    def shape(self):
        return self.data.shape

    def zero_grad(self):
        self.grad = np.zeros_like(self.data)

    def _accumulate(self, g):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self):
        if self.data.size != 1:
            raise ValueError("backward() requires a scalar loss")
        order = []
        seen = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self._accumulate(np.ones_like(self.data))
        for node in reversed(order):
            if node._backward_fn is None or node.grad is None:
                continue
            for parent, g in zip(node._parents, node._backward_fn(node.grad)):
                if parent.requires_grad and g is not None:
                    parent._accumulate(g)

    # -- operators ----------------------------------------------------

    def __add__(self, other):
        return add(self, _wrap(other))

    def __sub__(self, other):
        return sub(self, _wrap(other))

    def __mul__(self, other):
        return mul(self, _wrap(other))

    def __rmul__(self, other):
        return mul(self, _wrap(other))

    def __neg__(self):
        return mul(self, _wrap(-1.0))

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, grad={'set' if self.grad is not None else 'none'})"


def _wrap(value):
    return value if isinstance(value, Tensor) else Tensor(np.asarray(value, dtype=np.float64))


def _unbroadcast(grad, shape):
    """Sum `grad` down to `shape` (undo numpy broadcasting)."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


# -- primitive ops ----------------------------------------------------


def add(a, b):
    def bw(g):
        return _unbroadcast(g, a.data.shape), _unbroadcast(g, b.data.shape)

    return Tensor(a.data + b.data, _parents=(a, b), _backward_fn=bw)


def sub(a, b):
    def bw(g):
        return _unbroadcast(g, a.data.shape), _unbroadcast(-g, b.data.shape)

    return Tensor(a.data - b.data, _parents=(a, b), _backward_fn=bw)


def mul(a, b):
    def bw(g):
        return (_unbroadcast(g * b.data, a.data.shape),
                _unbroadcast(g * a.data, b.data.shape))

    return Tensor(a.data * b.data, _parents=(a, b), _backward_fn=bw)


def matmul(a, b):
    def bw(g):
        return g @ b.data.T, a.data.T @ g

    return Tensor(a.data @ b.data, _parents=(a, b), _backward_fn=bw)


def square(a):
    def bw(g):
        return (2.0 * a.data * g,)

    return Tensor(a.data ** 2, _parents=(a,), _backward_fn=bw)


def absolute(a):
    # sign(0) == 0: the subgradient of |x| at 0 is taken as 0.
    def bw(g):
        return (np.sign(a.data) * g,)

    return Tensor(np.abs(a.data), _parents=(a,), _backward_fn=bw)


def tanh(a):
    out = np.tanh(a.data)

    def bw(g):
        return (g * (1.0 - out ** 2),)

    return Tensor(out, _parents=(a,), _backward_fn=bw)


def sigmoid(a):
    out = np.empty_like(a.data)
    pos = a.data >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a.data[pos]))
    ez = np.exp(a.data[~pos])
    out[~pos] = ez / (1.0 + ez)

    def bw(g):
        return (g * out * (1.0 - out),)

    return Tensor(out, _parents=(a,), _backward_fn=bw)


def relu(a):
    def bw(g):
        return (g * (a.data > 0),)

    return Tensor(np.maximum(a.data, 0.0), _parents=(a,), _backward_fn=bw)


def reshape(a, shape):
    def bw(g):
        return (g.reshape(a.data.shape),)

    return Tensor(a.data.reshape(shape), _parents=(a,), _backward_fn=bw)


def tsum(a):
    def bw(g):
        return (np.full_like(a.data, float(g)),)

    return Tensor(a.data.sum(), _parents=(a,), _backward_fn=bw)


def tmean(a):
    size = a.data.size

    def bw(g):
        return (np.full_like(a.data, float(g) / size),)

    return Tensor(a.data.mean(), _parents=(a,), _backward_fn=bw)


def last_step(a):
    """(B, T, H) -> (B, H), hidden state of the final step."""

    def bw(g):
        full = np.zeros_like(a.data)
        full[:, -1, :] = g
        return (full,)

    return Tensor(a.data[:, -1, :], _parents=(a,), _backward_fn=bw)


def lstm_seq(x, wx, wh, b):
    """Full LSTM pass over (B, T, I) -> (B, T, H); one taped node."""
    h, cache = _kernels.lstm_forward(x.data, wx.data, wh.data, b.data)

    def bw(g):
        return _kernels.lstm_backward(np.ascontiguousarray(g), cache)

    return Tensor(h, _parents=(x, wx, wh, b), _backward_fn=bw)


def embedding_join(numeric, numeric_cols, tables, indices, blocks, width):
    """Assemble (B, T, width) inputs from constant numeric columns plus
    embedding-table lookups, keeping the tables trainable.

    numeric      (B, T, len(numeric_cols)) constant array
    numeric_cols column positions of the numeric features
    tables       list of (K, d) parameter Tensors
    indices      list of (B, T) integer arrays, one per table
    blocks       list of (start, stop) column slices, one per table
    """
    B, T = indices[0].shape
    out = np.zeros((B, T, width))
    out[:, :, numeric_cols] = numeric
    for table, idx, (start, stop) in zip(tables, indices, blocks):
        out[:, :, start:stop] = table.data[idx]

    def bw(g):
        grads = []
        for table, idx, (start, stop) in zip(tables, indices, blocks):
            gt = np.zeros_like(table.data)
            np.add.at(gt, idx.reshape(-1),
                      g[:, :, start:stop].reshape(-1, stop - start))
            grads.append(gt)
        return grads

    return Tensor(out, _parents=tuple(tables), _backward_fn=bw)


# -- losses -----------------------------------------------------------


def mse(pred, target):
    return tmean(square(sub(pred, _wrap(target))))


def mae(pred, target):
    return tmean(absolute(sub(pred, _wrap(target))))


LOSSES = {"mse": mse, "mae": mae}
