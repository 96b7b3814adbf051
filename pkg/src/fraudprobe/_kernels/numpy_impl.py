"""Pure-numpy LSTM sequence kernels (reference backend).

These are the hot kernels of the whole package: every detector training
step, every sliding-window classification and every gradient-sign attack
goes through `lstm_forward` / `lstm_backward`.  The compiled backend in
`_lstm.pyx` implements the exact same contract; either one can serve the
autodiff layer.

Shapes and gate order (fixed across backends):
    x      (B, T, I)   input sequence batch
    wx     (I, 4H)     input-to-gate weights, gate blocks [i | f | g | o]
    wh     (H, 4H)     hidden-to-gate weights
    b      (4H,)       gate biases
    h_seq  (B, T, H)   hidden states for every step

The cache returned by the forward pass is
    (x, wx, wh, h_all, c_all, gi, gf, gg, go, tc)
where h_all/c_all have shape (B, T+1, H) with the zero initial state in
slot 0, the four gate arrays and tc = tanh(c) have shape (B, T, H).
"""

import numpy as np


def _sigmoid(z):
    # Split by sign so exp() never overflows.
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def lstm_forward(x, wx, wh, b):
    x = np.ascontiguousarray(x, dtype=np.float64)
    B, T, I = x.shape
    H = wh.shape[0]
    h_all = np.zeros((B, T + 1, H))
    c_all = np.zeros((B, T + 1, H))
    gi = np.empty((B, T, H))
    gf = np.empty((B, T, H))
    gg = np.empty((B, T, H))
    go = np.empty((B, T, H))
    tc = np.empty((B, T, H))
    for t in range(T):
        z = x[:, t, :] @ wx + h_all[:, t, :] @ wh + b
        gi[:, t] = _sigmoid(z[:, :H])
        gf[:, t] = _sigmoid(z[:, H:2 * H])
        gg[:, t] = np.tanh(z[:, 2 * H:3 * H])
        go[:, t] = _sigmoid(z[:, 3 * H:])
        c_all[:, t + 1] = gf[:, t] * c_all[:, t] + gi[:, t] * gg[:, t]
        tc[:, t] = np.tanh(c_all[:, t + 1])
        h_all[:, t + 1] = go[:, t] * tc[:, t]
    cache = (x, wx, wh, h_all, c_all, gi, gf, gg, go, tc)
    return h_all[:, 1:, :].copy(), cache


def lstm_backward(grad_h, cache):
    x, wx, wh, h_all, c_all, gi, gf, gg, go, tc = cache
    B, T, I = x.shape
    H = wh.shape[0]
    dx = np.zeros_like(x)
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    db = np.zeros(4 * H)
    dh_next = np.zeros((B, H))
    dc_next = np.zeros((B, H))
    dz = np.empty((B, 4 * H))
    for t in range(T - 1, -1, -1):
        dh = grad_h[:, t, :] + dh_next
        do = dh * tc[:, t]
        dc = dc_next + dh * go[:, t] * (1.0 - tc[:, t] ** 2)
        di = dc * gg[:, t]
        dg = dc * gi[:, t]
        df = dc * c_all[:, t]
        dc_next = dc * gf[:, t]
        dz[:, :H] = di * gi[:, t] * (1.0 - gi[:, t])
        dz[:, H:2 * H] = df * gf[:, t] * (1.0 - gf[:, t])
        dz[:, 2 * H:3 * H] = dg * (1.0 - gg[:, t] ** 2)
        dz[:, 3 * H:] = do * go[:, t] * (1.0 - go[:, t])
        dwx += x[:, t, :].T @ dz
        dwh += h_all[:, t, :].T @ dz
        db += dz.sum(axis=0)
        dx[:, t, :] = dz @ wx.T
        dh_next = dz @ wh.T
    return dx, dwx, dwh, db
