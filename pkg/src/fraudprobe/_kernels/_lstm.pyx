# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled LSTM sequence kernels.

Drop-in twin of `numpy_impl`: same shapes, same gate order [i|f|g|o],
same cache layout.  Plain C loops beat the numpy version on the small
matrices this package lives on (feature widths of a few dozen, hidden
sizes of 16-64), where per-call numpy overhead dominates.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, tanh

cnp.import_array()


cdef inline double sigmoid(double z) noexcept nogil:
    if z >= 0.0:
        return 1.0 / (1.0 + exp(-z))
    cdef double ez = exp(z)
    return ez / (1.0 + ez)


def lstm_forward(object x_in, object wx_in, object wh_in, object b_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=3] x = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wx = np.ascontiguousarray(wx_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wh = np.ascontiguousarray(wh_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b = np.ascontiguousarray(b_in, dtype=np.float64)

    cdef Py_ssize_t B = x.shape[0], T = x.shape[1], I = x.shape[2]
    cdef Py_ssize_t H = wh.shape[0]

    cdef cnp.ndarray[cnp.float64_t, ndim=3] h_all = np.zeros((B, T + 1, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] c_all = np.zeros((B, T + 1, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gi = np.empty((B, T, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gf = np.empty((B, T, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gg = np.empty((B, T, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] go = np.empty((B, T, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=3] tc = np.empty((B, T, H))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z = np.empty(4 * H)

    cdef Py_ssize_t n, t, j, k
    cdef double acc, xv, hv

    for n in range(B):
        for t in range(T):
            for j in range(4 * H):
                z[j] = b[j]
            for k in range(I):
                xv = x[n, t, k]
                if xv != 0.0:
                    for j in range(4 * H):
                        z[j] += xv * wx[k, j]
            for k in range(H):
                hv = h_all[n, t, k]
                if hv != 0.0:
                    for j in range(4 * H):
                        z[j] += hv * wh[k, j]
            for j in range(H):
                gi[n, t, j] = sigmoid(z[j])
                gf[n, t, j] = sigmoid(z[H + j])
                gg[n, t, j] = tanh(z[2 * H + j])
                go[n, t, j] = sigmoid(z[3 * H + j])
                c_all[n, t + 1, j] = gf[n, t, j] * c_all[n, t, j] + gi[n, t, j] * gg[n, t, j]
                tc[n, t, j] = tanh(c_all[n, t + 1, j])
                h_all[n, t + 1, j] = go[n, t, j] * tc[n, t, j]

    cache = (x, wx, wh, h_all, c_all, gi, gf, gg, go, tc)
    return np.ascontiguousarray(h_all[:, 1:, :]), cache


def lstm_backward(object grad_in, tuple cache):
    cdef cnp.ndarray[cnp.float64_t, ndim=3] grad_h = np.ascontiguousarray(grad_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] x = cache[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wx = cache[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wh = cache[2]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] h_all = cache[3]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] c_all = cache[4]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gi = cache[5]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gf = cache[6]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] gg = cache[7]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] go = cache[8]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] tc = cache[9]

    cdef Py_ssize_t B = x.shape[0], T = x.shape[1], I = x.shape[2]
    cdef Py_ssize_t H = wh.shape[0]

    cdef cnp.ndarray[cnp.float64_t, ndim=3] dx = np.zeros((B, T, I))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dwx = np.zeros((I, 4 * H))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dwh = np.zeros((H, 4 * H))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] db = np.zeros(4 * H)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dh_next = np.empty(H)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dc_next = np.empty(H)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dz = np.empty(4 * H)

    cdef Py_ssize_t n, t, j, k
    cdef double dh, do, dc, di, dg, df, g, acc, v

    for n in range(B):
        for j in range(H):
            dh_next[j] = 0.0
            dc_next[j] = 0.0
        for t in range(T - 1, -1, -1):
            for j in range(H):
                dh = grad_h[n, t, j] + dh_next[j]
                do = dh * tc[n, t, j]
                dc = dc_next[j] + dh * go[n, t, j] * (1.0 - tc[n, t, j] * tc[n, t, j])
                di = dc * gg[n, t, j]
                dg = dc * gi[n, t, j]
                df = dc * c_all[n, t, j]
                dc_next[j] = dc * gf[n, t, j]
                g = gi[n, t, j]
                dz[j] = di * g * (1.0 - g)
                g = gf[n, t, j]
                dz[H + j] = df * g * (1.0 - g)
                g = gg[n, t, j]
                dz[2 * H + j] = dg * (1.0 - g * g)
                g = go[n, t, j]
                dz[3 * H + j] = do * g * (1.0 - g)
            for j in range(4 * H):
                db[j] += dz[j]
            for k in range(I):
                v = x[n, t, k]
                acc = 0.0
                for j in range(4 * H):
                    if v != 0.0:
                        dwx[k, j] += v * dz[j]
                    acc += dz[j] * wx[k, j]
                dx[n, t, k] = acc
            for k in range(H):
                v = h_all[n, t, k]
                acc = 0.0
                for j in range(4 * H):
                    if v != 0.0:
                        dwh[k, j] += v * dz[j]
                    acc += dz[j] * wh[k, j]
                dh_next[k] = acc

    return dx, dwx, dwh, db
