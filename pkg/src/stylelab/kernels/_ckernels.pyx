# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: loop implementations of the hot paths.

Contracts match ``pyref`` exactly; see that module for documentation.
The test suite cross-checks both backends on random inputs.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, sqrt, pow, INFINITY

from ..errors import ShapeError, ValidationError

cnp.import_array()

BACKEND = "cython"


def log_softmax(scores):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = \
        np.ascontiguousarray(scores, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] == 0:
        raise ShapeError("log_softmax expects a non-empty 1-d vector")
    cdef Py_ssize_t n = x.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double hi = x[0], total = 0.0
    for i in range(1, n):
        if x[i] > hi:
            hi = x[i]
    for i in range(n):
        out[i] = x[i] - hi
        total += exp(out[i])
    total = log(total)
    for i in range(n):
        out[i] -= total
    return out


def contrastive_loss_grad(emb, styles, double temperature=1.0):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] z = \
        np.ascontiguousarray(emb, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] y = \
        np.ascontiguousarray(styles, dtype=np.intp)
    if z.ndim != 2 or z.shape[0] < 2:
        raise ShapeError("contrastive loss needs a (B, d) matrix with B >= 2")
    if y.shape[0] != z.shape[0]:
        raise ShapeError("styles must parallel the embedding rows")

    cdef Py_ssize_t n = z.shape[0], d = z.shape[1], i, j, k
    cdef cnp.ndarray[cnp.float64_t, ndim=2] scores = np.empty((n, n), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] coeff = np.zeros((n, n), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] grad = np.zeros((n, d), dtype=np.float64)
    cdef double s, hi, denom, loss = 0.0, npos_i, g
    cdef Py_ssize_t npos

    for i in range(n):
        for j in range(i, n):
            s = 0.0
            for k in range(d):
                s += z[i, k] * z[j, k]
            s /= temperature
            scores[i, j] = s
            scores[j, i] = s

    for i in range(n):
        npos = 0
        for j in range(n):
            if j != i and y[j] == y[i]:
                npos += 1
        if npos == 0:
            raise ValidationError("anchor without a same-style partner in batch")
        npos_i = <double> npos

        hi = -INFINITY
        for j in range(n):
            if j != i and scores[i, j] > hi:
                hi = scores[i, j]
        denom = 0.0
        for j in range(n):
            if j != i:
                coeff[i, j] = exp(scores[i, j] - hi)
                denom += coeff[i, j]
        for j in range(n):
            if j == i:
                continue
            if y[j] == y[i]:
                loss -= scores[i, j] - hi - log(denom)
                g = (npos_i * coeff[i, j] / denom - 1.0) / (n * temperature)
            else:
                g = (npos_i * coeff[i, j] / denom) / (n * temperature)
            coeff[i, j] = g

    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            g = coeff[i, j]
            for k in range(d):
                grad[i, k] += g * z[j, k]
                grad[j, k] += g * z[i, k]

    return loss / n, grad


def softmax_xent_grad(logits, labels):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = \
        np.ascontiguousarray(logits, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] y = \
        np.ascontiguousarray(labels, dtype=np.intp)
    if x.ndim != 2 or x.shape[0] == 0 or x.shape[1] == 0:
        raise ShapeError("logits must be a non-empty (B, C) matrix")
    if y.shape[0] != x.shape[0]:
        raise ShapeError("labels must parallel the logit rows")

    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=2] grad = np.empty((n, c), dtype=np.float64)
    cdef double hi, denom, loss = 0.0
    for i in range(n):
        if y[i] < 0 or y[i] >= c:
            raise ValidationError("label out of range for logit width")
        hi = x[i, 0]
        for j in range(1, c):
            if x[i, j] > hi:
                hi = x[i, j]
        denom = 0.0
        for j in range(c):
            grad[i, j] = exp(x[i, j] - hi)
            denom += grad[i, j]
        loss -= x[i, y[i]] - hi - log(denom)
        for j in range(c):
            grad[i, j] /= denom
        grad[i, y[i]] -= 1.0
        for j in range(c):
            grad[i, j] /= n
    return loss / n, grad


def mean_pool_forward(token_emb, ids, offsets):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] emb = \
        np.ascontiguousarray(token_emb, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] tok = \
        np.ascontiguousarray(ids, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] off = \
        np.ascontiguousarray(offsets, dtype=np.intp)
    if emb.ndim != 2 or off.shape[0] < 2:
        raise ShapeError("expected (V, e) embeddings and >= 2 offsets")

    cdef Py_ssize_t v = emb.shape[0], e = emb.shape[1]
    cdef Py_ssize_t n = off.shape[0] - 1, b, t, k, lo, hi
    for t in range(tok.shape[0]):
        if tok[t] < 0 or tok[t] >= v:
            raise ShapeError("token id out of embedding range")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, e), dtype=np.float64)
    cdef double inv
    for b in range(n):
        lo = off[b]
        hi = off[b + 1]
        if hi <= lo:
            raise ShapeError(f"empty token segment at row {b}")
        for t in range(lo, hi):
            for k in range(e):
                out[b, k] += emb[tok[t], k]
        inv = 1.0 / (hi - lo)
        for k in range(e):
            out[b, k] *= inv
    return out


def mean_pool_backward(grad_pooled, ids, offsets, vocab_size):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] gp = \
        np.ascontiguousarray(grad_pooled, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] tok = \
        np.ascontiguousarray(ids, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] off = \
        np.ascontiguousarray(offsets, dtype=np.intp)
    cdef Py_ssize_t e = gp.shape[1], n = off.shape[0] - 1, b, t, k, lo, hi
    cdef cnp.ndarray[cnp.float64_t, ndim=2] grad = \
        np.zeros((vocab_size, e), dtype=np.float64)
    cdef double inv
    for b in range(n):
        lo = off[b]
        hi = off[b + 1]
        inv = 1.0 / (hi - lo)
        for t in range(lo, hi):
            for k in range(e):
                grad[tok[t], k] += gp[b, k] * inv
    return grad


def adam_update(params, grads, m, v, step, double lr,
                double beta1, double beta2, double eps):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = \
        np.ascontiguousarray(params, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = \
        np.ascontiguousarray(grads, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m0 = \
        np.ascontiguousarray(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v0 = \
        np.ascontiguousarray(v, dtype=np.float64)
    if not (p.shape[0] == g.shape[0] == m0.shape[0] == v0.shape[0]):
        raise ShapeError("params, grads and moments must share one shape")

    cdef Py_ssize_t n = p.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p1 = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m1 = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v1 = np.empty(n, dtype=np.float64)
    cdef double mc = 1.0 - pow(beta1, <double> step)
    cdef double vc = 1.0 - pow(beta2, <double> step)
    cdef double m_hat, v_hat
    for i in range(n):
        m1[i] = beta1 * m0[i] + (1.0 - beta1) * g[i]
        v1[i] = beta2 * v0[i] + (1.0 - beta2) * g[i] * g[i]
        m_hat = m1[i] / mc
        v_hat = v1[i] / vc
        p1[i] = p[i] - lr * m_hat / (sqrt(v_hat) + eps)
    return p1, m1, v1
