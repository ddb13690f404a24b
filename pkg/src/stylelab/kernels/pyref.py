"""Numpy reference implementations of the hot kernels.

This module is the pure-python fallback backend and the behavioural
reference for the compiled backend in ``_ckernels.pyx``: both expose the
same functions with the same contracts, and the test suite asserts their
numerical agreement. Everything operates on C-contiguous float64 arrays.
"""

import numpy as np

from ..errors import ShapeError, ValidationError

BACKEND = "numpy"


def log_softmax(scores):
    """Log-probabilities of a score vector, via max-subtraction.

    exp of the result sums to 1; large scores do not overflow.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or scores.size == 0:
        raise ShapeError("log_softmax expects a non-empty 1-d vector")
    shifted = scores - scores.max()
    return shifted - np.log(np.exp(shifted).sum())


def contrastive_loss_grad(emb, styles, temperature=1.0):
    """Multi-positive contrastive loss over one batch, with gradient.

    For each anchor i the candidate set is every other row; candidates
    sharing the anchor's style are its positives. Scores are inner
    products divided by ``temperature``, normalized per anchor with a
    stable log-softmax. Returns

        loss = -(1/B) * sum_i sum_{j in pos(i)} log p(j | i)

    and d(loss)/d(emb) of shape (B, d).
    """
    emb = np.ascontiguousarray(emb, dtype=np.float64)
    styles = np.asarray(styles, dtype=np.intp)
    if emb.ndim != 2 or emb.shape[0] < 2:
        raise ShapeError("contrastive loss needs a (B, d) matrix with B >= 2")
    if styles.shape != (emb.shape[0],):
        raise ShapeError("styles must parallel the embedding rows")
    n = emb.shape[0]

    scores = (emb @ emb.T) / temperature
    np.fill_diagonal(scores, -np.inf)
    shifted = scores - scores.max(axis=1, keepdims=True)
    exps = np.exp(shifted)  # diagonal underflows to exactly 0
    denom = exps.sum(axis=1, keepdims=True)
    log_probs = shifted - np.log(denom)

    pos = (styles[:, None] == styles[None, :]) & ~np.eye(n, dtype=bool)
    n_pos = pos.sum(axis=1)
    if np.any(n_pos == 0):
        raise ValidationError("anchor without a same-style partner in batch")

    loss = -log_probs[pos].sum() / n

    # dL/ds[i,k] = (n_pos[i] * p[i,k] - pos[i,k]) / B; chain through both
    # sides of s[i,k] = <z_i, z_k> / temperature.
    coeff = (n_pos[:, None] * (exps / denom) - pos) / (n * temperature)
    grad = (coeff + coeff.T) @ emb
    return float(loss), grad


def softmax_xent_grad(logits, labels):
    """Mean softmax cross-entropy over rows, with gradient w.r.t. logits."""
    logits = np.ascontiguousarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.intp)
    if logits.ndim != 2 or logits.size == 0:
        raise ShapeError("logits must be a non-empty (B, C) matrix")
    if labels.shape != (logits.shape[0],):
        raise ShapeError("labels must parallel the logit rows")
    n, c = logits.shape
    if np.any(labels < 0) or np.any(labels >= c):
        raise ValidationError("label out of range for logit width")

    shifted = logits - logits.max(axis=1, keepdims=True)
    exps = np.exp(shifted)
    denom = exps.sum(axis=1, keepdims=True)
    log_probs = shifted - np.log(denom)
    loss = -log_probs[np.arange(n), labels].sum() / n

    grad = exps / denom
    grad[np.arange(n), labels] -= 1.0
    grad /= n
    return float(loss), grad


def mean_pool_forward(token_emb, ids, offsets):
    """Mean of embedding rows per ragged segment.

    ``ids`` is the flat token-id stream; sentence b occupies
    ``ids[offsets[b]:offsets[b+1]]``. Empty segments are rejected.
    """
    token_emb = np.ascontiguousarray(token_emb, dtype=np.float64)
    ids = np.asarray(ids, dtype=np.intp)
    offsets = np.asarray(offsets, dtype=np.intp)
    if token_emb.ndim != 2 or offsets.ndim != 1 or offsets.size < 2:
        raise ShapeError("expected (V, e) embeddings and >= 2 offsets")
    if ids.size and (ids.min() < 0 or ids.max() >= token_emb.shape[0]):
        raise ShapeError("token id out of embedding range")
    n = offsets.size - 1
    out = np.empty((n, token_emb.shape[1]), dtype=np.float64)
    for b in range(n):
        lo, hi = offsets[b], offsets[b + 1]
        if hi <= lo:
            raise ShapeError(f"empty token segment at row {b}")
        out[b] = token_emb[ids[lo:hi]].sum(axis=0) / (hi - lo)
    return out


def mean_pool_backward(grad_pooled, ids, offsets, vocab_size):
    """Scatter-add adjoint of mean_pool_forward; returns (V, e) gradient."""
    grad_pooled = np.ascontiguousarray(grad_pooled, dtype=np.float64)
    ids = np.asarray(ids, dtype=np.intp)
    offsets = np.asarray(offsets, dtype=np.intp)
    grad = np.zeros((vocab_size, grad_pooled.shape[1]), dtype=np.float64)
    for b in range(offsets.size - 1):
        lo, hi = offsets[b], offsets[b + 1]
        contrib = grad_pooled[b] / (hi - lo)
        for t in ids[lo:hi]:
            grad[t] += contrib
    return grad


def adam_update(params, grads, m, v, step, lr, beta1, beta2, eps):
    """One bias-corrected Adam update; ``step`` is the new 1-based count.

    Pure: returns fresh (params, m, v) arrays.
    """
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape or params.shape != m.shape or params.shape != v.shape:
        raise ShapeError("params, grads and moments must share one shape")
    m_new = beta1 * m + (1.0 - beta1) * grads
    v_new = beta2 * v + (1.0 - beta2) * grads * grads
    m_hat = m_new / (1.0 - beta1 ** step)
    v_hat = v_new / (1.0 - beta2 ** step)
    p_new = params - lr * m_hat / (np.sqrt(v_hat) + eps)
    return p_new, m_new, v_new
