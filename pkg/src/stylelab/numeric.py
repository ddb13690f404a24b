"""Scalar/vector primitives, Adam state, and the finite-difference checker.

All functions are pure and operate on float64 numpy arrays. The softmax
and Adam hot paths delegate to :mod:`stylelab.kernels`.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import DegenerateInputError, ShapeError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def as_vector(values):
    """Coerce to a 1-d float64 array, rejecting anything else."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeError(f"expected a 1-d vector, got shape {v.shape}")
    return v


def dot(u, v):
    """Inner product of two equal-length vectors."""
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape or u.size == 0:
        raise ShapeError(f"dot shapes disagree: {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


def l2_normalize(v):
    """Scale ``v`` to unit euclidean norm. Zero vectors are rejected."""
    v = as_vector(v)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise DegenerateInputError("cannot normalize the zero vector")
    return v / norm


def log_softmax(scores):
    """Stable log-softmax of a score vector (see kernels for details)."""
    return kernels.log_softmax(as_vector(scores))


@dataclass(frozen=True)
class AdamState:
    """First/second moment estimates plus the update counter."""

    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPS

    @classmethod
    def zeros(cls, n_params, **kwargs):
        return cls(first_moment=np.zeros(n_params),
                   second_moment=np.zeros(n_params), **kwargs)


def adam_step(params, grads, state, lr):
    """One bias-corrected Adam update; returns (new_params, new_state)."""
    params, grads = as_vector(params), as_vector(grads)
    if params.shape != grads.shape:
        raise ShapeError("params and grads must have the same shape")
    if params.shape != state.first_moment.shape:
        raise ShapeError("Adam state shape does not match the parameters")
    if lr < 0:
        raise ValueError("learning rate must be non-negative")
    step = state.step_count + 1
    new_p, new_m, new_v = kernels.adam_update(
        params, grads, state.first_moment, state.second_moment,
        step, lr, state.beta1, state.beta2, state.epsilon)
    return new_p, replace(state, first_moment=new_m, second_moment=new_v,
                          step_count=step)


def finite_diff_grad(loss_fn, x, eps=1e-5):
    """Central-difference gradient estimate of a scalar function.

    Used as the independent oracle for every analytic gradient in the
    package; deliberately has no shared code with the backward passes.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = as_vector(x)
    grad = np.empty_like(x)
    for i in range(x.size):
        bump = np.zeros_like(x)
        bump[i] = eps
        grad[i] = (loss_fn(x + bump) - loss_fn(x - bump)) / (2.0 * eps)
    return grad
