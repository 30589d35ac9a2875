"""Numpy implementations of the per-triangle p-Rayleigh kernels.

Same signatures as the compiled ``_kernels`` module.  Arrays:

grads : (T, 3, 2) gradients of the barycentric basis functions
area  : (T,) triangle areas
tri   : (T, 3) vertex indices
bary  : (Q, 3) barycentric quadrature points, wq : (Q,) weights summing to 1
"""

import numpy as np


def energy_grad(u, tri, grads, area, p):
    """``sum_T |grad u|^p area`` and its gradient with respect to ``u``."""
    ut = u[tri]
    g = np.einsum("ti,tid->td", ut, grads)
    n2 = g[:, 0] ** 2 + g[:, 1] ** 2
    if p == 2.0:
        gp2 = np.ones_like(n2)
        val = n2 * area
    else:
        gp2 = n2 ** (0.5 * p - 1.0)
        val = gp2 * n2 * area
    coef = p * gp2 * area
    local = coef[:, None] * np.einsum("td,tid->ti", g, grads)
    grad = np.bincount(tri.ravel(), weights=local.ravel(), minlength=len(u))
    return float(np.sum(val)), grad


def mass_grad(u, tri, area, bary, wq, p):
    """``integral |u|^p`` by the triangle rule and its gradient."""
    uq = u[tri] @ bary.T  # (T, Q)
    a = np.abs(uq)
    ap2 = np.ones_like(a) if p == 2.0 else a ** (p - 2.0)
    W = area[:, None] * wq[None, :]
    val = float(np.sum(ap2 * a * a * W))
    local = (p * ap2 * uq * W) @ bary  # (T, 3)
    grad = np.bincount(tri.ravel(), weights=local.ravel(), minlength=len(u))
    return val, grad


def quad_values(u, tri, bary):
    return np.ascontiguousarray(u[tri] @ bary.T)


def constraint(uq, W, c, p):
    """``(integral |u-c|^(p-2)(u-c), integral |u-c|^(p-1))`` from quadrature values."""
    d = uq - c
    a = np.abs(d)
    ap2 = np.ones_like(a) if p == 2.0 else a ** (p - 2.0)
    return float(np.sum(ap2 * d * W)), float(np.sum(ap2 * a * W))
