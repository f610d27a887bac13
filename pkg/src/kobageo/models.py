"""Closed forms on the unit disk, unit ball and unit polydisk.

All functions take normalized coordinates (center 0, radius 1) as complex
arrays with the coordinate index last and broadcast over leading axes.
Distances use formulas that stay accurate for points within ~1e-15 of
the boundary: ``1 - |z|^2`` is formed as ``(1 - |z|)(1 + |z|)`` and
``1 - t^2`` is never formed by subtraction.
"""

from __future__ import annotations

import numpy as np


def _herm(a, b):
    # <a, b> = sum a_j conj(b_j)
    return np.sum(a * np.conj(b), axis=-1)


def _one_minus_sq(z):
    r = np.linalg.norm(z, axis=-1)
    return (1.0 - r) * (1.0 + r)


def ball_metric(z, v):
    """Kobayashi-Royden metric of the unit ball (the disk when d = 1)."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    q = _one_minus_sq(z)
    vv = np.sum(np.abs(v) ** 2, axis=-1)
    zv = np.abs(_herm(v, z)) ** 2
    return np.sqrt(vv / q + zv / (q * q))


def polydisk_metric(z, v):
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    a = np.abs(z)
    return np.max(np.abs(v) / ((1.0 - a) * (1.0 + a)), axis=-1)


def ball_distance(z, w):
    """Kobayashi distance of the unit ball, stable near the sphere.

    With ``t = tanh(k)``: ``1 - t^2 = (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2`` and
    ``t^2 |1-<z,w>|^2 = |z-w|^2 - (|z|^2|w|^2 - |<z,w>|^2)``; the bracket is
    the Lagrange sum over coordinate pairs, which has no cancellation.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    den = np.abs(1.0 - _herm(z, w)) ** 2
    q = _one_minus_sq(z) * _one_minus_sq(w) / den
    diff = np.sum(np.abs(z - w) ** 2, axis=-1)
    d = z.shape[-1]
    lag = np.zeros(z.shape[:-1])
    for j in range(d):
        for k in range(j + 1, d):
            lag = lag + np.abs(z[..., j] * w[..., k] - z[..., k] * w[..., j]) ** 2
    t = np.sqrt(np.maximum(diff - lag, 0.0) / den)
    t = np.minimum(t, 1.0)
    return np.log1p(t) - 0.5 * np.log(q)


def disk_distance(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return ball_distance(z[..., None], w[..., None])


def polydisk_distance(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    return np.max(disk_distance(z, w), axis=-1)


def ball_automorphism(a, z):
    """The involutive automorphism of the ball exchanging ``a`` and 0."""
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if a.ndim != 1:
        raise ValueError("ball_automorphism expects a single center point")
    aa = float(np.sum(np.abs(a) ** 2))
    if aa == 0:
        return -z
    za = _herm(z, a)
    pz = (za / aa)[..., None] * a
    qz = z - pz
    return (a - pz - np.sqrt(1.0 - aa) * qz) / (1.0 - za)[..., None]


def ball_geodesic(z, w, u):
    """Points at Kobayashi arc length ``u`` on the geodesic from z to w."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    u = np.asarray(u, dtype=float)
    b = ball_automorphism(z, w)
    nb = np.linalg.norm(b)
    if nb == 0:
        return np.broadcast_to(z, u.shape + z.shape).copy()
    e = b / nb
    pts = np.tanh(u)[:, None] * e[None, :]
    return ball_automorphism(z, pts)


def polydisk_geodesic(z, w, u):
    """Componentwise disk geodesics, each run at speed k_j / max_j k_j."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    u = np.asarray(u, dtype=float)
    ks = disk_distance(z, w)
    total = float(np.max(ks))
    out = np.empty(u.shape + z.shape, dtype=complex)
    for j in range(z.shape[-1]):
        if ks[j] == 0:
            out[:, j] = z[j]
            continue
        uj = u * (ks[j] / total) if total > 0 else u * 0
        out[:, j] = ball_geodesic(z[j:j + 1], w[j:j + 1], uj)[:, 0]
    return out


def ball_line_radius(z, v):
    """Radius of the largest disk centered at z in the complex line z + C v."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = v / np.linalg.norm(v, axis=-1, keepdims=True)
    p = np.abs(_herm(z, u))
    return np.sqrt(1.0 - np.sum(np.abs(z) ** 2, axis=-1) + p * p) - p


def polydisk_line_radius(z, v):
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = np.abs(v / np.linalg.norm(v, axis=-1, keepdims=True))
    with np.errstate(divide="ignore"):
        r = np.where(u > 0, (1.0 - np.abs(z)) / np.where(u > 0, u, 1.0), np.inf)
    return np.min(r, axis=-1)
