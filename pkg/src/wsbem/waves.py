"""Spherical wave fields, their wavenumber derivatives, and Helmholtz kernels.

Time convention is ``exp(+j omega t)`` throughout, so outgoing radiation
carries ``exp(-j k r)`` and the free-space kernel is
``G(r, r') = exp(-j k |r - r'|) / (4 pi |r - r'|)``.

Wave families for mode ``p = (l, m)``:

    incoming  I_p(r) = k j^(l+1) h_l^(1)(k r) X_p(theta, phi)
    outgoing  O_p(r) = k j^(l+1) h_l^(2)(k r) X_p(theta, phi)
    standing  W_p(r) = 2 k j^(l+1) j_l(k r) X_p(theta, phi)

``W_p = I_p + O_p`` pointwise and is regular at the origin.  All wavenumber
derivatives here are taken at a fixed spatial point (and, for the kernel
derivative, at fixed source density).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    ModeIndex,
    sph_bessel,
    sph_bessel_zderiv,
    sph_bessel_zderiv2,
    sph_harm_tables,
    spherical_harmonic,
)

__all__ = [
    "Medium",
    "FieldSample",
    "eval_wave",
    "eval_standing_kderiv",
    "eval_wave_normal_deriv",
    "eval_wave_gradient",
    "eval_wave_far",
    "green",
    "green_far",
    "green_expansion_check",
    "standing_wave_fields",
]

_SING_EPS = 1e-12

_KIND_BESSEL = {"incoming": "h1", "outgoing": "h2", "standing": "j"}


@dataclass(frozen=True)
class Medium:
    """Lossless homogeneous medium: real wavenumber ``k`` and speed ``v``."""

    k: float
    v: float = 1.0

    def __post_init__(self):
        if self.k <= 0 or self.v <= 0:
            raise ValueError("k and v must be positive")

    @property
    def omega(self) -> float:
        return self.v * self.k


@dataclass
class FieldSample:
    """Velocity potential with optional gradient and wavenumber derivative."""

    value: complex
    gradient: np.ndarray | None = None
    kderiv: complex | None = None


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------
def _to_spherical(r: np.ndarray):
    r = np.asarray(r, dtype=float)
    rad = np.sqrt(np.sum(r * r, axis=-1))
    safe = np.where(rad > 0, rad, 1.0)
    ct = np.clip(r[..., 2] / safe, -1.0, 1.0)
    theta = np.arccos(ct)
    phi = np.arctan2(r[..., 1], r[..., 0])
    return rad, theta, phi


def _radial_prefactor(kind: str, l: int) -> complex:
    c = 1j ** (l + 1)
    return 2.0 * c if kind == "standing" else c


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------
def eval_wave(kind: str, p: ModeIndex, k: float, r) -> complex | np.ndarray:
    """Evaluate the incoming/outgoing/standing wave of mode ``p`` at ``r``.

    ``r`` is a 3-vector or array of 3-vectors.  Singular kinds reject points
    at the origin.
    """
    if kind not in _KIND_BESSEL:
        raise ValueError(f"unknown wave kind {kind!r}")
    rad, theta, phi = _to_spherical(r)
    if kind != "standing" and np.any(rad < _SING_EPS):
        raise ValueError(f"{kind} wave is singular at the origin")
    radial = sph_bessel(_KIND_BESSEL[kind], p.l, np.maximum(k * rad, 0.0))
    X = spherical_harmonic(p, theta, phi)
    out = k * _radial_prefactor(kind, p.l) * radial * X
    return complex(out) if np.ndim(out) == 0 else out


def eval_standing_kderiv(p: ModeIndex, k: float, r) -> complex | np.ndarray:
    """d/dk of the standing wave at fixed ``r``:
    ``2 j^(l+1) (j_l(kr) + kr j_l'(kr)) X_p``."""
    rad, theta, phi = _to_spherical(r)
    z = k * rad
    radial = sph_bessel("j", p.l, z) + z * sph_bessel_zderiv("j", p.l, z)
    X = spherical_harmonic(p, theta, phi)
    out = 2.0 * 1j ** (p.l + 1) * radial * X
    return complex(out) if np.ndim(out) == 0 else out


def _radial_funcs(kind: str, l: int, k: float, rad: np.ndarray, kderiv: bool):
    """Radial factor g(r) and dg/dr for the wave (or its k-derivative)."""
    b = _KIND_BESSEL[kind]
    z = k * rad
    pref = _radial_prefactor(kind, l)
    f = sph_bessel(b, l, z)
    fp = sph_bessel_zderiv(b, l, z)
    if not kderiv:
        return k * pref * f, k * k * pref * fp
    fpp = sph_bessel_zderiv2(b, l, z)
    g = pref * (f + z * fp)
    gp = pref * k * (2.0 * fp + z * fpp)
    return g, gp


def eval_wave_gradient(
    kind: str, p: ModeIndex, k: float, r, kderiv: bool = False
) -> np.ndarray:
    """Cartesian gradient of the wave (or of its wavenumber derivative).

    Points at the origin are rejected for every kind; spherical-coordinate
    evaluation needs ``|r| > 0``.
    """
    if kind not in _KIND_BESSEL:
        raise ValueError(f"unknown wave kind {kind!r}")
    rad, theta, phi = _to_spherical(r)
    if np.any(rad < _SING_EPS):
        raise ValueError("gradient evaluation requires |r| > 0")
    g, gp = _radial_funcs(kind, p.l, k, rad, kderiv)
    X, dX, mXs = sph_harm_tables(
        p.l, np.atleast_1d(theta), np.atleast_1d(phi), derivatives=True
    )
    q = p.l * p.l + p.l + p.m
    Xv, dXv, mXsv = X[q], dX[q], mXs[q]

    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    rhat = np.stack([st * cp, st * sp, ct], axis=-1)
    that = np.stack([ct * cp, ct * sp, -st], axis=-1)
    phat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)

    grad = (
        np.asarray(gp)[..., None] * np.asarray(Xv)[..., None] * rhat
        + (np.asarray(g) / rad)[..., None]
        * (np.asarray(dXv)[..., None] * that + 1j * np.asarray(mXsv)[..., None] * phat)
    )
    return grad[0] if np.ndim(r) == 1 else grad


def eval_wave_normal_deriv(
    kind: str, p: ModeIndex, k: float, r, n, kderiv: bool = False
) -> complex | np.ndarray:
    """``n . grad`` of the wave (or of its k-derivative) at ``r``.

    ``n`` must be a unit vector (or array of unit vectors matching ``r``).
    """
    n = np.asarray(n, dtype=float)
    if not np.allclose(np.sum(n * n, axis=-1), 1.0, atol=1e-8):
        raise ValueError("n must be a unit vector")
    grad = eval_wave_gradient(kind, p, k, r, kderiv=kderiv)
    out = np.sum(grad * n, axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def eval_wave_far(kind: str, p: ModeIndex, k: float, r) -> complex | np.ndarray:
    """Large-argument form: ``e^{jkr}/r X_p`` (incoming),
    ``(-1)^(l+1) e^{-jkr}/r X_p`` (outgoing), or their sum (standing)."""
    rad, theta, phi = _to_spherical(r)
    if np.any(rad < _SING_EPS):
        raise ValueError("far form needs |r| > 0")
    X = spherical_harmonic(p, theta, phi)
    inc = np.exp(1j * k * rad) / rad * X
    out = (-1.0) ** (p.l + 1) * np.exp(-1j * k * rad) / rad * X
    if kind == "incoming":
        res = inc
    elif kind == "outgoing":
        res = out
    elif kind == "standing":
        res = inc + out
    else:
        raise ValueError(f"unknown wave kind {kind!r}")
    return complex(res) if np.ndim(res) == 0 else res


# ---------------------------------------------------------------------------
# Green's function kernels
# ---------------------------------------------------------------------------
def green(r, rp, k: float, variant: str = "value", n=None, n_src=None):
    """Helmholtz kernel ``G = e^{-jkD}/(4 pi D)`` and derived kernels.

    Variants
    --------
    ``value``         G
    ``kderiv``        dG/dk = (-j/(4 pi)) e^{-jkD}
    ``normal_src``    dG/dn' (normal derivative at the source point ``rp``;
                      pass the source normal as ``n_src``)
    ``normal_both``   d^2 G/(dn dn') (needs ``n`` at ``r`` and ``n_src``)
    ``kderiv_normal`` d^2 (dG/dk)/(dn dn')

    The kernel is symmetric in ``r`` and ``rp``, so the observation-normal
    derivative is ``green(rp, r, k, 'normal_src', n_src=n_obs)``.
    Coincident points raise.
    """
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    u = r - rp
    D = np.sqrt(np.sum(u * u, axis=-1))
    if np.any(D < _SING_EPS):
        raise ValueError("green: coincident points are singular")
    ph = np.exp(-1j * k * D)
    if variant == "value":
        out = ph / (4.0 * math.pi * D)
    elif variant == "kderiv":
        out = -1j / (4.0 * math.pi) * ph
    elif variant == "normal_src":
        if n_src is None:
            raise ValueError("normal_src variant needs n_src")
        un = np.sum(u * np.asarray(n_src, dtype=float), axis=-1)
        # dG/dD = -(1 + jkD) e^{-jkD} / (4 pi D^2); dD/dn' = -(u.n')/D
        out = (1.0 + 1j * k * D) * ph / (4.0 * math.pi * D**3) * un
    elif variant == "normal_both":
        if n is None or n_src is None:
            raise ValueError("normal_both variant needs n and n_src")
        out = _hyper_kernel(u, D, ph, np.asarray(n, float), np.asarray(n_src, float), k)
    elif variant == "kderiv_normal":
        if n is None or n_src is None:
            raise ValueError("kderiv_normal variant needs n and n_src")
        out = _hyper_kderiv_kernel(
            u, D, ph, np.asarray(n, float), np.asarray(n_src, float), k
        )
    else:
        raise ValueError(f"unknown kernel variant {variant!r}")
    return complex(out) if np.ndim(out) == 0 else out


def _hyper_kernel(u, D, ph, n, n_src, k):
    # d^2 G / dn dn' with u = r - r'
    un = np.sum(u * n, axis=-1)
    uns = np.sum(u * n_src, axis=-1)
    nns = np.sum(n * n_src, axis=-1)
    jkD = 1j * k * D
    g1 = -(1.0 + jkD) * ph / (4.0 * math.pi * D**2)  # dG/dD
    g2 = (2.0 + 2.0 * jkD + jkD**2) * ph / (4.0 * math.pi * D**3)
    return -g2 * un * uns / D**2 - g1 * (nns / D - un * uns / D**3)


def _hyper_kderiv_kernel(u, D, ph, n, n_src, k):
    # d^2 (dG/dk) / dn dn'; only weakly singular (1/D) as D -> 0
    un = np.sum(u * n, axis=-1)
    uns = np.sum(u * n_src, axis=-1)
    nns = np.sum(n * n_src, axis=-1)
    return (
        k
        * ph
        / (4.0 * math.pi)
        * (nns / D - un * uns / D**3 - 1j * k * un * uns / D**2)
    )


def green_far(r, rp, k: float):
    """Far-zone kernel ``e^{-jkr} e^{jk rhat.rp} / (4 pi r)`` for ``|r| >> |rp|``."""
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    rad = np.sqrt(np.sum(r * r, axis=-1))
    rhat = r / rad[..., None]
    out = np.exp(-1j * k * rad) * np.exp(1j * k * np.sum(rhat * rp, axis=-1)) / (
        4.0 * math.pi * rad
    )
    return complex(out) if np.ndim(out) == 0 else out


def green_expansion_check(r, rp, k: float, l_max: int, far: bool = False):
    """Partial-sum spherical-wave expansion of the kernel.

    Sums ``-(j/2k) W_p(rp) conj(I_p(r))`` over all modes with ``l <= l_max``;
    converges to ``green(r, rp, k)`` for ``|r| > |rp|``.  With ``far=True``
    the outer factor uses the large-argument incoming form, which converges
    to :func:`green_far`.
    """
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    if np.linalg.norm(r) <= np.linalg.norm(rp):
        raise ValueError("expansion requires |r| > |rp|")
    from .specfun import mode_set_from_lmax

    ms = mode_set_from_lmax(l_max, k, max(np.linalg.norm(rp), 1e-6))
    acc = 0.0 + 0.0j
    for p in ms.modes:
        W = eval_wave("standing", p, k, rp)
        I = eval_wave_far("incoming", p, k, r) if far else eval_wave("incoming", p, k, r)
        acc += W * np.conj(I)
    return -1j / (2.0 * k) * acc


# ---------------------------------------------------------------------------
# batch evaluation for assembly
# ---------------------------------------------------------------------------
def standing_wave_fields(
    l_max: int,
    k: float,
    points: np.ndarray,
    normals: np.ndarray | None = None,
    kderiv: bool = False,
):
    """Standing waves of every mode with ``l <= l_max`` at many points.

    Parameters
    ----------
    points : (P, 3) array
    normals : (P, 3) array, optional
        When given, normal derivatives are returned instead of values.
    kderiv : bool
        Evaluate the wavenumber derivative of the field instead.

    Returns
    -------
    (M, P) complex array ordered like :class:`~wsbem.specfun.ModeSet`.
    """
    points = np.asarray(points, dtype=float)
    rad, theta, phi = _to_spherical(points)
    if normals is None:
        z = k * np.maximum(rad, 0.0)
        X = sph_harm_tables(l_max, theta, phi)
        out = np.empty((X.shape[0], points.shape[0]), dtype=complex)
        for l in range(l_max + 1):
            f = sph_bessel("j", l, z)
            if kderiv:
                radial = 2.0 * 1j ** (l + 1) * (f + z * sph_bessel_zderiv("j", l, z))
            else:
                radial = 2.0 * k * 1j ** (l + 1) * f
            for m in range(-l, l + 1):
                q = l * l + l + m
                out[q] = radial * X[q]
        return out

    if np.any(rad < _SING_EPS):
        raise ValueError("normal derivatives need |r| > 0")
    normals = np.asarray(normals, dtype=float)
    X, dX, mXs = sph_harm_tables(l_max, theta, phi, derivatives=True)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    n_r = normals[:, 0] * st * cp + normals[:, 1] * st * sp + normals[:, 2] * ct
    n_t = normals[:, 0] * ct * cp + normals[:, 1] * ct * sp - normals[:, 2] * st
    n_p = -normals[:, 0] * sp + normals[:, 1] * cp
    out = np.empty((X.shape[0], points.shape[0]), dtype=complex)
    for l in range(l_max + 1):
        g, gp = _radial_funcs("standing", l, k, rad, kderiv)
        for m in range(-l, l + 1):
            q = l * l + l + m
            out[q] = gp * X[q] * n_r + g / rad * (dX[q] * n_t + 1j * mXs[q] * n_p)
    return out
