"""Spherical Bessel/Hankel functions, spherical harmonics, and mode bookkeeping.

Everything downstream (wave evaluation, matrix assembly, analytic sphere
solutions) consumes the primitives in this module.  The linear mode index
``p`` enumerates spherical-harmonic orders ``(l, m)`` with ``l`` ascending
and, within each ``l``, ``m`` ascending from ``-l`` to ``l``.  That ordering
is fixed here and inherited by every matrix in the package.

Conventions
-----------
Spherical harmonics carry an extra ``(-1)**m`` phase on top of the
orthonormal (Condon-Shortley) harmonics:

    X_lm(theta, phi) = (-1)**m * sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)
                       * P_l^m(cos theta) * exp(j m phi)

with ``P_l^m`` the associated Legendre function including the
Condon-Shortley phase.  With this choice ``conj(X_lm) = (-1)**m X_(l,-m)``.
Normalization is folded into the recurrences so degrees up to a few hundred
evaluate without factorial overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import spherical_jn, spherical_yn

__all__ = [
    "ModeIndex",
    "ModeSet",
    "sph_bessel",
    "sph_bessel_zderiv",
    "spherical_harmonic",
    "sph_harm_tables",
    "build_mode_set",
    "mode_set_from_lmax",
    "sphere_quadrature",
]

_HANKEL_MIN_ARG = 1e-12


# ---------------------------------------------------------------------------
# Mode indexing
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ModeIndex:
    """Linear port index ``p`` together with its ``(l, m)`` tuple."""

    p: int
    l: int
    m: int

    def __post_init__(self):
        if self.l < 0 or abs(self.m) > self.l:
            raise ValueError(f"invalid mode (l={self.l}, m={self.m})")


def _linear_index(l: int, m: int) -> int:
    # (l, m) -> p for the (l ascending, m ascending) ordering
    return l * l + l + m


@dataclass(frozen=True)
class ModeSet:
    """Ordered collection of modes up to ``l_max``.

    Attributes
    ----------
    l_max : int
        Largest retained harmonic degree.
    k : float
        Wavenumber the set was built for (1/length).
    a : float
        Circumscribing radius used by the truncation rule (length).
    c : float
        Dimensionless truncation constant.
    modes : list[ModeIndex]
        ``(l_max + 1)**2`` entries in (l ascending, m ascending) order.
    """

    l_max: int
    k: float
    a: float
    c: float
    modes: list[ModeIndex] = field(default_factory=list)

    def __post_init__(self):
        if not self.modes:
            object.__setattr__(
                self,
                "modes",
                [
                    ModeIndex(_linear_index(l, m), l, m)
                    for l in range(self.l_max + 1)
                    for m in range(-l, l + 1)
                ],
            )

    def __len__(self) -> int:
        return len(self.modes)

    @property
    def size(self) -> int:
        return (self.l_max + 1) ** 2

    def mode(self, l: int, m: int) -> ModeIndex:
        return self.modes[_linear_index(l, m)]

    def conjugate(self, p: ModeIndex) -> ModeIndex:
        """Map ``(l, m) -> (l, -m)``; an involution on the set."""
        return self.modes[_linear_index(p.l, -p.m)]

    # the sign-flip map appears under two names in scattering relations;
    # both are the same involution
    hat = conjugate
    tilde = conjugate

    def degrees(self) -> np.ndarray:
        return np.array([q.l for q in self.modes])

    def orders(self) -> np.ndarray:
        return np.array([q.m for q in self.modes])

    def reflection_pattern(self) -> np.ndarray:
        """Identity-like coupling matrix for a transparent medium.

        Entry ``(t, p)`` equals ``(-1)**(1+l+m)`` when ``t = (l, -m)`` of
        ``p`` and zero otherwise.  The scattering matrix of empty space is
        exactly this pattern.
        """
        M = len(self.modes)
        out = np.zeros((M, M), dtype=complex)
        for p in self.modes:
            t = self.conjugate(p)
            out[t.p, p.p] = (-1.0) ** (1 + p.l + p.m)
        return out


def truncation_degree(k: float, a: float, c: float) -> int:
    """Largest harmonic degree that meaningfully reaches radius ``a``."""
    ka = k * a
    return max(0, int(math.floor(ka + c * ka ** (1.0 / 3.0))))


def build_mode_set(k: float, a: float, c: float = 3.0) -> ModeSet:
    """Build the port mode set via ``l_max = floor(ka + c (ka)^(1/3))``.

    Parameters
    ----------
    k, a : float
        Wavenumber and circumscribing radius, both > 0.
    c : float
        Truncation constant, ``2 < c < 4``.
    """
    if k <= 0 or a <= 0:
        raise ValueError("k and a must be positive")
    if not 2.0 < c < 4.0:
        raise ValueError(f"truncation constant c={c} outside (2, 4)")
    return ModeSet(l_max=truncation_degree(k, a, c), k=k, a=a, c=c)


def mode_set_from_lmax(l_max: int, k: float, a: float, c: float = 3.0) -> ModeSet:
    """Mode set with an explicit degree cutoff (bypasses the ka rule)."""
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    if k <= 0 or a <= 0:
        raise ValueError("k and a must be positive")
    return ModeSet(l_max=int(l_max), k=k, a=a, c=c)


# ---------------------------------------------------------------------------
# Spherical Bessel / Hankel functions
# ---------------------------------------------------------------------------
def _check_bessel_args(kind: str, l, z) -> None:
    if kind not in ("j", "h1", "h2"):
        raise ValueError(f"unknown kind {kind!r}; expected 'j', 'h1' or 'h2'")
    if np.any(np.asarray(l) < 0):
        raise ValueError("order l must be >= 0")
    z = np.asarray(z)
    if np.any(z < 0):
        raise ValueError("argument z must be >= 0")
    if kind in ("h1", "h2") and np.any(z < _HANKEL_MIN_ARG):
        raise ValueError(f"Hankel functions are singular for z < {_HANKEL_MIN_ARG}")


def sph_bessel(kind: str, l, z):
    """Spherical Bessel/Hankel function ``j_l``, ``h_l^(1)`` or ``h_l^(2)``.

    ``kind`` is one of ``'j'``, ``'h1'``, ``'h2'``; ``l`` and ``z`` broadcast.
    Returns complex values; ``h2 = conj(h1)`` for real arguments.
    """
    _check_bessel_args(kind, l, z)
    l = np.asarray(l)
    z = np.asarray(z, dtype=float)
    if kind == "j":
        return spherical_jn(l, z).astype(complex)
    h = spherical_jn(l, z) + 1j * spherical_yn(l, z)
    return h if kind == "h1" else np.conj(h)


def sph_bessel_zderiv(kind: str, l, z):
    """Derivative with respect to the argument of :func:`sph_bessel`."""
    _check_bessel_args(kind, l, z)
    l = np.asarray(l)
    z = np.asarray(z, dtype=float)
    if kind == "j":
        return spherical_jn(l, z, derivative=True).astype(complex)
    h = spherical_jn(l, z, derivative=True) + 1j * spherical_yn(l, z, derivative=True)
    return h if kind == "h1" else np.conj(h)


def sph_bessel_zderiv2(kind: str, l, z):
    """Second argument-derivative via the defining ODE.

    ``f'' = -(2/z) f' - (1 - l(l+1)/z**2) f``; requires ``z > 0``.
    """
    _check_bessel_args(kind, l, z)
    z = np.asarray(z, dtype=float)
    if np.any(z < _HANKEL_MIN_ARG):
        raise ValueError("second derivative needs z > 0")
    l = np.asarray(l)
    f = sph_bessel(kind, l, z)
    fp = sph_bessel_zderiv(kind, l, z)
    return -2.0 / z * fp - (1.0 - l * (l + 1.0) / z**2) * f


# ---------------------------------------------------------------------------
# Spherical harmonics
# ---------------------------------------------------------------------------
def _legendre_table(l_max: int, x: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Orthonormalized associated Legendre values, shape (l_max+1, l_max+1, *pts).

    ``table[l, m]`` holds ``sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(x)`` for
    ``m >= 0`` (Condon-Shortley phase included); entries with ``m > l`` stay 0.
    ``s = sin(theta) >= 0`` accompanies ``x = cos(theta)``.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    tab = np.zeros((l_max + 1, l_max + 1) + x.shape)
    tab[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, l_max + 1):
        tab[m, m] = -math.sqrt((2 * m + 1.0) / (2.0 * m)) * s * tab[m - 1, m - 1]
    for m in range(0, l_max):
        tab[m + 1, m] = math.sqrt(2 * m + 3.0) * x * tab[m, m]
    for m in range(0, l_max + 1):
        for l in range(m + 2, l_max + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            tab[l, m] = a * (x * tab[l - 1, m] - b * tab[l - 2, m])
    return tab


def _signed_legendre(tab: np.ndarray, l: int, m: int):
    """Extend the m >= 0 table to negative orders: P[l,-m] = (-1)^m P[l,m]."""
    if abs(m) > l:
        return np.zeros_like(tab[0, 0])
    if m >= 0:
        return tab[l, m]
    return (-1.0) ** (-m) * tab[l, -m]


def sph_harm_tables(l_max: int, theta, phi, derivatives: bool = False):
    """Evaluate all harmonics up to ``l_max`` at the given angles.

    Returns ``X`` of shape ``(M, *pts)`` ordered like :class:`ModeSet`.
    With ``derivatives=True`` returns ``(X, dX_dtheta, mX_over_sin)`` where
    the last array is ``m * X / sin(theta)`` (regular at the poles; poles are
    nudged by 1e-9 rad to avoid 0/0).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.where(np.sin(theta) < 1e-12, theta + 1e-9, theta)
    x, s = np.cos(theta), np.sin(theta)
    tab = _legendre_table(l_max, x, s)

    M = (l_max + 1) ** 2
    X = np.empty((M,) + theta.shape, dtype=complex)
    phase = {m: np.exp(1j * m * phi) for m in range(-l_max, l_max + 1)}
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            # (-1)^m times the orthonormal harmonic
            X[_linear_index(l, m)] = (
                (-1.0) ** m * _signed_legendre(tab, l, m) * phase[m]
            )
    if not derivatives:
        return X

    dX = np.empty_like(X)
    mXs = np.empty_like(X)
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            cp = math.sqrt((l - m) * (l + m + 1.0)) if m < l else 0.0
            cm = math.sqrt((l + m) * (l - m + 1.0)) if m > -l else 0.0
            dP = 0.5 * (
                cp * _signed_legendre(tab, l, m + 1)
                - cm * _signed_legendre(tab, l, m - 1)
            )
            q = _linear_index(l, m)
            dX[q] = (-1.0) ** m * dP * phase[m]
            mXs[q] = m * (-1.0) ** m * _signed_legendre(tab, l, m) / s * phase[m]
    return X, dX, mXs


def spherical_harmonic(p: ModeIndex, theta, phi):
    """Single harmonic ``X_p`` at angle(s) ``(theta, phi)``.

    Raises for ``|m| > l``; ``theta`` outside ``[0, pi]`` is rejected.
    """
    if abs(p.m) > p.l:
        raise ValueError(f"|m|={abs(p.m)} exceeds l={p.l}")
    th = np.asarray(theta, dtype=float)
    if np.any(th < -1e-12) or np.any(th > math.pi + 1e-12):
        raise ValueError("theta must lie in [0, pi]")
    X = sph_harm_tables(p.l, theta, phi)
    out = X[_linear_index(p.l, p.m)]
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Reference angular quadrature
# ---------------------------------------------------------------------------
def sphere_quadrature(n_theta: int, n_phi: int | None = None):
    """Product rule on the unit sphere: Gauss-Legendre in cos(theta),
    uniform in phi.

    Exact for spherical polynomials with degree < n_theta in cos(theta) and
    azimuthal order < n_phi.  Returns ``(theta, phi, w)`` as flat arrays with
    ``sum(w) = 4 pi``.
    """
    if n_phi is None:
        n_phi = 2 * n_theta
    xg, wg = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(xg)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.repeat(wg[:, None], n_phi, axis=1) * (2.0 * math.pi / n_phi)
    return T.ravel(), P.ravel(), W.ravel()
