"""Boundary-element computation of acoustic scattering matrices, their
wavenumber derivatives, and Wigner-Smith time delay matrices for sound-soft
and sound-hard 3D scatterers."""

__version__ = "0.1.0"
