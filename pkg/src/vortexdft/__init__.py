"""Numerical spectral toolkit for the linearization of the Gross-Pitaevskii
equation around its degree-1 vortex: generalized eigenfunctions, distorted
Fourier transform, time evolution and the flat-background oracle."""

__version__ = "0.1.0"
