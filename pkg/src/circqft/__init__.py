"""Adiabatic realization of a three-qubit quantum Fourier transform with circulant Hamiltonians."""

__version__ = "0.1.0"
