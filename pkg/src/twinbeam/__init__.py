"""Multimode high-gain parametric down-conversion: JSA, Schmidt modes, entropy and photon statistics."""

__version__ = "0.1.0"
