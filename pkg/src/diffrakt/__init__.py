"""Autocorrelation and diffraction of determinantal, permanental, Cox and GAF-zero point processes."""

__version__ = "0.1.0"
