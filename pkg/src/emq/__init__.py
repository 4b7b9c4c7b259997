"""Coefficients of Eilenberg-MacLane spectra for the group of order two."""

__version__ = "0.1.0"
