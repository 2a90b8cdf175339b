"""Static livelock-freedom analysis for CSP processes."""

__version__ = "0.1.0"
