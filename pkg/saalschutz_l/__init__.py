"""The L function of two Saalschutzian 4F3(1) series and its W(D5) invariance group."""
__version__ = "1.0.1"
