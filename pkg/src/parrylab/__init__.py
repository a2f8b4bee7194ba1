"""Validated numerics for Renyi-Parry dynamics, Parry Upper functions and lenticular Mahler-measure bounds."""
__version__ = "0.1.0"
