"""Path checking for TPTL, MTL and FreezeLTL over data words."""

__version__ = "0.1.0"
