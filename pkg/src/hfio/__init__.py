"""Wave-packet calculus on the cosphere bundle of a periodic grid.

A numerical library and CLI for the dyadic-parabolic frequency decomposition,
the square-function and maximal-function norms built on it, and experiment
drivers that verify the scaling laws those norms obey.
"""

__version__ = "0.1.0"
