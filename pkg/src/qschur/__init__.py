"""Exact computation in the convolution algebra of n-step flags over finite
fields (the q-Schur algebra), its RTT generators, triangular decomposition,
and the stabilized limit algebra."""

__version__ = "0.1.0"
