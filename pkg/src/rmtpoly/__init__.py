"""Averages of characteristic polynomials in Gaussian random-matrix ensembles.

Modules: specfun (special functions), hiz (heat-kernel series), exactfn
(finite-N exact averages), ensembles (sampling and Monte Carlo), kernels
(scaling-limit correlations), spacing (gap probabilities), source (Pastur
equation) and cli.
"""

__version__ = "0.1.0"
