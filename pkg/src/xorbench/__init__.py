"""xorbench: classical vs. quantum variational classifiers on XOR variants.

Subpackages of interest:

- ``xorbench.qsim``      dense statevector simulator (reference path)
- ``xorbench.kernels``   batched two-qubit scoring kernels (numba / numpy)
- ``xorbench.vqc``       variational quantum classifier and training loop
- ``xorbench.classical`` logistic-regression and MLP baselines
- ``xorbench.data``      XOR dataset generators and splits
- ``xorbench.bench``     metrics, grids, sweeps, deviation analysis
- ``xorbench.cli``       command line entry point (``xorbench``)
"""

__version__ = "0.1.0"
