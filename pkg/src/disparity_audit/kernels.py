"""Backend selection for the numeric kernels.

The compiled extension is used when it was built; otherwise the pure-Python
implementation is loaded. ``BACKEND`` names the one in use.
"""

try:
    from ._ckernels import fisher_two_sided, upper_gamma_q

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._pykernels import fisher_two_sided, upper_gamma_q

    BACKEND = "python"

__all__ = ["BACKEND", "fisher_two_sided", "upper_gamma_q"]
