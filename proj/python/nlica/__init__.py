"""Identifiable nonlinear ICA: estimators, baselines, metrics, experiments.

The heavy lifting lives in the compiled ``_nlica`` extension; this package
re-exports its surface.
"""

try:
    from nlica._nlica import *  # noqa: F401,F403  (installed layout)
    from nlica._nlica import __doc__ as _core_doc
except ImportError:  # build-tree layout: extension on PYTHONPATH
    from _nlica import *  # noqa: F401,F403
    from _nlica import __doc__ as _core_doc

__version__ = "0.1.0"

__all__ = [
    "Error",
    "generate",
    "linear_ica",
    "pca",
    "darmois",
    "mcc",
    "ks_uniformity",
    "hsic",
    "validate_config",
    "run_experiment",
    "calibrate_experiment",
]
