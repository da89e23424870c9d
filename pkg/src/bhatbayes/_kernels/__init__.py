"""Kernel dispatch: compiled extension when available, pure NumPy otherwise.

Set the environment variable ``BHATBAYES_PURE_KERNELS=1`` before import to
force the pure lane (used by the parity tests and the benchmark).  The
selected lane is reported in ``IMPLEMENTATION``.
"""

import os

from . import _pure

if os.environ.get("BHATBAYES_PURE_KERNELS", "").strip() not in ("", "0"):
    _impl = _pure
    IMPLEMENTATION = "pure"
else:
    try:
        from . import _speedups as _impl

        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = _pure
        IMPLEMENTATION = "pure"

LOSS_ONE_MINUS_B = _pure.LOSS_ONE_MINUS_B
LOSS_ONE_MINUS_B_SQUARED = _pure.LOSS_ONE_MINUS_B_SQUARED

risk_at = _impl.risk_at
risk_curve = _impl.risk_curve
discrete_bayes_table = _impl.discrete_bayes_table
discrete_bayes_risk = _impl.discrete_bayes_risk
binomial_pmf = _pure.binomial_pmf
