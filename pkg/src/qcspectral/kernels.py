"""Select the compiled kernels when built, the numpy fallback otherwise.

Set ``QCSPECTRAL_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("QCSPECTRAL_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import constraint, energy_grad, mass_grad, quad_values  # noqa: F401
else:
    try:
        from ._kernels import constraint, energy_grad, mass_grad, quad_values  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import constraint, energy_grad, mass_grad, quad_values  # noqa: F401
