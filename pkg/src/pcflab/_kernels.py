"""Pick the kernel implementation at import time.

The GMP extension is used when it was built; PCFLAB_PURE_PYTHON=1 forces the
pure-Python kernels (handy for cross-checking and benchmarking).
"""
import os

from . import _pykernels as python_kernels

c_kernels = None
if os.environ.get("PCFLAB_PURE_PYTHON", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _ckernels as c_kernels
    except ImportError:
        c_kernels = None

_impl = c_kernels if c_kernels is not None else python_kernels
BACKEND = "gmp" if c_kernels is not None else "python"

# The plain recursion is multiply-by-small-int work where CPython is already
# fast; exporting every GMP value back to a Python int costs more than it saves.
convergents_raw = python_kernels.convergents_raw
gcd_sequences = _impl.gcd_sequences
log_gcd_profile = _impl.log_gcd_profile
valuation = _impl.valuation
valuation_table = _impl.valuation_table
reduced_run = _impl.reduced_run
