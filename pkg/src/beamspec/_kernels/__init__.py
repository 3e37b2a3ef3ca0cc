"""Kernel backend selection.

The compiled Cython extension is preferred when it was built; the NumPy
implementation is the fallback and the reference.  Set the environment
variable BEAMSPEC_PURE_PYTHON=1 to force the fallback (used by the
backend-comparison benchmark and the equivalence tests).
"""
import os

from . import _chareq_py

BACKEND = "python"
_impl = _chareq_py

if os.environ.get("BEAMSPEC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _chareq_cy as _cy

        _impl = _cy
        BACKEND = "compiled"
    except ImportError:
        pass

char_parts = _impl.char_parts
char_scaled_at = _impl.char_scaled_at
principal_lambda = _impl.principal_lambda

# reference implementation, always available
py_char_parts = _chareq_py.char_parts
py_char_scaled_at = _chareq_py.char_scaled_at


def backend_name() -> str:
    return BACKEND
