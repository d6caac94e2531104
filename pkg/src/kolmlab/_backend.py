"""Selects the interpreter kernel at import time.

The compiled extension is preferred; the pure-Python twin is used when the
extension is unavailable or when KOLMLAB_PURE_PYTHON=1 is set.  Both expose
run_bits / sweep_halting / sweep_monotone_mass with identical behaviour.
"""

import os

from . import _interp_py

if os.environ.get("KOLMLAB_PURE_PYTHON") == "1":
    _impl = _interp_py
else:
    try:
        from . import _interp_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _interp_py

BACKEND = _impl.BACKEND_NAME
run_bits = _impl.run_bits
sweep_halting = _impl.sweep_halting
sweep_monotone_mass = _impl.sweep_monotone_mass

# The per-tape coverage probe is not performance critical and serves as an
# independent route next to the sweep aggregation, so it always comes from
# the reference implementation.
first_cover_consumed = _interp_py.first_cover_consumed
