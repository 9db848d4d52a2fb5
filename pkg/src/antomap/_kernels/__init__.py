"""Per-reading update kernels: compiled core with a pure-NumPy fallback.

The compiled extension is picked at import time when it is available; set
ANTOMAP_PURE_PYTHON=1 to force the fallback (the benchmark uses this to time
both implementations, and CI uses it to test the fallback path).
"""

import os

from . import pykernels

try:
    from . import _cykernels as _compiled
except ImportError:
    _compiled = None

_force_pure = os.environ.get("ANTOMAP_PURE_PYTHON", "0") not in ("", "0")
active = pykernels if (_compiled is None or _force_pure) else _compiled

IMPLEMENTATION = "pure" if active is pykernels else "compiled"

antonym_reading = active.antonym_reading
prob_reading = active.prob_reading
fuzzy_reading = active.fuzzy_reading

LOG_ODDS_MAX = pykernels.LOG_ODDS_MAX
