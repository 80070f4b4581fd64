"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The compiled extension (``_native``, built from Cython) is preferred; if it
is missing or ``FIBERSENSE_PURE_PYTHON`` is set in the environment, the
numpy implementations are used instead. Both paths are deterministic and
agree to float32 rounding; ``benchmarks/bench_kernels.py`` compares them.
"""

import os

from . import _numpy

if os.environ.get("FIBERSENSE_PURE_PYTHON"):
    impl = _numpy
else:
    try:
        from . import _native as impl
    except ImportError:
        impl = _numpy

HAVE_NATIVE = impl.NAME == "native"

wrap_phase = impl.wrap_phase
unwrap_tile = impl.unwrap_tile
synth_expand_tile = impl.synth_expand_tile
das_phase_tile = impl.das_phase_tile
cascade_states = impl.cascade_states
BandPower = impl.BandPower
