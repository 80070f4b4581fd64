"""Multi-modal subsea fiber sensing simulator and inverse-processing toolkit.

Simulates the three sensing modalities commonly deployed on telecom fibers
(distributed acoustic sensing, Brillouin reflectometry, state-of-polarization
monitoring) against a shared synthetic strain field, and provides the inverse
processing chains that recover the injected ground truth.
"""

__version__ = "0.1.0"
