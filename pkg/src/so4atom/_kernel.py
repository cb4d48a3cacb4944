"""Kernel selection.

The compiled kernel is preferred when present; setting the environment
variable ``SO4ATOM_PURE`` to a nonempty value forces the pure-Python
reference kernel.  Both expose the same module-level API, and the test
suite cross-checks them on random inputs.
"""

import os

if os.environ.get("SO4ATOM_PURE"):
    from so4atom import _kernel_py as impl
else:
    try:
        from so4atom import _kernel_c as impl  # type: ignore[attr-defined]
    except ImportError:
        from so4atom import _kernel_py as impl

KERNEL_NAME = impl.KERNEL_NAME
g_norm = impl.g_norm
g_add = impl.g_add
g_mul = impl.g_mul
g_neg = impl.g_neg
g_inv = impl.g_inv
k_mul = impl.k_mul
k_bump = impl.k_bump
sc_add_raw = impl.sc_add_raw
sc_neg_raw = impl.sc_neg_raw
sc_mul_raw = impl.sc_mul_raw
sc_iadd_scaled = impl.sc_iadd_scaled
spin_mul = impl.spin_mul
spin_word_half = impl.spin_word_half
expr_mul = impl.expr_mul
clear_caches = impl.clear_caches
