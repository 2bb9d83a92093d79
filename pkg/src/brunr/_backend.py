"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``BRUNR_PURE=1`` to force the fallback (used by the benchmark and by the
backend-equivalence tests).
"""

import os

from brunr import _purepy

NAME = "python"
_compiled = None

if not os.environ.get("BRUNR_PURE"):
    try:
        from brunr import _kernels as _compiled

        NAME = "cython"
    except ImportError:
        _compiled = None

# int64 products of two residues must not overflow
_MAX_COMPILED_MODULUS = 2**31


def howell_form(rows, ncols, m, backend=None):
    """Howell-form rows (list of int lists) of the Z/m-span of ``rows``."""
    use = backend or NAME
    if ncols == 0 or len(rows) == 0:
        return []
    if use == "cython" and _compiled is not None and m < _MAX_COMPILED_MODULUS:
        out = _compiled.howell_form(rows, ncols, m)
        return out.tolist()
    if hasattr(rows, "tolist"):
        rows = rows.tolist()
    return _purepy.howell_form(rows, ncols, m)


def decomposable_span(basis, d, p, backend=None):
    use = backend or NAME
    if use == "cython" and _compiled is not None and p < _MAX_COMPILED_MODULUS:
        return _compiled.decomposable_span(basis, d, p)
    return _purepy.decomposable_span(basis, d, p)
