"""CSR kernel backend selection.

The hot path of the basis construction is repeated application of sparse
operators to vectors and dense blocks.  A compiled Cython kernel is used when
available; otherwise the numpy fallback in :mod:`crchan._kernels.fallback`
takes over.  Set ``CRCHAN_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and for debugging).
"""

import os

from . import fallback

_impl = fallback
if not os.environ.get("CRCHAN_PURE_PYTHON"):
    try:
        from . import _csr as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = "numpy" if _impl is fallback else "cython"
csr_matvec = _impl.csr_matvec
csr_matmat = _impl.csr_matmat
