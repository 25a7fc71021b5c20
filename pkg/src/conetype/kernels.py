"""Backend selection for the refinement kernel.

The compiled extension is used when it was built; set ``CONETYPE_PURE_PYTHON=1``
to force the Python fallback.
"""

import os

from ._refine_py import refine as python_refine

try:
    from ._refine import refine as compiled_refine
except ImportError:  # extension not built
    compiled_refine = None

if compiled_refine is not None and os.environ.get("CONETYPE_PURE_PYTHON", "") in ("", "0"):
    refine = compiled_refine
    BACKEND = "cython"
else:
    refine = python_refine
    BACKEND = "python"


def csr(n, edges):
    """CSR arrays from ``(src, dst, color)`` triples over states ``0..n-1``.

    Edge order within each source is preserved.
    """
    buckets = [[] for _ in range(n)]
    for s, t, c in edges:
        buckets[s].append((t, c))
    ptr = [0]
    dst = []
    color = []
    for b in buckets:
        for t, c in b:
            dst.append(t)
            color.append(c)
        ptr.append(len(dst))
    return ptr, dst, color
