# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled partition refinement kernel; same contract as ``_refine_py.refine``."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from libc.string cimport memcpy


cdef inline int _cmp(const long long* keys, const Py_ssize_t* off, int a, int b) noexcept nogil:
    cdef Py_ssize_t ia = off[a]
    cdef Py_ssize_t ib = off[b]
    cdef Py_ssize_t la = off[a + 1] - ia
    cdef Py_ssize_t lb = off[b + 1] - ib
    cdef Py_ssize_t m = la if la < lb else lb
    cdef Py_ssize_t k
    for k in range(m):
        if keys[ia + k] != keys[ib + k]:
            return -1 if keys[ia + k] < keys[ib + k] else 1
    if la != lb:
        return -1 if la < lb else 1
    return 0


cdef void _sort(int* idx, int* tmp, int n, const long long* keys, const Py_ssize_t* off) noexcept nogil:
    # bottom-up stable merge sort of state indices by key
    cdef int width = 1
    cdef int lo, mid, hi, i, j, k
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width if lo + width < n else n
            hi = lo + 2 * width if lo + 2 * width < n else n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if _cmp(keys, off, idx[i], idx[j]) <= 0:
                    tmp[k] = idx[i]
                    i += 1
                else:
                    tmp[k] = idx[j]
                    j += 1
                k += 1
            while i < mid:
                tmp[k] = idx[i]
                i += 1
                k += 1
            while j < hi:
                tmp[k] = idx[j]
                j += 1
                k += 1
            lo += 2 * width
        memcpy(idx, tmp, n * sizeof(int))
        width *= 2


cdef int _round(int n, const int* ptr, const int* dst, const long long* color,
                const int* block, int* new, long long* keys, Py_ssize_t* off,
                int* idx, int* tmp, int* remap) noexcept nogil:
    cdef int q, i, g, count
    cdef Py_ssize_t pos = 0, a, b
    cdef long long code
    for q in range(n):
        off[q] = pos
        keys[pos] = block[q]
        keys[pos + 1] = ptr[q + 1] - ptr[q]
        pos += 2
        for i in range(ptr[q], ptr[q + 1]):
            code = color[i] * n + block[dst[i]]
            # insertion into the sorted tail
            a = pos
            while a > off[q] + 2 and keys[a - 1] > code:
                keys[a] = keys[a - 1]
                a -= 1
            keys[a] = code
            pos += 1
    off[n] = pos
    for q in range(n):
        idx[q] = q
    _sort(idx, tmp, n, keys, off)
    # provisional group ids in sorted order, then renumber by first state
    g = 0
    for i in range(n):
        if i > 0 and _cmp(keys, off, idx[i - 1], idx[i]) != 0:
            g += 1
        tmp[idx[i]] = g
    for i in range(g + 1):
        remap[i] = -1
    count = 0
    for q in range(n):
        if remap[tmp[q]] < 0:
            remap[tmp[q]] = count
            count += 1
        new[q] = remap[tmp[q]]
    return count


def refine(int n, ptr, dst, color, block, max_rounds):
    # at most n - 1 rounds can split, so larger caps behave like n + 1
    cdef int cap = min(max_rounds, n + 1)
    cdef int m = len(dst)
    cdef int* c_ptr = <int*> PyMem_Malloc((n + 1) * sizeof(int))
    cdef int* c_dst = <int*> PyMem_Malloc((m + 1) * sizeof(int))
    cdef long long* c_color = <long long*> PyMem_Malloc((m + 1) * sizeof(long long))
    cdef int* cur = <int*> PyMem_Malloc((n + 1) * sizeof(int))
    cdef int* new = <int*> PyMem_Malloc((n + 1) * sizeof(int))
    cdef long long* keys = <long long*> PyMem_Malloc((2 * n + m + 1) * sizeof(long long))
    cdef Py_ssize_t* off = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef int* idx = <int*> PyMem_Malloc((n + 1) * sizeof(int))
    cdef int* tmp = <int*> PyMem_Malloc((n + 1) * sizeof(int))
    cdef int* remap = <int*> PyMem_Malloc((n + 1) * sizeof(int))
    cdef int q, i, count, new_count, rounds = 0
    cdef bint stable = False
    cdef int* swap
    try:
        if not (c_ptr and c_dst and c_color and cur and new and keys and off and idx and tmp and remap):
            raise MemoryError()
        for q in range(n + 1):
            c_ptr[q] = ptr[q]
        for i in range(m):
            c_dst[i] = dst[i]
            c_color[i] = color[i]
        # canonical renumbering of the seed partition
        for q in range(n):
            remap[q] = -1
        count = 0
        seen = {}
        for q in range(n):
            b = block[q]
            if b not in seen:
                seen[b] = count
                count += 1
            cur[q] = seen[b]
        with nogil:
            while rounds < cap:
                new_count = _round(n, c_ptr, c_dst, c_color, cur, new, keys, off, idx, tmp, remap)
                if new_count == count:
                    stable = True
                    break
                swap = cur
                cur = new
                new = swap
                count = new_count
                rounds += 1
        return [cur[q] for q in range(n)], rounds, stable
    finally:
        PyMem_Free(c_ptr)
        PyMem_Free(c_dst)
        PyMem_Free(c_color)
        PyMem_Free(cur)
        PyMem_Free(new)
        PyMem_Free(keys)
        PyMem_Free(off)
        PyMem_Free(idx)
        PyMem_Free(tmp)
        PyMem_Free(remap)
