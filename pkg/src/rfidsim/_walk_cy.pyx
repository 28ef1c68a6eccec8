# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prefix-walk kernel.

Twin of rfidsim._walk.walk for tag widths up to 62 bits (node bounds are
held in uint64).  Uses an explicit stack instead of recursion; children are
pushed 1-side first so the 0-side pops first, matching the pure kernel's
depth-first order.
"""

from libc.stdlib cimport free, malloc


def walk(values, int width, int query_overhead_bits, int response_bits):
    """See rfidsim._walk.walk; identical contract and results."""
    cdef Py_ssize_t n = len(values)
    cdef Py_ssize_t i, lo, hi, mid, left, right, sp
    cdef unsigned long long base, mid_value, child_span
    cdef int prefix_len
    cdef unsigned long long queries = 0
    cdef unsigned long long bits = 0
    cdef Py_ssize_t count

    if width < 1 or width > 62:
        raise ValueError("compiled walk kernel supports widths 1..62")

    order = []
    if n == 0:
        # Opening root query hears silence straight away.
        return order, 1, query_overhead_bits

    cdef unsigned long long *vals = <unsigned long long *> malloc(n * sizeof(unsigned long long))
    # Stack: worst case one pending sibling per level plus the active path.
    cdef Py_ssize_t cap = 2 * width + 8
    cdef Py_ssize_t *slo = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef Py_ssize_t *shi = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
    cdef unsigned long long *sbase = <unsigned long long *> malloc(cap * sizeof(unsigned long long))
    cdef int *sdepth = <int *> malloc(cap * sizeof(int))
    if vals == NULL or slo == NULL or shi == NULL or sbase == NULL or sdepth == NULL:
        free(vals); free(slo); free(shi); free(sbase); free(sdepth)
        raise MemoryError()

    try:
        for i in range(n):
            vals[i] = values[i]

        sp = 0
        slo[0] = 0; shi[0] = n; sbase[0] = 0; sdepth[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            lo = slo[sp]; hi = shi[sp]; base = sbase[sp]; prefix_len = sdepth[sp]
            count = hi - lo
            queries += 1
            bits += <unsigned long long> (query_overhead_bits + prefix_len) \
                + <unsigned long long> count * <unsigned long long> response_bits
            if count == 0:
                continue
            if count == 1:
                order.append(vals[lo])
                continue
            child_span = (<unsigned long long> 1) << (width - prefix_len - 1)
            mid_value = base + child_span
            # lower bound of mid_value in vals[lo:hi]
            left = lo; right = hi
            while left < right:
                mid = (left + right) >> 1
                if vals[mid] < mid_value:
                    left = mid + 1
                else:
                    right = mid
            # Push 1-child first so the 0-child is processed first.
            slo[sp] = left; shi[sp] = hi; sbase[sp] = mid_value; sdepth[sp] = prefix_len + 1
            sp += 1
            slo[sp] = lo; shi[sp] = left; sbase[sp] = base; sdepth[sp] = prefix_len + 1
            sp += 1

        # Closing root query hears silence once every tag is acknowledged.
        queries += 1
        bits += query_overhead_bits
    finally:
        free(vals); free(slo); free(shi); free(sbase); free(sdepth)

    return order, queries, bits
