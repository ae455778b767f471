# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: polygon rasterization and masked green summation.

Mirrors fallback.py exactly: same crossing formula, same evaluation order,
same half-open pixel-center quantization. Results are bit-identical to the
pure-Python backend.
"""
from libc.math cimport ceil
from libc.stdlib cimport free, malloc


def polygon_runs(xs, ys, int width, int height):
    cdef Py_ssize_t n = len(xs)
    if n != len(ys):
        raise ValueError("xs and ys must have the same length")
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")

    cdef double* vx = <double*> malloc(2 * n * sizeof(double))
    if vx == NULL:
        raise MemoryError()
    cdef double* vy = vx + n
    cdef double* cross = <double*> malloc(n * sizeof(double))
    if cross == NULL:
        free(vx)
        raise MemoryError()

    cdef Py_ssize_t i, j, k, m
    cdef int row
    cdef double y, x1, y1, x2, y2, t, c0d, c1d
    runs = []
    try:
        for i in range(n):
            vx[i] = xs[i]
            vy[i] = ys[i]
        for row in range(height):
            y = row + 0.5
            m = 0
            for i in range(n):
                x1 = vx[i]
                y1 = vy[i]
                j = i + 1 if i + 1 < n else 0
                x2 = vx[j]
                y2 = vy[j]
                if (y1 <= y < y2) or (y2 <= y < y1):
                    cross[m] = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
                    m += 1
            # insertion sort; crossing counts are tiny (<= vertex count)
            for i in range(1, m):
                t = cross[i]
                j = i
                while j > 0 and cross[j - 1] > t:
                    cross[j] = cross[j - 1]
                    j -= 1
                cross[j] = t
            for k in range(0, m - 1, 2):
                c0d = ceil(cross[k] - 0.5)
                c1d = ceil(cross[k + 1] - 0.5)
                if c0d < 0:
                    c0d = 0
                if c1d > width:
                    c1d = width
                if c0d < c1d:
                    runs.append((row, <int> c0d, <int> c1d))
    finally:
        free(cross)
        free(vx)
    return runs


def masked_green_sum(const unsigned char[::1] rgb, int width, runs):
    cdef Py_ssize_t m = len(runs)
    cdef long long* rr = <long long*> malloc(3 * m * sizeof(long long))
    if rr == NULL:
        raise MemoryError()
    cdef long long* cc0 = rr + m
    cdef long long* cc1 = rr + 2 * m

    cdef Py_ssize_t i
    cdef long long base, c, span
    cdef unsigned long long total = 0
    try:
        for i in range(m):
            rr[i] = runs[i][0]
            cc0[i] = runs[i][1]
            cc1[i] = runs[i][2]
        with nogil:
            for i in range(m):
                base = (rr[i] * width + cc0[i]) * 3 + 1
                span = cc1[i] - cc0[i]
                for c in range(span):
                    total += rgb[base + 3 * c]
    finally:
        free(rr)
    return total
