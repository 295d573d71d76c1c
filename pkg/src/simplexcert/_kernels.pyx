# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer expansion kernels; see ``_kernels_py`` for the reference."""


def taylor_shift(list coeffs, const long long[::1] ptr, const long long[::1] idx):
    cdef Py_ssize_t g, i, j, k, start, size, top
    cdef list buf
    cdef object c
    for g in range(ptr.shape[0] - 1):
        start = ptr[g]
        size = ptr[g + 1] - start
        if size < 2:
            continue
        buf = [None] * size
        for k in range(size):
            buf[k] = coeffs[idx[start + k]]
        top = size - 1
        while top and not buf[top]:
            top -= 1
        if top == 0:
            continue
        for i in range(top):
            c = buf[top]
            for j in range(top - 1, i - 1, -1):
                c = buf[j] + c
                buf[j] = c
        for k in range(size):
            coeffs[idx[start + k]] = buf[k]


def scale_terms(list coeffs, list weights):
    cdef Py_ssize_t i
    cdef object c
    for i in range(len(coeffs)):
        c = coeffs[i]
        if c:
            coeffs[i] = c * weights[i]


def permute_terms(list coeffs, const long long[::1] target):
    cdef Py_ssize_t i, m = len(coeffs)
    cdef list out = [0] * m
    for i in range(m):
        out[target[i]] = coeffs[i]
    return out


def sign_counts(list coeffs):
    cdef Py_ssize_t pos = 0, neg = 0
    cdef object c
    for c in coeffs:
        if c > 0:
            pos += 1
        elif c < 0:
            neg += 1
    return pos, neg
