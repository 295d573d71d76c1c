"""Pure-Python versions of the integer expansion kernels.

Each function mirrors the compiled module ``_kernels`` exactly; the compiled
one is preferred at import time when it is available.
"""


def taylor_shift(coeffs, ptr, idx):
    """In-place substitution x_k -> x_k + x_l on a dense integer form.

    ``idx[ptr[g]:ptr[g+1]]`` lists one slice of monomials that agree outside
    x_k, x_l, ordered by increasing power of x_k. Each slice is a univariate
    polynomial p(t) which is replaced by p(t + 1).
    """
    for g in range(len(ptr) - 1):
        start, stop = ptr[g], ptr[g + 1]
        size = stop - start
        if size < 2:
            continue
        buf = [coeffs[idx[k]] for k in range(start, stop)]
        top = size - 1
        while top and not buf[top]:
            top -= 1
        if not top:
            continue
        for i in range(top):
            for j in range(top - 1, i - 1, -1):
                buf[j] += buf[j + 1]
        for k in range(size):
            coeffs[idx[start + k]] = buf[k]


def scale_terms(coeffs, weights):
    """In-place elementwise product with integer weights."""
    for i in range(len(coeffs)):
        c = coeffs[i]
        if c:
            coeffs[i] = c * weights[i]


def permute_terms(coeffs, target):
    """Return out with out[target[i]] = coeffs[i]."""
    out = [0] * len(coeffs)
    for i in range(len(coeffs)):
        out[target[i]] = coeffs[i]
    return out


def sign_counts(coeffs):
    pos = neg = 0
    for c in coeffs:
        if c > 0:
            pos += 1
        elif c < 0:
            neg += 1
    return pos, neg
