# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled computation kernels.

Mirrors zenolink._kernels_py function by function. Both backends must
produce bit-identical IEEE-754 results; the build deliberately avoids
-ffast-math and fused multiply-add contraction. Keep expression order in
sync with the pure-Python file when editing either.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"


def chain_product(double c, double s, double dl, double dr, long n):
    """Entries of R·(D·R)^(n-1) with R = [[c, -s], [s, c]], D = diag(dl, dr)."""
    cdef double k11 = dl * c
    cdef double k12 = dl * (-s)
    cdef double k21 = dr * s
    cdef double k22 = dr * c
    cdef double a11 = c
    cdef double a12 = -s
    cdef double a21 = s
    cdef double a22 = c
    cdef double b11, b12, b21, b22
    cdef long i
    for i in range(n - 1):
        b11 = a11 * k11 + a12 * k21
        b12 = a11 * k12 + a12 * k22
        b21 = a21 * k11 + a22 * k21
        b22 = a21 * k12 + a22 * k22
        a11 = b11
        a12 = b12
        a21 = b21
        a22 = b22
    return a11, a12, a21, a22


def outer_scan(double c, double s, double dl, double dr, long m):
    """Scan of the outer chain: returns (a11, a21, feeds), see the pure version."""
    cdef double k11 = dl * c
    cdef double k12 = dl * (-s)
    cdef double k21 = dr * s
    cdef double k22 = dr * c
    cdef double a11 = c
    cdef double a12 = -s
    cdef double a21 = s
    cdef double a22 = c
    cdef double b11, b12, b21, b22
    cdef long i
    feeds = []
    for i in range(m - 1):
        feeds.append(a21)
        b11 = a11 * k11 + a12 * k21
        b12 = a11 * k12 + a12 * k22
        b21 = a21 * k11 + a22 * k21
        b22 = a21 * k12 + a22 * k22
        a11 = b11
        a12 = b12
        a21 = b21
        a22 = b22
    return a11, a21, feeds


def mat_power(double a11, double a12, double a21, double a22, long k):
    """k-fold product of a 2x2 matrix with itself. k = 0 gives the identity."""
    cdef double r11 = 1.0
    cdef double r12 = 0.0
    cdef double r21 = 0.0
    cdef double r22 = 1.0
    cdef double b11, b12, b21, b22
    cdef long i
    for i in range(k):
        b11 = r11 * a11 + r12 * a21
        b12 = r11 * a12 + r12 * a22
        b21 = r21 * a11 + r22 * a21
        b22 = r21 * a12 + r22 * a22
        r11 = b11
        r12 = b12
        r21 = b21
        r22 = b22
    return r11, r12, r21, r22


def propagate_fold(const long long[:] code, const long long[:] mode_a,
                   const long long[:] mode_b, const double[:] x,
                   const double[:] y, long mode_count, long det_count,
                   double amplitude):
    """Fold an input amplitude through an encoded element sequence.

    Same element encoding and bookkeeping as the pure-Python version.
    Returns (amps, detector_amps, loss_by_group, blocked, entering).
    """
    cdef Py_ssize_t n = code.shape[0]
    cdef Py_ssize_t i
    cdef long op, ia, ib, g
    cdef double c, s, a, b, v
    cdef double blocked = 0.0
    cdef double entering = 0.0
    cdef double loss0 = 0.0
    cdef double loss1 = 0.0
    cdef double loss2 = 0.0
    cdef double* amps = <double*> malloc(mode_count * sizeof(double))
    cdef double* det = <double*> malloc(det_count * sizeof(double))
    if amps == NULL or det == NULL:
        free(amps)
        free(det)
        raise MemoryError()
    try:
        for i in range(mode_count):
            amps[i] = 0.0
        amps[0] = amplitude
        for i in range(det_count):
            det[i] = 0.0
        for i in range(n):
            op = code[i]
            ia = mode_a[i]
            if op == 0:
                ib = mode_b[i]
                c = x[i]
                s = y[i]
                a = amps[ia]
                b = amps[ib]
                amps[ia] = c * a - s * b
                amps[ib] = s * a + c * b
            elif op == 1:
                g = mode_b[i]
                v = amps[ia]
                if g == 2:
                    entering += v * v
                if g == 0:
                    loss0 += x[i] * v * v
                elif g == 1:
                    loss1 += x[i] * v * v
                else:
                    loss2 += x[i] * v * v
                amps[ia] = v * y[i]
            elif op == 2:
                v = amps[ia]
                entering += v * v
                blocked += v * v
                amps[ia] = 0.0
            else:
                v = amps[ia]
                if x[i] != 0.0:
                    entering += v * v
                det[mode_b[i]] += v
                amps[ia] = 0.0
        amps_out = [amps[i] for i in range(mode_count)]
        det_out = [det[i] for i in range(det_count)]
        loss_out = [loss0, loss1, loss2]
    finally:
        free(amps)
        free(det)
    return amps_out, det_out, loss_out, blocked, entering
