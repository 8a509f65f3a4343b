# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: compensated summation and batched
Gauss-Kronrod 7/15 panel evaluation.

Mirrors the contracts of ``kspaces._kernels_py``.
"""

from libc.math cimport fabs, fmax, fmin, pow

cdef double _EPS = 2.220446049250313e-16

cdef double[15] _WGK
_WGK[0] = 0.022935322010529224963732008058970
_WGK[1] = 0.063092092629978553290700663189204
_WGK[2] = 0.104790010322250183839876322541518
_WGK[3] = 0.140653259715525918745189590510238
_WGK[4] = 0.169004726639267902826583426598550
_WGK[5] = 0.190350578064785409913256402421014
_WGK[6] = 0.204432940075298892414161999234649
_WGK[7] = 0.209482141084727828012999174891714
_WGK[8] = _WGK[6]
_WGK[9] = _WGK[5]
_WGK[10] = _WGK[4]
_WGK[11] = _WGK[3]
_WGK[12] = _WGK[2]
_WGK[13] = _WGK[1]
_WGK[14] = _WGK[0]

cdef double[7] _WG7
_WG7[0] = 0.129484966168869693270611432679082
_WG7[1] = 0.279705391489276667901467771423780
_WG7[2] = 0.381830050505118944950369775488975
_WG7[3] = 0.417959183673469387755102040816327
_WG7[4] = _WG7[2]
_WG7[5] = _WG7[1]
_WG7[6] = _WG7[0]


def neumaier_sum(double[::1] values):
    """Neumaier-compensated sum of a contiguous float64 array."""
    cdef double s = 0.0, c = 0.0, t, v
    cdef Py_ssize_t i, n = values.shape[0]
    for i in range(n):
        v = values[i]
        t = s + v
        if fabs(s) >= fabs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def gk15_batch_into(double[:, ::1] fvals, double[::1] halfwidths,
                    double[::1] out_values, double[::1] out_errors):
    """Gauss-Kronrod 7/15 values and error estimates for a panel batch.

    ``fvals`` is (m, 15) with nodes ascending; the Gauss subset sits on the
    odd node indices.  Writes into preallocated ``out_values``/``out_errors``.
    """
    cdef Py_ssize_t i, j, m = fvals.shape[0]
    cdef double resk, resg, resabs, resasc, reskh, ah, err, sasc, f
    for i in range(m):
        resk = 0.0
        resg = 0.0
        resabs = 0.0
        for j in range(15):
            f = fvals[i, j]
            resk += _WGK[j] * f
            resabs += _WGK[j] * fabs(f)
        for j in range(7):
            resg += _WG7[j] * fvals[i, 2 * j + 1]
        reskh = 0.5 * resk
        resasc = 0.0
        for j in range(15):
            resasc += _WGK[j] * fabs(fvals[i, j] - reskh)
        ah = fabs(halfwidths[i])
        out_values[i] = resk * halfwidths[i]
        err = fabs(resk - resg) * ah
        sasc = resasc * ah
        if sasc != 0.0 and err != 0.0:
            err = sasc * fmin(1.0, pow(200.0 * err / sasc, 1.5))
        err = fmax(err, 50.0 * _EPS * resabs * ah)
        out_errors[i] = err
