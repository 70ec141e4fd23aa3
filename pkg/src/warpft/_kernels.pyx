# cython: language_level=3
"""Compiled quadrature kernels.

Each output node is an independent left-to-right Neumaier-compensated sum,
so splitting the output range across threads cannot change any bit of the
result.
"""
import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport cos, exp, fabs, sin

cnp.import_array()


def oscillatory_sum(const double[::1] src, const double[::1] tgt,
                    const double[::1] coef_re, const double[::1] coef_im,
                    double sign, int threads=1):
    """out[m] = sum_n coef[n] * exp(1j * sign * src[n] * tgt[m])."""
    cdef Py_ssize_t n_src = src.shape[0], n_tgt = tgt.shape[0]
    cdef Py_ssize_t m, n
    cdef double v, ph, cs, sn, re, im, s_re, c_re, s_im, c_im, t
    out = np.empty(n_tgt, dtype=np.complex128)
    cdef double[::1] out_re = np.empty(n_tgt)
    cdef double[::1] out_im = np.empty(n_tgt)
    if threads < 1:
        threads = 1
    for m in prange(n_tgt, nogil=True, schedule="static", num_threads=threads):
        v = sign * tgt[m]
        s_re = 0.0
        c_re = 0.0
        s_im = 0.0
        c_im = 0.0
        for n in range(n_src):
            ph = src[n] * v
            cs = cos(ph)
            sn = sin(ph)
            re = coef_re[n] * cs - coef_im[n] * sn
            im = coef_re[n] * sn + coef_im[n] * cs
            t = s_re + re
            if fabs(s_re) >= fabs(re):
                c_re = c_re + ((s_re - t) + re)
            else:
                c_re = c_re + ((re - t) + s_re)
            s_re = t
            t = s_im + im
            if fabs(s_im) >= fabs(im):
                c_im = c_im + ((s_im - t) + im)
            else:
                c_im = c_im + ((im - t) + s_im)
            s_im = t
        out_re[m] = s_re + c_re
        out_im[m] = s_im + c_im
    out.real = np.asarray(out_re)
    out.imag = np.asarray(out_im)
    return out


def gaussian_sum(const double[::1] src, const double[::1] tgt,
                 const double[::1] coef, double inv_two_var, int threads=1):
    """out[m] = sum_n coef[n] * exp(-(tgt[m] - src[n])**2 * inv_two_var)."""
    cdef Py_ssize_t n_src = src.shape[0], n_tgt = tgt.shape[0]
    cdef Py_ssize_t m, n
    cdef double d, term, s, c, t
    cdef double[::1] out = np.empty(n_tgt)
    if threads < 1:
        threads = 1
    for m in prange(n_tgt, nogil=True, schedule="static", num_threads=threads):
        s = 0.0
        c = 0.0
        for n in range(n_src):
            d = tgt[m] - src[n]
            term = coef[n] * exp(-(d * d) * inv_two_var)
            t = s + term
            if fabs(s) >= fabs(term):
                c = c + ((s - t) + term)
            else:
                c = c + ((term - t) + s)
            s = t
        out[m] = s + c
    return np.asarray(out)
