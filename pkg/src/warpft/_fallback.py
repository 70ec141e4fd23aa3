"""Pure numpy versions of the compiled kernels.

Same contract and same summation order as ``_kernels.pyx``: the loop runs
over source nodes left to right and is vectorised across output nodes, with
Neumaier compensation. Results agree with the compiled module to a few ulp
(the only difference is the libm used for cos/sin/exp).
"""
import numpy as np


def _neumaier_add(s, c, term):
    t = s + term
    big = np.abs(s) >= np.abs(term)
    c += np.where(big, (s - t) + term, (term - t) + s)
    return t, c


def oscillatory_sum(src, tgt, coef_re, coef_im, sign, threads=1):
    """out[m] = sum_n coef[n] * exp(1j * sign * src[n] * tgt[m])."""
    src = np.ascontiguousarray(src, dtype=np.float64)
    v = sign * np.ascontiguousarray(tgt, dtype=np.float64)
    s_re = np.zeros_like(v)
    c_re = np.zeros_like(v)
    s_im = np.zeros_like(v)
    c_im = np.zeros_like(v)
    for n in range(src.shape[0]):
        ph = src[n] * v
        cs = np.cos(ph)
        sn = np.sin(ph)
        s_re, c_re = _neumaier_add(s_re, c_re, coef_re[n] * cs - coef_im[n] * sn)
        s_im, c_im = _neumaier_add(s_im, c_im, coef_re[n] * sn + coef_im[n] * cs)
    return (s_re + c_re) + 1j * (s_im + c_im)


def gaussian_sum(src, tgt, coef, inv_two_var, threads=1):
    """out[m] = sum_n coef[n] * exp(-(tgt[m] - src[n])**2 * inv_two_var)."""
    src = np.ascontiguousarray(src, dtype=np.float64)
    tgt = np.ascontiguousarray(tgt, dtype=np.float64)
    s = np.zeros_like(tgt)
    c = np.zeros_like(tgt)
    for n in range(src.shape[0]):
        d = tgt - src[n]
        s, c = _neumaier_add(s, c, coef[n] * np.exp(-(d * d) * inv_two_var))
    return s + c
