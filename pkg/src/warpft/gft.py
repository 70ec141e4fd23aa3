"""Generalized (warped) and mixed Fourier transforms.

The transform pair between a warped source coordinate ``W(u)`` and a warped
target coordinate ``K(v)`` is

    g(v) = 1/sqrt(2 pi) * integral dW(u) exp(i s W(u) K(v)) f(u)

with phase sign ``s = +1`` or ``-1``; the inverse uses ``-s`` and integrates
over ``dK``. The integral is evaluated by direct trapezoidal quadrature with
an ``O(N*M)`` compensated sum (see ``_backend``). When both warps are the
identity and the grids are commensurate an FFT path is available.

Sampling modes: a signal whose label is the warped name (``W``, ``T``, ...)
is assumed sampled in the warp variable and is integrated with plain
trapezoid weights. A signal with the raw label (``x``, ``t``, ...) is
integrated against ``dW = W'(u) du``. Target grids are interpreted the same
way through ``target_mode``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from warpft import _backend
from warpft.errors import TruncationError, UsageError
from warpft.signals import RAW_NAME, WARPED_NAME, GridSpec, SampledSignal, trapezoid_weights
from warpft.warp import OddPolynomial, identity

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
DECAY_TOL = 1e-12


@dataclass(frozen=True)
class MixedKernelSpec:
    """Kernel ``exp(i*sign*W(u)*K(v)) / sqrt(2 pi)``.

    ``source`` and ``target`` are the raw coordinate names of the two sides
    (``x``/``k`` by default, ``t``/``omega`` for time signals).
    """

    source_warp: object = None
    target_warp: object = None
    sign: int = 1
    source: str = "x"
    target: str = "k"

    def __post_init__(self):
        if self.source_warp is None:
            object.__setattr__(self, "source_warp", identity())
        if self.target_warp is None:
            object.__setattr__(self, "target_warp", identity())
        if self.sign not in (1, -1):
            raise UsageError("kernel sign must be +1 or -1")
        if self.source not in WARPED_NAME or self.target not in WARPED_NAME:
            raise UsageError("source/target must be raw coordinate names")
        if self.source == self.target:
            raise UsageError("source and target coordinates must differ")

    def flipped(self):
        """Spec of the inverse transform (roles swapped, sign negated)."""
        return MixedKernelSpec(self.target_warp, self.source_warp, -self.sign,
                               self.target, self.source)

    @property
    def is_identity(self):
        return _is_identity(self.source_warp) and _is_identity(self.target_warp)


def _is_identity(w):
    return getattr(w, "is_identity", False)


def kernel(spec, u, v):
    """Kernel value at source point ``u`` and target point ``v`` (raw coordinates)."""
    phase = spec.sign * spec.source_warp(u) * spec.target_warp(v)
    return np.exp(1j * phase) * INV_SQRT_2PI


def _source_terms(spec, f):
    """Phase positions and quadrature-weighted samples for the source side."""
    if f.coord == WARPED_NAME[spec.source]:
        return f.nodes, trapezoid_weights(f.nodes) * f.samples
    if f.coord == spec.source:
        w = spec.source_warp
        return w(f.nodes), trapezoid_weights(f.nodes) * w.derivative(f.nodes) * f.samples
    raise UsageError(
        f"signal labelled {f.coord!r} cannot feed a transform from "
        f"{spec.source!r}/{WARPED_NAME[spec.source]!r}")


def _target_positions(spec, grid, target_mode):
    nodes = grid.nodes if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    if target_mode == "warped":
        return nodes, nodes, WARPED_NAME[spec.target]
    if target_mode == "raw":
        return nodes, spec.target_warp(nodes), spec.target
    raise UsageError(f"target_mode must be 'warped' or 'raw', not {target_mode!r}")


def check_decay(f, tol=DECAY_TOL):
    """Raise ``TruncationError`` unless ``|f|`` at both ends is below ``tol * max|f|``."""
    mag = np.abs(f.samples)
    peak = mag.max()
    if peak == 0:
        return
    edge = max(mag[0], mag[-1])
    if edge > tol * peak:
        raise TruncationError(
            f"signal in {f.coord!r} has not decayed at the grid ends "
            f"(edge/peak = {edge / peak:.3g} > {tol:g}); widen the grid")


def forward(spec, f, target, target_mode="warped", method="direct", check=True, threads=1):
    """Transform ``f`` (source side of ``spec``) onto the ``target`` grid.

    Returns a ``SampledSignal`` labelled with the warped target name when
    ``target_mode="warped"`` (grid nodes are ``K`` values) or with the raw
    target name when ``target_mode="raw"`` (grid nodes are ``v``, phases use
    ``K(v)``).
    """
    src_pos, coef = _source_terms(spec, f)
    if check:
        check_decay(f)
    nodes, tgt_pos, label = _target_positions(spec, target, target_mode)
    if method == "fft":
        out = _fft_sum(f, src_pos, coef, tgt_pos, spec)
    elif method == "direct":
        out = _backend.oscillatory_sum(src_pos, tgt_pos, coef, spec.sign, threads)
    else:
        raise UsageError(f"unknown method {method!r}")
    return SampledSignal(label, nodes, out * INV_SQRT_2PI)


def inverse(spec, g, source, source_mode="warped", method="direct", check=True, threads=1):
    """Inverse of ``forward``: conjugated kernel, from the target side back to the source."""
    return forward(spec.flipped(), g, source, target_mode=source_mode,
                   method=method, check=check, threads=threads)


def _fft_sum(f, src_pos, coef, tgt_pos, spec):
    """FFT evaluation of ``sum_n coef[n] exp(i s u_n v_m)`` on commensurate uniform grids.

    With ``u_n = u0 + n h`` and ``v_m = v0 + m d`` the sum factorises when
    ``L = 2 pi / (h d)`` is an integer no smaller than either grid size.
    """
    if not spec.is_identity:
        raise UsageError("the FFT path requires identity warps on both sides")
    u, v = np.asarray(src_pos), np.asarray(tgt_pos)
    h, d = np.diff(u), np.diff(v)
    if not (np.allclose(h, h[0], rtol=1e-12, atol=0) and np.allclose(d, d[0], rtol=1e-12, atol=0)):
        raise UsageError("the FFT path requires uniform grids")
    h, d = (u[-1] - u[0]) / (u.size - 1), (v[-1] - v[0]) / (v.size - 1)
    n_fft = 2 * math.pi / (h * d)
    L = int(round(n_fft))
    if abs(n_fft - L) > 1e-9 * n_fft or L < max(u.size, v.size):
        raise UsageError(
            f"grids are not commensurate: 2*pi/(du*dv) = {n_fft:.12g} must be an "
            f"integer >= {max(u.size, v.size)}")
    s = spec.sign
    n = np.arange(u.size)
    a = coef * np.exp(1j * s * n * h * v[0])
    spectrum = L * np.fft.ifft(a, L) if s > 0 else np.fft.fft(a, L)
    return np.exp(1j * s * u[0] * v) * spectrum[: v.size]


def gaussian_fixed_point_residual(w_src, w_tgt, source_grid=None, target_grid=None,
                                  mode="warped", threads=1):
    """Max deviation of the transform of ``exp(-W**2/2)`` from ``exp(-K**2/2)``.

    ``mode="warped"`` samples uniformly in ``W`` and reads the target grid as
    ``K`` values; ``mode="raw"`` samples uniformly in ``x`` (with the ``dW``
    Jacobian) and evaluates ``K(k)`` on a raw ``k`` grid.
    """
    source_grid = source_grid or GridSpec.from_range(-12.0, 12.0, 1024)
    target_grid = target_grid or GridSpec.from_range(-6.0, 6.0, 256)
    spec = MixedKernelSpec(w_src, w_tgt, +1)
    if mode == "warped":
        f = SampledSignal.from_function("W", source_grid, lambda W: np.exp(-W * W / 2))
    elif mode == "raw":
        f = SampledSignal.from_function("x", source_grid, lambda x: np.exp(-w_src(x) ** 2 / 2))
    else:
        raise UsageError(f"mode must be 'warped' or 'raw', not {mode!r}")
    g = forward(spec, f, target_grid, target_mode=mode, threads=threads)
    K = g.nodes if mode == "warped" else w_tgt(g.nodes)
    return float(np.max(np.abs(g.samples - np.exp(-K * K / 2))))


__all__ = [
    "INV_SQRT_2PI", "MixedKernelSpec", "kernel", "forward", "inverse", "check_decay",
    "gaussian_fixed_point_residual", "OddPolynomial", "RAW_NAME",
]
