"""Polynomial-phase chirps and their harmonization by two mixed transforms.

A chirp ``S(t) = exp(i T(t)) exp(-T(t)**2 / 2)`` is harmonic in the warped
time ``T``. Transforming over ``dT`` with kernel ``exp(+i T Omega)`` gives a
Gaussian centred at ``Omega = -1``; transforming that back with
``exp(-i Omega t)`` onto physical time yields ``exp(i t) exp(-t**2/2)``,
whose ordinary spectrum is a Gaussian centred at ``omega = +1``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from warpft import gft
from warpft.errors import TruncationError, UsageError
from warpft.signals import GridSpec, SampledSignal, trapezoid_weights
from warpft.warp import OddPolynomial, identity

DEFAULT_T_GRID = GridSpec.from_range(-8.0, 8.0, 1601)
DEFAULT_OMEGA_BIG_GRID = GridSpec.from_range(-13.0, 11.0, 1024)
DEFAULT_OMEGA_GRID = GridSpec.from_range(-5.0, 7.0, 481)
# coarser grids for the exhaustive search; the misfit of a wrong candidate is
# orders of magnitude above their quadrature error
SEARCH_OMEGA_BIG_GRID = GridSpec.from_range(-13.0, 11.0, 385)
SEARCH_OMEGA_GRID = GridSpec.from_range(-5.0, 7.0, 193)


@dataclass(frozen=True)
class ChirpSpec:
    time_warp: object

    def signal(self, t):
        T = self.time_warp(t)
        return np.exp(1j * T - 0.5 * T * T)


@dataclass
class HarmonizationReport:
    omega_big_peak: float
    omega_peak: float
    harmonic_residual: float
    objective: float
    coeffs: list = field(default_factory=list)

    def to_dict(self):
        return {
            "omega_big_peak": self.omega_big_peak,
            "omega_peak": self.omega_peak,
            "harmonic_residual": self.harmonic_residual,
            "objective": self.objective,
            "coeffs": list(self.coeffs),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), allow_nan=False)


@dataclass
class WarpEstimate:
    coeffs: tuple
    objective: float
    evaluations: int
    grid: list

    def to_dict(self):
        return {
            "coeffs": list(self.coeffs),
            "objective": self.objective,
            "evaluations": self.evaluations,
            "grid": [list(axis) for axis in self.grid],
        }


def harmonic_target(t):
    return np.exp(1j * t - 0.5 * t * t)


def synthesize(spec, t_grid=DEFAULT_T_GRID, sampling="t", check=True):
    """Sample the chirp on ``t_grid``.

    ``sampling="t"`` treats the grid as physical time; ``sampling="T"``
    treats it as warped time, i.e. the samples are ``exp(iT) exp(-T^2/2)``
    at uniform ``T`` (the nodes are the ``T`` values).
    """
    if sampling == "t":
        sig = SampledSignal.from_function("t", t_grid, spec.signal)
    elif sampling == "T":
        sig = SampledSignal.from_function("T", t_grid, harmonic_target)
    else:
        raise UsageError(f"sampling must be 't' or 'T', not {sampling!r}")
    if check:
        gft.check_decay(sig)
    return sig


def spectrum(s_hat, omega_grid=DEFAULT_OMEGA_GRID, check=True, threads=1):
    """Ordinary transform ``(1/sqrt(2 pi)) int dt exp(-i omega t) S(t)``."""
    if s_hat.coord != "t":
        raise UsageError(f"spectrum expects a signal in 't', got {s_hat.coord!r}")
    spec = gft.MixedKernelSpec(identity(), identity(), -1, "t", "omega")
    return gft.forward(spec, s_hat, omega_grid, target_mode="raw", check=check, threads=threads)


def _peak(sig, refine=False):
    mag = np.abs(sig.samples)
    k = int(np.argmax(mag))
    x = sig.nodes[k]
    if refine and 0 < k < mag.size - 1:
        # three-point parabola in log|S|, exact for a Gaussian peak
        with np.errstate(divide="ignore"):
            l0, l1, l2 = np.log(mag[k - 1 : k + 2])
        den = l0 - 2 * l1 + l2
        h0, h1 = x - sig.nodes[k - 1], sig.nodes[k + 1] - x
        if np.isfinite(den) and den < 0 and np.isclose(h0, h1, rtol=1e-9):
            x = x + 0.5 * h0 * (l0 - l2) / den
    return float(x)


def spectral_misfit(spec_omega):
    """L2 distance of a spectrum from the harmonic fixed point ``exp(-(omega-1)^2/2)``."""
    om = spec_omega.nodes
    diff = spec_omega.samples - np.exp(-0.5 * (om - 1.0) ** 2)
    return float(math.sqrt(np.sum(trapezoid_weights(om) * np.abs(diff) ** 2)))


def spectral_spread(spec_omega):
    """Centroid and variance of ``|S(omega)|^2`` (diagnostic only)."""
    p = trapezoid_weights(spec_omega.nodes) * np.abs(spec_omega.samples) ** 2
    m = p.sum()
    c = float((p * spec_omega.nodes).sum() / m)
    return c, float((p * (spec_omega.nodes - c) ** 2).sum() / m)


def harmonize(S, time_warp, omega_warp=None, omega_big_grid=DEFAULT_OMEGA_BIG_GRID,
              t_grid=None, omega_grid=DEFAULT_OMEGA_GRID, omega_mode="warped",
              check=True, threads=1):
    """Run the two-stage mixed transform and report how harmonic the result is.

    Stage 1 integrates over ``dT``: if ``S`` is labelled ``t`` the Jacobian
    ``T'(t) dt`` is applied on the physical grid, if it is labelled ``T`` the
    nodes are taken as ``T`` values. The intermediate spectrum lives on
    ``omega_big_grid`` (``Omega`` values when ``omega_mode="warped"``,
    physical ``omega`` mapped through ``omega_warp`` when ``"raw"``).
    Stage 2 integrates over ``dOmega`` with ``exp(-i Omega t)`` onto ``t_grid``
    (defaults to the input grid when ``S`` is in physical time).

    Returns ``(S_hat, report, S_tilde_Omega, S_tilde_omega)``.
    """
    omega_warp = omega_warp or identity()
    if t_grid is None:
        if S.coord != "t":
            raise UsageError("t_grid is required when S is sampled in warped time")
        t_grid = S.nodes
    stage1 = gft.MixedKernelSpec(time_warp, omega_warp, +1, "t", "omega")
    s_big = gft.forward(stage1, S, omega_big_grid, target_mode=omega_mode,
                        check=check, threads=threads)
    stage2 = gft.MixedKernelSpec(identity(), omega_warp, +1, "t", "omega")
    s_hat = gft.inverse(stage2, s_big, t_grid, source_mode="raw", check=check, threads=threads)
    s_omega = spectrum(s_hat, omega_grid, check=check, threads=threads)

    big_peak = _peak(s_big)
    if omega_mode == "raw":
        big_peak = float(omega_warp(big_peak))
    report = HarmonizationReport(
        omega_big_peak=big_peak,
        omega_peak=_peak(s_omega),
        harmonic_residual=float(np.max(np.abs(s_hat.samples - harmonic_target(s_hat.nodes)))),
        objective=spectral_misfit(s_omega),
        coeffs=list(getattr(time_warp, "coeffs", [])),
    )
    return s_hat, report, s_big, s_omega


def candidate_grid(axes):
    """Valid odd-polynomial coefficient vectors from a product of per-coefficient axes."""
    axes = [sorted({float(a) for a in axis}) for axis in axes]
    if not axes or any(not axis for axis in axes):
        raise UsageError("search space is empty")
    cands = [c for c in itertools.product(*axes) if c[0] > 0 and all(a >= 0 for a in c[1:])]
    if not cands:
        raise UsageError("search space contains no valid warp (need a1 > 0, a_j >= 0)")
    return axes, cands


def score_candidate(S, coeffs, omega_big_grid=DEFAULT_OMEGA_BIG_GRID,
                    omega_grid=DEFAULT_OMEGA_GRID, threads=1):
    """Objective for one trial warp: spectral misfit after harmonization (lower is better)."""
    _, report, _, _ = harmonize(S, OddPolynomial(coeffs), omega_big_grid=omega_big_grid,
                                omega_grid=omega_grid, check=False, threads=threads)
    obj = report.objective
    return obj if np.isfinite(obj) else math.inf


def estimate_warp(S, axes, omega_big_grid=SEARCH_OMEGA_BIG_GRID,
                  omega_grid=SEARCH_OMEGA_GRID, seed=None, threads=1):
    """Exhaustive search for the time warp that harmonizes ``S``.

    Every candidate on the product grid is harmonized and scored; the
    minimum objective wins, ties going to the lexicographically smallest
    coefficient vector. ``seed`` only shuffles the evaluation order.
    """
    if S.coord != "t":
        raise UsageError("warp estimation needs a signal sampled in physical time 't'")
    gft.check_decay(S)
    axes, cands = candidate_grid(axes)
    order = list(range(len(cands)))
    if seed is not None:
        np.random.default_rng(seed).shuffle(order)
    scored = []
    for i in order:
        scored.append((score_candidate(S, cands[i], omega_big_grid, omega_grid, threads), cands[i]))
    best_obj, best = min(scored)
    return WarpEstimate(tuple(best), float(best_obj), len(scored), axes)


__all__ = [
    "ChirpSpec", "HarmonizationReport", "WarpEstimate", "synthesize", "harmonize",
    "spectrum", "estimate_warp", "score_candidate", "spectral_misfit", "harmonic_target",
    "TruncationError",
]
