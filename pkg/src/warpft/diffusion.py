"""Normal diffusion in a warped coordinate and its anomalous reading in ``x``.

A density evolving by the heat equation in ``W`` is exactly Gaussian. Read
back in the physical coordinate with the Jacobian (measure ``dW``) it is
still a normalised density; read back without it (the values ``rho(W(x))``
integrated against ``dx``) its second moment grows anomalously, e.g. like
``t**(1/3)`` at late times for ``W = x + x**3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from warpft import _backend
from warpft.errors import DomainError, SingularityError, StepSizeError, UsageError
from warpft.signals import _check_nodes, _read_csv, fmt, trapezoid_weights
from warpft.warp import SignedMonomial

MEASURES = ("dx", "dW")


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """Non-negative samples with an explicit integration measure.

    ``weights`` are the quadrature weights for that measure; they default to
    the trapezoid rule on ``nodes``.
    """

    coord: str
    measure: str
    nodes: np.ndarray
    values: np.ndarray = field(repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.coord not in ("x", "W", "y"):
            raise UsageError(f"unknown density coordinate {self.coord!r}")
        if self.measure not in MEASURES:
            raise UsageError(f"measure must be one of {MEASURES}, not {self.measure!r}")
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        _check_nodes(nodes)
        if values.shape != nodes.shape:
            raise UsageError("value count must equal node count")
        if not np.all(np.isfinite(values)):
            raise DomainError("density values must be finite")
        if np.any(values < -1e-12 * max(1.0, np.abs(values).max())):
            raise DomainError("density values must be non-negative")
        w = trapezoid_weights(nodes) if self.weights is None else np.asarray(self.weights, float)
        if w.shape != nodes.shape:
            raise UsageError("weight count must equal node count")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", w)

    @property
    def mass(self):
        return float(np.sum(self.weights * self.values))

    def moment(self, order):
        m = self.mass
        if m <= 0:
            raise DomainError("profile has zero mass")
        return float(np.sum(self.weights * self.nodes**order * self.values) / m)

    def to_csv(self, path=None):
        text = "coord,value\n" + "".join(f"{fmt(u)},{fmt(r)}\n" for u, r in zip(self.nodes, self.values))
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path, coord="x", measure="dx"):
        rows = _read_csv(path, ["coord", "value"])
        return cls(coord, measure, rows[:, 0], rows[:, 1])


@dataclass(frozen=True)
class OPParams:
    """Parameters of the O'Shaughnessy-Procaccia equation and its monomial warp."""

    D: float
    c: float
    theta: float
    C: float = 1.0

    def __post_init__(self):
        if not self.D > 0:
            raise UsageError("diffusion coefficient must be positive")

    @property
    def beta(self):
        return op_beta(self)

    @property
    def warp(self):
        b = self.beta
        if not b > 0:
            raise UsageError(f"beta = {b} gives no valid warp (need beta > 0)")
        return SignedMonomial(self.C, b)


@dataclass
class MsdSeries:
    times: np.ndarray
    msd: np.ndarray
    local_slopes: np.ndarray

    def to_csv(self, path=None):
        # slope i belongs to the interval [t_i, t_{i+1}]; the last row has none
        lines = ["t,msd,slope"]
        for i, (t, m) in enumerate(zip(self.times, self.msd)):
            s = fmt(self.local_slopes[i]) if i < len(self.local_slopes) else ""
            lines.append(f"{fmt(t)},{fmt(m)},{s}")
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def op_beta(params):
    """``beta = theta/2 - c + 2``."""
    return params.theta / 2.0 - params.c + 2.0


def heat_kernel(dW, D, t):
    """Normalised heat kernel ``exp(-dW^2/(4Dt)) / sqrt(4 pi D t)``."""
    return np.exp(-dW * dW / (4 * D * t)) / math.sqrt(4 * math.pi * D * t)


def heat_propagate(rho0, D, t, nodes=None, threads=1):
    """Convolve a ``dW`` density with the heat kernel at time ``t``.

    ``nodes`` selects the output grid (defaults to the input grid). The
    convolution is a compensated direct sum over the input quadrature nodes.
    """
    if not t > 0:
        raise DomainError("propagation time must be positive")
    if not D > 0:
        raise DomainError("diffusion coefficient must be positive")
    if rho0.measure != "dW" or rho0.coord == "x":
        raise UsageError("heat_propagate expects a profile in W (or y) with measure dW")
    v = np.abs(rho0.values)
    if v.max() > 0 and max(v[0], v[-1]) > 1e-12 * v.max():
        raise DomainError("initial profile does not decay at the grid ends")
    out_nodes = rho0.nodes if nodes is None else np.asarray(nodes, dtype=float)
    var = 2.0 * D * t
    vals = _backend.gaussian_sum(rho0.nodes, out_nodes, rho0.weights * rho0.values, var, threads)
    vals = vals / math.sqrt(2 * math.pi * var)
    return DensityProfile(rho0.coord, "dW", out_nodes, np.maximum(vals, 0.0))


def gaussian_profile(variance, half_width=12.0, count=241, coord="W", center=0.0):
    """Normalised Gaussian sampled on ``center +/- half_width`` standard deviations."""
    s = math.sqrt(variance)
    nodes = center + np.linspace(-half_width * s, half_width * s, count)
    vals = np.exp(-0.5 * (nodes - center) ** 2 / variance) / math.sqrt(2 * math.pi * variance)
    return DensityProfile(coord, "dW", nodes, vals)


def pullback_to_x(rho_W, w, mode):
    """Express a ``W``-density on the physical grid ``x_i = W^{-1}(W_i)``.

    ``mode="dW"``: values ``rho(W(x)) * W'(x)``, a proper density in ``x``.
    ``mode="dx"``: values ``rho(W(x))`` with no Jacobian, integrated against
    ``dx``. This is the anomalous reinterpretation.

    Both results carry the change-of-variables weights ``dW_i / W'(x_i)``, so
    ``x``-integrals are evaluated with the accuracy of the original ``W`` grid.
    """
    if mode not in MEASURES:
        raise UsageError(f"mode must be 'dx' or 'dW', not {mode!r}")
    if rho_W.coord == "x":
        raise UsageError("profile is already in x")
    x = w.invert(rho_W.nodes)
    slope = w.derivative(x)
    if np.any(slope <= 0) or not np.all(np.isfinite(slope)):
        raise SingularityError("dW/dx vanishes or diverges on the pulled-back grid")
    weights = rho_W.weights / slope
    values = rho_W.values * slope if mode == "dW" else rho_W.values.copy()
    return DensityProfile("x", "dx", x, values, weights)


def msd(rho):
    """Second moment ``int x^2 rho / int rho`` under the profile's measure."""
    return rho.moment(2)


def local_slopes(times, values):
    lt, lv = np.log(times), np.log(values)
    return np.diff(lv) / np.diff(lt)


def default_times(lo=1e-3, hi=1e3, per_decade=8):
    decades = math.log10(hi / lo)
    return np.logspace(math.log10(lo), math.log10(hi), int(round(decades * per_decade)) + 1)


def msd_experiment(w, D, times, mode="dx", initial_variance=1e-8, count=2001,
                   half_width=12.0, threads=1, profiles=None):
    """MSD of a narrow Gaussian diffused in ``W`` and read back in ``x``.

    At each time the output ``W`` grid spans ``half_width`` standard
    deviations of the propagated Gaussian. Pass a list as ``profiles`` to
    collect the pulled-back profiles.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2 or np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise UsageError("times must be positive and strictly increasing")
    rho0 = gaussian_profile(initial_variance)
    out = np.empty(times.size)
    for i, t in enumerate(times):
        s = math.sqrt(initial_variance + 2 * D * t)
        nodes = np.linspace(-half_width * s, half_width * s, count)
        rho_x = pullback_to_x(heat_propagate(rho0, D, t, nodes, threads), w, mode)
        if profiles is not None:
            profiles.append(rho_x)
        out[i] = msd(rho_x)
    return MsdSeries(times, out, local_slopes(times, out))


def _face_coefficient(params, y, reading):
    """Squared inverse-Jacobian factor on cell faces for the chosen reading."""
    if reading == "transformed":
        return np.ones_like(y)
    if reading == "inverse_map":
        w = params.warp
        slope = w.derivative(w.invert(y))
        if np.any(slope <= 0):
            raise SingularityError("dx/dy diverges on the grid; shift it off y = 0")
        return 1.0 / slope**2
    raise UsageError(f"reading must be 'transformed' or 'inverse_map', not {reading!r}")


def fd_solve_transformed(params, rho0, t_end, dt, form="flux", reading="transformed",
                         mass_trace=None):
    """Explicit finite differences for the transformed O'Shaughnessy-Procaccia equation.

    ``form="flux"`` discretises ``K d/dy (a^2 d rho/dy)`` with face fluxes
    (zero flux at both ends, so the cell sum is conserved exactly);
    ``form="split"`` discretises ``K a d^2/dy^2 (a rho)`` with reflecting
    ends, conserving the weighted sum ``sum rho/a``. Here ``K = C^2 beta^2 D``
    and ``a = 1/(dW/dy)``.

    ``reading`` fixes ``dW/dy``: ``"transformed"`` differentiates ``W``
    along its own image ``y = W(x)`` so ``a = 1`` and the equation is the
    heat equation with diffusivity ``K``; ``"inverse_map"`` uses
    ``dW/dx`` at ``x = W^{-1}(y)``.

    ``rho0`` must be on a uniform ``y`` grid. When ``mass_trace`` is a list
    the conserved sum is appended after every step.
    """
    y = rho0.nodes
    h = y[1] - y[0]
    if not np.allclose(np.diff(y), h, rtol=1e-9, atol=0):
        raise UsageError("finite differences need a uniform y grid")
    if not (t_end > 0 and dt > 0):
        raise UsageError("t_end and dt must be positive")
    if form not in ("flux", "split"):
        raise UsageError(f"form must be 'flux' or 'split', not {form!r}")
    K = params.C**2 * params.beta**2 * params.D
    if form == "flux":
        coef = _face_coefficient(params, 0.5 * (y[1:] + y[:-1]), reading)
    else:
        coef = np.sqrt(_face_coefficient(params, y, reading))
    limit = 0.4 * h * h / (2 * K * coef.max() ** (1 if form == "flux" else 2))
    n_steps = max(1, math.ceil(t_end / dt - 1e-12))
    step = t_end / n_steps
    if step > limit:
        raise StepSizeError(f"dt = {step:.3g} exceeds the explicit stability limit {limit:.3g}")
    r = K * step / (h * h)
    rho = rho0.values.astype(float).copy()
    peak = np.abs(rho).max()
    for _ in range(n_steps):
        if form == "flux":
            flux = coef * np.diff(rho)
            div = np.empty_like(rho)
            div[0] = flux[0]
            div[-1] = -flux[-1]
            div[1:-1] = flux[1:] - flux[:-1]
            rho = rho + r * div
            conserved = rho.sum()
        else:
            u = coef * rho
            lap = np.empty_like(u)
            lap[1:-1] = u[2:] - 2 * u[1:-1] + u[:-2]
            lap[0] = u[1] - u[0]
            lap[-1] = u[-2] - u[-1]
            rho = rho + r * coef * lap
            conserved = np.sum(rho / coef)
        if mass_trace is not None:
            mass_trace.append(float(conserved))
        if not np.all(np.isfinite(rho)) or np.abs(rho).max() > 1e3 * peak:
            raise StepSizeError("explicit scheme blew up; reduce dt")
    return DensityProfile(rho0.coord, "dW", y, np.maximum(rho, 0.0))
