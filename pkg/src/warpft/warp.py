"""Invertible odd coordinate warps and their canonically conjugate momentum.

A warp ``W`` maps a Cartesian coordinate onto another Cartesian coordinate.
Two families are supported:

``OddPolynomial``
    ``W(x) = a1*x + a2*x**3 + ... + aJ*x**(2J-1)`` with ``a1 > 0`` and all
    other coefficients non-negative, so ``W' >= a1 > 0`` everywhere.
``SignedMonomial``
    ``W(x) = C * sign(x) * |x|**beta`` with ``C, beta > 0``. The signed power
    keeps the map odd and invertible for non-integer ``beta``; for
    ``beta < 1`` the derivative diverges at the origin, for ``beta > 1`` it
    vanishes there.

All evaluation routines accept scalars or numpy arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from warpft.errors import DomainError, SingularityError, UsageError

_EPS = np.finfo(float).eps


def _finite(x, what="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} must be finite")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


class _WarpBase:
    """Shared machinery: inversion and the JSON round trip."""

    def __call__(self, x):
        x = _finite(x)
        return _out(self._eval(x), x)

    def derivative(self, x):
        """Analytic ``dW/dx``."""
        x = _finite(x)
        return _out(self._deriv(x), x)

    def second_derivative(self, x):
        """Analytic ``d2W/dx2``."""
        x = _finite(x)
        return _out(self._deriv2(x), x)

    def invert(self, v, max_iter=200):
        """Return ``x`` with ``W(x) = v``.

        Solves for ``|v|`` on the half line and restores the sign, so the
        inverse is exactly odd. The root is bracketed by doubling an upper
        bound, then refined by Newton steps that fall back to bisection
        whenever a step leaves the bracket. Iteration stops at machine
        resolution in ``x``; the residual then satisfies
        ``|W(x) - v| <= 1e-12 * max(1, |v|)``.
        """
        v = _finite(v, "value")
        target = np.abs(np.atleast_1d(v)).astype(float)
        lo = np.zeros_like(target)
        hi = np.ones_like(target)
        for _ in range(2100):
            short = self._eval(hi) < target
            if not short.any():
                break
            hi = np.where(short, hi * 2.0, hi)
            lo = np.where(short, hi / 2.0, lo)
        x = np.clip(self._guess(target), lo, hi)
        active = target > 0
        x[~active] = 0.0
        for _ in range(max_iter):
            if not active.any():
                break
            f = self._eval(x) - target
            lo = np.where(active & (f < 0), x, lo)
            hi = np.where(active & (f > 0), x, hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = f / self._deriv(np.where(x > 0, x, hi))
                cand = x - step
            bad = ~np.isfinite(cand) | (cand < lo) | (cand > hi)
            cand = np.where(bad, 0.5 * (lo + hi), cand)
            cand = np.where(f == 0, x, cand)
            done = (f == 0) | (np.abs(cand - x) <= 2 * _EPS * np.abs(x)) | (hi - lo <= 2 * _EPS * hi)
            x = np.where(active, cand, x)
            active &= ~done
        out = np.sign(np.atleast_1d(v)) * x
        return float(out[0]) if np.ndim(v) == 0 else out.reshape(np.shape(v))

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class OddPolynomial(_WarpBase):
    """``W(x) = sum_j coeffs[j] * x**(2j+1)`` (0-based ``j``)."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(a) for a in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not c:
            raise UsageError("odd polynomial needs at least one coefficient")
        if not all(np.isfinite(c)):
            raise UsageError("coefficients must be finite")
        if c[0] <= 0 or any(a < 0 for a in c[1:]):
            raise UsageError("need a1 > 0 and a_j >= 0 for an invertible warp")

    @property
    def is_identity(self):
        return self.coeffs[0] == 1.0 and not any(self.coeffs[1:])

    def _eval(self, x):
        # x * P(x^2): the even factor makes W(-x) = -W(x) bit for bit
        x2 = x * x
        acc = np.zeros_like(x) + self.coeffs[-1]
        for a in reversed(self.coeffs[:-1]):
            acc = acc * x2 + a
        return x * acc

    def _deriv(self, x):
        x2 = x * x
        acc = np.zeros_like(x) + (2 * len(self.coeffs) - 1) * self.coeffs[-1]
        for j in range(len(self.coeffs) - 2, -1, -1):
            acc = acc * x2 + (2 * j + 1) * self.coeffs[j]
        return acc

    def _deriv2(self, x):
        out = np.zeros_like(x)
        for j, a in enumerate(self.coeffs[1:], start=1):
            p = 2 * j + 1
            out = out + a * p * (p - 1) * x ** (p - 2)
        return out

    def _guess(self, v):
        return v / self.coeffs[0]

    def to_dict(self):
        return {"kind": "odd_poly", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class SignedMonomial(_WarpBase):
    """``W(x) = scale * sign(x) * |x|**exponent``."""

    scale: float
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "exponent", float(self.exponent))
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise UsageError("monomial scale must be > 0")
        if not (np.isfinite(self.exponent) and self.exponent > 0):
            raise UsageError("monomial exponent must be > 0")

    @property
    def is_identity(self):
        return self.scale == 1.0 and self.exponent == 1.0

    def _eval(self, x):
        return self.scale * np.sign(x) * np.abs(x) ** self.exponent

    def _deriv(self, x):
        b = self.exponent
        if b < 1 and np.any(x == 0):
            raise SingularityError(f"dW/dx diverges at x = 0 for exponent {b}")
        return self.scale * b * np.abs(x) ** (b - 1)

    def _deriv2(self, x):
        b = self.exponent
        if b == 1:
            return np.zeros_like(x)
        if b < 2 and np.any(x == 0):
            raise SingularityError(f"d2W/dx2 diverges at x = 0 for exponent {b}")
        return self.scale * b * (b - 1) * np.sign(x) * np.abs(x) ** (b - 2)

    def _guess(self, v):
        return (v / self.scale) ** (1.0 / self.exponent)

    def to_dict(self):
        return {"kind": "signed_monomial", "scale": self.scale, "exponent": self.exponent}


Warp = Union[OddPolynomial, SignedMonomial]


def identity():
    return OddPolynomial((1.0,))


def warp_from_dict(d):
    """Build a warp from its JSON object form."""
    if not isinstance(d, dict) or "kind" not in d:
        raise UsageError(f"warp spec must be an object with a 'kind' field, got {d!r}")
    kind = d["kind"]
    try:
        if kind == "odd_poly":
            return OddPolynomial(tuple(d["coeffs"]))
        if kind == "signed_monomial":
            return SignedMonomial(d["scale"], d["exponent"])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed {kind} warp: {exc}") from exc
    raise UsageError(f"unknown warp kind {kind!r}")


def warp_from_json(text):
    try:
        return warp_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"warp is not valid JSON: {exc}") from exc


@dataclass(frozen=True)
class PhaseSpacePoint:
    x: float
    p_x: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.p_x)):
            raise DomainError("phase-space point must be finite")


def _positive_slope(w, x):
    d = w.derivative(x)
    if not np.all(np.asarray(d) > 0) or not np.all(np.isfinite(d)):
        raise SingularityError(f"dW/dx is not positive and finite at x = {x}")
    return d


def conjugate_momentum(w, pt):
    """Momentum conjugate to ``W``: ``P_W = p_x / W'(x)``."""
    return pt.p_x / _positive_slope(w, pt.x)


def poisson_bracket(w, pt):
    """Evaluate ``{W, P_W}`` from analytic partial derivatives (ideally 1)."""
    d1 = _positive_slope(w, pt.x)
    dW_dx = d1
    dW_dp = 0.0
    dP_dp = 1.0 / d1
    dP_dx = -pt.p_x * w.second_derivative(pt.x) / (d1 * d1)
    return dW_dx * dP_dp - dW_dp * dP_dx


def apply_pw_operator(w, f):
    """Apply ``-i d/dW`` to a signal sampled on an ``x`` grid.

    Uses the chain rule ``d/dW = (dx/dW) d/dx`` with second-order differences
    (central inside, one-sided at the two ends; non-uniform grids allowed).
    """
    from warpft.signals import SampledSignal

    x = f.nodes
    if x.size < 5:
        raise UsageError("need at least 5 grid nodes to differentiate")
    slope = w.derivative(x)
    if np.any(slope <= 0) or not np.all(np.isfinite(slope)):
        raise SingularityError("dW/dx vanishes or diverges on the grid")
    df = np.gradient(f.samples, x, edge_order=2)
    return SampledSignal(f.coord, x, -1j * df / slope)
