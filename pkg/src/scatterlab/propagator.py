"""
Free Schrodinger group e^{it d_xx}, its kernel form, and the leading-term /
remainder split of the dispersive decay estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import fft, ifft, next_fast_len

from .spectral import (
    PHYSICAL,
    SPECTRAL,
    ComplexField,
    fourier_forward,
    fourier_inverse,
    to_physical,
)

_SQRT_2PI = np.sqrt(2.0 * np.pi)
_TWO_PI_LD = np.longdouble("6.283185307179586476925286766559005768")

# direct evaluation below this work estimate, Bluestein above
_DIRECT_WORK_LIMIT = 1 << 18


class FrequencyRangeError(ValueError):
    """Off-grid evaluation points fall outside the resolved frequency band."""


@dataclass(frozen=True)
class LeadingSplit:
    """Exact split e^{it d_xx} phi = leading + remainder at time t."""

    leading: ComplexField
    remainder: ComplexField
    t: float


def free_evolve(field: ComplexField, t: float) -> ComplexField:
    """
    Apply the free group e^{it d_xx}: the spectral multiplier e^{-i t xi^2}.
    Works on either side; the output stays on the input side.
    """
    mult = np.exp(-1j * t * field.grid.xi**2)
    if field.side == SPECTRAL:
        return field.with_samples(field.samples * mult)
    spec = fourier_forward(field)
    return fourier_inverse(spec.with_samples(spec.samples * mult))


def kernel_evolve(field: ComplexField, t: float) -> ComplexField:
    """
    O(N^2) quadrature of the convolution with (4*i*pi*t)^{-1/2} e^{i x^2 / 4t}.
    Independent oracle for free_evolve; not a production path.
    """
    field.require_side(PHYSICAL)
    if t <= 0:
        raise ValueError("kernel_evolve requires t > 0")
    g = field.grid
    if g.N > 512:
        raise ValueError("kernel_evolve is limited to N <= 512")
    diff = g.x[:, None] - g.x[None, :]
    kernel = (4j * np.pi * t) ** (-0.5) * np.exp(1j * diff**2 / (4.0 * t))
    return ComplexField(g, g.dx * (kernel @ field.samples), PHYSICAL)


def _unit_phase(scale: np.longdouble, index: np.ndarray) -> np.ndarray:
    """e^{i * scale * index} with the angle reduced mod 2*pi in extended
    precision; keeps chirp phases accurate for index as large as N^2."""
    angle = np.mod(scale * index.astype(np.longdouble), _TWO_PI_LD)
    return np.exp(1j * angle.astype(np.float64))


def _bluestein(samples: np.ndarray, x0: float, dx: float, xi0: float, dxi: float, m: int) -> np.ndarray:
    """Chirp-transform evaluation of sum_j samples_j e^{-i x_j xi_k} on the
    uniform targets xi_k = xi0 + k*dxi; O((N+m) log(N+m))."""
    n = samples.size
    theta = np.longdouble(dx) * np.longdouble(dxi)
    j = np.arange(n)
    k = np.arange(m)
    b = samples * _unit_phase(-np.longdouble(dx) * np.longdouble(xi0), j)
    p = b * _unit_phase(-theta / 2, j * j)
    span = np.arange(-(n - 1), m)
    q = _unit_phase(theta / 2, span * span)
    size = next_fast_len(n + span.size - 1)
    conv = ifft(fft(p, size) * fft(q, size))[n - 1 : n - 1 + m]
    ray = _unit_phase(-np.longdouble(x0) * np.longdouble(dxi), k) * np.exp(-1j * x0 * xi0)
    return ray * _unit_phase(-theta / 2, k * k) * conv


def spectrum_at(field: ComplexField, targets: np.ndarray, method: str = "auto") -> np.ndarray:
    """
    Evaluate the field's transform at arbitrary frequencies: for a physical
    field this is its normalized Fourier transform; for a spectral field it is
    the band-limited (trigonometric) interpolant of the samples.

    Uniformly spaced targets go through a Bluestein chirp transform when the
    direct sum would be large; both paths compute the identical sum
    (dx/sqrt(2*pi)) * sum_j phi_j e^{-i x_j xi}.
    """
    phys = to_physical(field)
    g = phys.grid
    xi = np.atleast_1d(np.asarray(targets, dtype=float))
    if method not in ("auto", "direct", "czt"):
        raise ValueError("method must be auto, direct or czt")
    use_czt = False
    if method == "czt" or (method == "auto" and xi.size >= 2 and g.N * xi.size > _DIRECT_WORK_LIMIT):
        steps = np.diff(xi)
        if steps.size and np.allclose(steps, steps[0], rtol=1e-12, atol=1e-15 * max(1.0, abs(xi[0]))):
            use_czt = True
        elif method == "czt":
            raise ValueError("czt path requires uniformly spaced targets")
    if use_czt:
        dxi = float(xi[1] - xi[0])
        out = _bluestein(phys.samples, float(g.x[0]), g.dx, float(xi[0]), dxi, xi.size)
    else:
        out = np.empty(xi.size, dtype=np.complex128)
        chunk = max(1, _DIRECT_WORK_LIMIT // g.N)
        for lo in range(0, xi.size, chunk):
            block = xi[lo : lo + chunk]
            out[lo : lo + chunk] = np.exp(-1j * np.outer(block, g.x)) @ phys.samples
    return (g.dx / _SQRT_2PI) * out


def required_points_for_split(L: float, t: float) -> int:
    """Smallest even N whose frequency grid covers the ray points x/(2t)."""
    n = int(np.ceil(L * L / (4.0 * np.pi * t))) + 2
    return n + (n % 2)


def leading_split(field: ComplexField, t: float) -> LeadingSplit:
    """
    Split the freely evolved field into (2it)^{-1/2} e^{i x^2/4t} phihat(x/2t)
    plus a remainder.  The split is exact by construction; the remainder is
    the dispersive correction whose max norm decays faster than t^{-1/2}.
    """
    if t < 1.0:
        raise ValueError("leading_split requires t >= 1")
    phys = to_physical(field)
    g = phys.grid
    targets = g.x / (2.0 * t)
    usable = float(g.xi[-1])  # positive band edge; tighter than the negative one
    needed = float(np.max(np.abs(targets)))
    if needed > usable:
        raise FrequencyRangeError(
            f"evaluation needs |xi| <= {needed:.6g} but the grid resolves only "
            f"{usable:.6g}; enlarge N to >= {required_points_for_split(g.L, t)} "
            f"(or reduce L)"
        )
    hat_vals = spectrum_at(phys, targets)
    prefactor = (2j * t) ** (-0.5)
    lead = prefactor * np.exp(1j * g.x**2 / (4.0 * t)) * hat_vals
    evolved = free_evolve(phys, t)
    remainder = evolved.samples - lead
    return LeadingSplit(
        leading=ComplexField(g, lead, PHYSICAL),
        remainder=ComplexField(g, remainder, PHYSICAL),
        t=t,
    )


def phase_difference_bound_holds(x: float, beta: float) -> bool:
    """
    Check |e^{ix} - 1| = 2|sin(x/2)| against the fractional bound 2|x|^beta
    for |x| <= 1, and against the trivial bound 2 otherwise.
    """
    if not (0.0 < beta < 0.25):
        raise ValueError("beta must lie in (0, 1/4)")
    lhs = abs(np.exp(1j * x) - 1.0)
    if abs(x) <= 1.0:
        return bool(lhs <= 2.0 * abs(x) ** beta)
    return bool(lhs <= 2.0)
