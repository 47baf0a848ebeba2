"""Scalar wave optics for the simulation: Fresnel transport, hologram
generation and reconstruction, 4f spatial-filter readout, and SSIM scoring.

Propagation uses the paraxial transfer function exp(-i*pi*lambda*z*(fx^2+fy^2))
between identical grids; the constant exp(i*k*z) phase is dropped throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.ndimage import map_coordinates
from scipy.signal import fftconvolve

from .rng import stream_u64
from .superpixel import BLOCK, DEFAULT_ASSIGNMENT, PhaseAssignment


class AliasingGuardWarning(UserWarning):
    """Propagation distance exceeds the alias-free range of the grid."""


@dataclass(frozen=True)
class PropagationParams:
    """Free-space transport configuration.

    Parameters
    ----------
    wavelength : float
        Illumination wavelength in meters.
    distance : float
        Signed propagation distance in meters; negative values propagate
        backwards.
    pitch : float
        Sample pitch of the propagated grid in meters.  When the field
        drives a superpixel array this is the superpixel pitch, i.e. four
        mirror pitches.
    """

    wavelength: float
    distance: float
    pitch: float

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.pitch <= 0:
            raise ValueError("pitch must be positive")

    def alias_free_distance(self, samples: int) -> float:
        return samples * self.pitch ** 2 / self.wavelength


def fresnel_propagate(field: np.ndarray, params: PropagationParams) -> np.ndarray:
    """Propagate a sampled complex field by the transfer-function method."""
    f = np.asarray(field, dtype=np.complex128)
    if f.ndim != 2 or f.size == 0:
        raise ValueError("field must be a non-empty 2-D array")
    ny, nx = f.shape
    for n in (ny, nx):
        if abs(params.distance) > params.alias_free_distance(n):
            warnings.warn(
                f"|z| = {abs(params.distance):g} m exceeds the alias-free range "
                f"{params.alias_free_distance(n):g} m of a {n}-sample axis",
                AliasingGuardWarning,
                stacklevel=2,
            )
    fx = np.fft.fftfreq(nx, d=params.pitch)
    fy = np.fft.fftfreq(ny, d=params.pitch)
    transfer = np.exp(
        -1j * np.pi * params.wavelength * params.distance
        * (fx[None, :] ** 2 + fy[:, None] ** 2)
    )
    return np.fft.ifft2(np.fft.fft2(f) * transfer)


def resample_bilinear(array: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Resize onto `shape` preserving aspect ratio; uncovered rows/columns
    stay zero (letterboxing).  Complex input is interpolated per component."""
    a = np.asarray(array)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("array must be a non-empty 2-D array")
    h_out, w_out = shape
    h_in, w_in = a.shape
    scale = min(h_out / h_in, w_out / w_in)
    h_fit = max(1, round(h_in * scale))
    w_fit = max(1, round(w_in * scale))
    y0 = (h_out - h_fit) // 2
    x0 = (w_out - w_fit) // 2

    yy = (np.arange(h_fit) + 0.5) * (h_in / h_fit) - 0.5
    xx = (np.arange(w_fit) + 0.5) * (w_in / w_fit) - 0.5
    coords = np.meshgrid(yy, xx, indexing="ij")

    def interp(component):
        return map_coordinates(component, coords, order=1, mode="constant", cval=0.0)

    if np.iscomplexobj(a):
        fitted = interp(a.real) + 1j * interp(a.imag)
        out = np.zeros(shape, dtype=np.complex128)
    else:
        fitted = interp(a.astype(np.float64))
        out = np.zeros(shape, dtype=np.float64)
    out[y0:y0 + h_fit, x0:x0 + w_fit] = fitted
    return out


def generate_hologram(obj: np.ndarray, params: PropagationParams,
                      shape: tuple[int, int], diffuser_seed: int | None = 0) -> np.ndarray:
    """Fresnel hologram of an amplitude image on a superpixel grid.

    The object is scaled to unit peak amplitude, optionally roughened by a
    keyed uniform random phase (diffuser_seed None disables it), letterboxed
    onto `shape`, and propagated by params.distance.
    """
    a = np.asarray(obj, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("object must be a non-empty 2-D array")
    if not np.all(np.isfinite(a)) or a.min() < 0:
        raise ValueError("object amplitudes must be finite and non-negative")
    peak = a.max()
    amp = a / peak if peak > 0 else a
    if diffuser_seed is not None:
        u = stream_u64(diffuser_seed, amp.size).reshape(amp.shape).astype(np.float64) / 2.0 ** 64
        field = amp * np.exp(2j * np.pi * u)
    else:
        field = amp.astype(np.complex128)
    return fresnel_propagate(resample_bilinear(field, shape), params)


def reconstruct(field: np.ndarray, params: PropagationParams) -> np.ndarray:
    """Back-propagate a hologram field and return the 8-bit modulus image."""
    back = fresnel_propagate(field, replace(params, distance=-params.distance))
    amp = np.abs(back)
    peak = amp.max()
    if peak == 0.0:
        return np.zeros(amp.shape, dtype=np.uint8)
    return np.clip(np.rint(amp * (255.0 / peak)), 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class ApertureSpec:
    """Circular passband of the 4f filter in cycles per mirror.

    The default center sits on the phase gradient of the default assignment.
    The block phase mask is not a pure carrier, so its energy spreads over
    every quarter-cycle harmonic; the default radius is wide enough to pass
    them all, which keeps the per-block readout faithful (correlation with
    the ideal block values above 0.99 for random patterns).  Narrow radii
    such as 1/16 isolate a single harmonic and lose most of the block
    information to ringing.
    """

    center: tuple[float, float] = (1.0 / 16.0, 1.0 / 4.0)
    radius: float = 0.45

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("aperture radius must be positive")


def _block_mask(assignment: PhaseAssignment) -> np.ndarray:
    return np.exp(1j * assignment.block_phases)


def simulate_4f(mirrors: np.ndarray, aperture: ApertureSpec | None = None,
                assignment: PhaseAssignment | None = None) -> np.ndarray:
    """Band-filtered readout of a mirror array, one complex value per superpixel.

    The binary mirrors are Fourier filtered through the circular aperture,
    demodulated against the conjugate of the periodic block phase mask, and
    averaged over each 4x4 block.  Up to a global complex constant the
    result tracks the codebook values of the blocks; the aperture bandwidth
    sets how much neighbouring blocks ring into each other.
    """
    assignment = assignment or DEFAULT_ASSIGNMENT
    aperture = aperture or ApertureSpec()
    m = np.asarray(mirrors)
    if m.ndim != 2 or m.shape[0] % BLOCK or m.shape[1] % BLOCK:
        raise ValueError("mirror array must be 2-D with multiples-of-4 dimensions")
    b = (m != 0).astype(np.float64)
    ny, nx = b.shape

    fx = np.fft.fftfreq(nx)
    fy = np.fft.fftfreq(ny)
    cx, cy = aperture.center
    # shortest wrapped distance on the frequency torus
    dx = (fx - cx + 0.5) % 1.0 - 0.5
    dy = (fy - cy + 0.5) % 1.0 - 0.5
    passband = dx[None, :] ** 2 + dy[:, None] ** 2 <= aperture.radius ** 2
    filtered = np.fft.ifft2(np.fft.fft2(b) * passband)

    tiles = np.tile(_block_mask(assignment), (ny // BLOCK, nx // BLOCK))
    # The filtered sideband of a real pattern carries conjugated block
    # phases; conjugating it before applying the mask recovers them.
    demod = np.conj(filtered) * tiles
    return demod.reshape(ny // BLOCK, BLOCK, nx // BLOCK, BLOCK).mean(axis=(1, 3))


def field_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """|<a, b>| / (||a|| ||b||) over flattened complex arrays; 0 if either is null."""
    x = np.asarray(a, dtype=np.complex128).ravel()
    y = np.asarray(b, dtype=np.complex128).ravel()
    if x.shape != y.shape:
        raise ValueError("arrays must have matching shapes")
    na = np.linalg.norm(x)
    nb = np.linalg.norm(y)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(abs(np.vdot(x, y)) / (na * nb))


def _gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords ** 2) / (2.0 * sigma ** 2))
    window = np.outer(g, g)
    return window / window.sum()


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean structural similarity over valid 11x11 Gaussian windows.

    Gaussian window sigma 1.5, stabilizers K1 = 0.01 and K2 = 0.03 on a
    dynamic range of 255.  Only fully interior window positions contribute;
    no padding is invented at the borders.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("images must have matching shapes")
    if x.ndim != 2 or min(x.shape) < 11:
        raise ValueError("images must be 2-D and at least 11x11")
    c1 = (0.01 * 255.0) ** 2
    c2 = (0.03 * 255.0) ** 2
    w = _gaussian_window()

    mu_x = fftconvolve(x, w, mode="valid")
    mu_y = fftconvolve(y, w, mode="valid")
    xx = fftconvolve(x * x, w, mode="valid")
    yy = fftconvolve(y * y, w, mode="valid")
    xy = fftconvolve(x * y, w, mode="valid")
    var_x = xx - mu_x * mu_x
    var_y = yy - mu_y * mu_y
    cov = xy - mu_x * mu_y

    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x ** 2 + mu_y ** 2 + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))
