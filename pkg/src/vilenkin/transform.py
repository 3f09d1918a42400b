"""Fast forward/inverse Vilenkin-Chrestenson transforms and group convolution.

Analysis carries the Haar weight,

    fhat(n) = (1/M_L) sum_x f(x) conj(psi_n(x)),

synthesis carries none, and with that normalization the convolution theorem
is (f * g)^ = fhat * ghat exactly.  The fast path reshapes the sample to one
axis per coordinate (digit 0 on the last axis, matching the mixed-radix
layout) and runs a length-m_k DFT along each axis; the mixed-radix butterfly
stages are delegated to numpy's pocketfft, which handles arbitrary axis
lengths.  A naive O(M_L^2) summation path is kept as the oracle and the
benchmark baseline.
"""

from __future__ import annotations

import numpy as np

from .characters import character_table
from .group import GroupStructure
from .sampled import SampledFunction, Spectrum, require_same_structure

__all__ = [
    "convolve",
    "forward",
    "inverse",
    "naive_convolve",
    "naive_forward",
    "naive_inverse",
    "translate",
]


def _axes_shape(structure: GroupStructure) -> tuple[int, ...]:
    # digit 0 varies fastest, so it must land on the last (fastest) C axis
    return tuple(reversed(structure.radices))


def forward(f: SampledFunction) -> Spectrum:
    """Vilenkin-Fourier analysis of a 1-D or 2-D grid sample."""
    structure = f.structure
    shape = _axes_shape(structure)
    n = structure.size
    if f.arity == 1:
        coeffs = np.fft.fftn(f.values.reshape(shape)).reshape(n) / n
    else:
        coeffs = np.fft.fftn(f.values.reshape(shape + shape)).reshape(n, n) / n**2
    return Spectrum(structure, coeffs)


def inverse(spectrum: Spectrum) -> SampledFunction:
    """Synthesis sum_n fhat(n) psi_n(x) (tensor version in 2-D)."""
    structure = spectrum.structure
    shape = _axes_shape(structure)
    n = structure.size
    if spectrum.arity == 1:
        values = np.fft.ifftn(spectrum.coefficients.reshape(shape)).reshape(n) * n
    else:
        values = (
            np.fft.ifftn(spectrum.coefficients.reshape(shape + shape)).reshape(n, n)
            * n**2
        )
    return SampledFunction(structure, values)


def naive_forward(f: SampledFunction) -> Spectrum:
    """Direct O(M_L^2) analysis through the full character table."""
    structure = f.structure
    table = character_table(structure).conj()
    n = structure.size
    if f.arity == 1:
        coeffs = table @ f.values / n
    else:
        coeffs = table @ f.values @ table.T / n**2
    return Spectrum(structure, coeffs)


def naive_inverse(spectrum: Spectrum) -> SampledFunction:
    """Direct synthesis through the full character table."""
    structure = spectrum.structure
    table = character_table(structure)
    if spectrum.arity == 1:
        values = spectrum.coefficients @ table
    else:
        values = table.T @ spectrum.coefficients @ table
    return SampledFunction(structure, values)


def convolve(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """Group convolution (f * g)(x) = integral f(t) g(x - t) dmu(t).

    Computed spectrally: forward, pointwise product, inverse.
    """
    require_same_structure(f, g)
    fs = forward(f).coefficients
    gs = forward(g).coefficients
    return inverse(Spectrum(f.structure, fs * gs))


def naive_convolve(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """Direct summation convolution oracle; O(M_L^2) in 1-D, O(M_L^4) in 2-D."""
    require_same_structure(f, g)
    structure = f.structure
    n = structure.size
    idx = np.arange(n)
    if f.arity == 1:
        out = np.zeros(n, dtype=np.complex128)
        for t in range(n):
            out += f.values[t] * g.values[structure.sub(idx, t)]
        return SampledFunction(structure, out / n)
    out = np.zeros((n, n), dtype=np.complex128)
    sub = np.stack([structure.sub(idx, t) for t in range(n)], axis=1)  # sub[x, t]
    for t in range(n):
        rows = g.values[sub[:, t]]  # rows[x, u'] = g[x - t, u']
        gathered = rows[:, sub]  # gathered[x, y, u] = g[x - t, y - u]
        out += np.tensordot(gathered, f.values[t], axes=([2], [0]))
    return SampledFunction(structure, out / n**2)


def translate(f: SampledFunction, shift) -> SampledFunction:
    """f(x - a) in 1-D, f(x - a, y - b) in 2-D (shift is an index or a pair)."""
    structure = f.structure
    idx = np.arange(structure.size)
    if f.arity == 1:
        return SampledFunction(structure, f.values[structure.sub(idx, int(shift))])
    ax, ay = shift
    return SampledFunction(
        structure,
        f.values[np.ix_(structure.sub(idx, int(ax)), structure.sub(idx, int(ay)))],
    )
