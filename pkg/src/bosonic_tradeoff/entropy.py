"""Thermal-state entropy g(N), its inverse, and von Neumann entropy."""

import math

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError

LN2 = math.log(2.0)

# Eigenvalues within this distance below zero are treated as numerical noise.
PSD_TOL = 1e-10


def _check_photon_number(n):
    arr = np.asarray(n, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"mean photon number must be finite, got {n!r}")
    if np.any(arr < 0):
        raise DomainError(f"mean photon number must be nonnegative, got {n!r}")
    return arr


def g_entropy(n):
    """Entropy in bits of a single-mode thermal state with mean photon number ``n``.

    Uses the rearrangement ``log2(n+1) + n*log2(1 + 1/n)`` so that the two
    large terms of ``(n+1)log2(n+1) - n log2 n`` never get subtracted. Accepts
    scalars or arrays; ``g(0)`` is exactly 0.

    >>> g_entropy(1.0)
    2.0
    """
    arr = _check_photon_number(n)
    out = np.zeros_like(arr)
    pos = arr > 0
    x = arr[pos]
    # n*ln(1 + 1/n): log1p(1/n) overflows for subnormal n, so split at 1.
    small = x < 1.0
    tail = np.empty_like(x)
    xs = x[small]
    tail[small] = xs * (np.log1p(xs) - np.log(xs))
    xl = x[~small]
    tail[~small] = xl * np.log1p(1.0 / xl)
    out[pos] = (np.log1p(x) + tail) / LN2
    if np.ndim(n) == 0:
        return float(out)
    return out


def g_inverse(h, rtol=1e-13):
    """Mean photon number ``n >= 0`` with ``g_entropy(n) == h``.

    g is strictly increasing and ``g(n) >= log2(n+1)``, so the root lies in
    ``[0, 2**h]``; Brent's method on that bracket converges without tuning.
    """
    h = float(h)
    if not math.isfinite(h) or h < 0:
        raise DomainError(f"entropy must be finite and nonnegative, got {h!r}")
    if h == 0.0:
        return 0.0
    if h > 1000:
        raise DomainError(f"entropy {h} exceeds the representable range of g")
    hi = 2.0**h
    return brentq(lambda n: g_entropy(n) - h, 0.0, hi, xtol=1e-300, rtol=rtol, maxiter=500)


def entropy_from_eigenvalues(eigs, clamp=PSD_TOL):
    """Shannon entropy in bits of a spectrum, dropping zero and tiny negative values.

    Raises DomainError if any eigenvalue is more negative than ``-clamp``.
    """
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size and eigs.min() < -clamp:
        raise DomainError(f"density operator is not positive semidefinite (min eigenvalue {eigs.min():.3e})")
    p = eigs[eigs > 0]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho, clamp=PSD_TOL):
    """H(rho) = -Tr(rho log2 rho) via Hermitian eigendecomposition."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    herm = 0.5 * (rho + rho.conj().T)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(herm), clamp=clamp)
