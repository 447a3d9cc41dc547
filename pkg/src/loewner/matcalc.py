"""Hermitian matrix utilities for the operator-order tests.

Everything works on complex ndarrays.  Inputs are symmetrized (Hermitian
part) before eigendecomposition so tiny asymmetries from upstream arithmetic
cannot leak into eigenvalues.  Random objects draw from an explicit
``numpy.random.Generator`` — nothing here touches global state.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SingularBlock, SpectrumOutsideDomain
from .interval import Interval

__all__ = [
    "sym", "apply_fn", "psd_min_eig", "is_psd", "spectral_norm",
    "projection_basis", "complement_basis", "compress", "embed",
    "schur_complement", "haar_unitary", "rand_hermitian",
    "rand_ordered_pair", "rand_projection",
    "matrix_to_json", "matrix_from_json",
]

ENDPOINT_SNAP = 1e-12
EDGE_SHRINK = 1e-6


def sym(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m*)/2."""
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + m.conj().T)


def spectral_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(sym(m))))) if m.size else 0.0


def psd_min_eig(m: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    return float(np.min(np.linalg.eigvalsh(sym(m))))


def is_psd(m: np.ndarray, tol: float = 1e-9) -> bool:
    """PSD up to the relative slack tol * (1 + ||m||)."""
    eigs = np.linalg.eigvalsh(sym(m))
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    return float(np.min(eigs)) >= -tol * (1.0 + scale)


def _snap_into(eigs: np.ndarray, domain: Interval) -> np.ndarray:
    """Snap eigenvalues that overshoot a closed endpoint by <= 1e-12 (rel)."""
    out = eigs.copy()
    if domain.lo_closed and math.isfinite(domain.lo):
        near = (out < domain.lo) & (out >= domain.lo - ENDPOINT_SNAP * (1 + abs(domain.lo)))
        out[near] = domain.lo
    if domain.hi_closed and math.isfinite(domain.hi):
        near = (out > domain.hi) & (out <= domain.hi + ENDPOINT_SNAP * (1 + abs(domain.hi)))
        out[near] = domain.hi
    return out


def apply_fn(fn, h: np.ndarray) -> np.ndarray:
    """f(h) by spectral calculus.  The spectrum must lie in f's domain,
    after the closed-endpoint snap; otherwise SpectrumOutsideDomain."""
    w, v = np.linalg.eigh(sym(h))
    w = _snap_into(w, fn.domain)
    for lam in w:
        if not fn.domain.contains(float(lam)):
            raise SpectrumOutsideDomain(float(lam), fn.domain)
    vals = np.asarray(fn.eval_real(w), dtype=float)
    return sym((v * vals) @ v.conj().T)


# --- projections and blocks -----------------------------------------------------

def projection_basis(p: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal columns spanning range(p) for an orthogonal projection p."""
    p = sym(p)
    if spectral_norm(p @ p - p) > tol * (1.0 + spectral_norm(p)):
        raise ValueError("matrix is not an orthogonal projection")
    w, v = np.linalg.eigh(p)
    cols = v[:, w > 0.5]
    if cols.shape[1] == 0:
        raise ValueError("zero projection has no range basis")
    return cols


def complement_basis(basis: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column span."""
    n, k = basis.shape
    if k >= n:
        raise ValueError("no complement: basis already spans")
    q, _ = np.linalg.qr(np.asarray(basis, dtype=complex), mode="complete")
    # project out the span to be safe against qr column-order surprises
    proj = basis @ basis.conj().T
    resid = q[:, k:] - proj @ q[:, k:]
    q2, _ = np.linalg.qr(resid)
    return q2


def compress(m: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Corner block V* m V of m in the given orthonormal basis."""
    return basis.conj().T @ np.asarray(m, dtype=complex) @ basis


def embed(small: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """V small V*: place a corner block back into the big space."""
    return basis @ np.asarray(small, dtype=complex) @ basis.conj().T


def schur_complement(k: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """a - b c^{-1} b* for the blocks of k split along basis/complement.

    Raises SingularBlock when the complement block c is numerically singular
    (an eigenvalue below 1e-12 * (1 + ||c||) in size).
    """
    k = sym(k)
    comp = complement_basis(basis)
    a = compress(k, basis)
    b = basis.conj().T @ k @ comp
    c = compress(k, comp)
    ce = np.linalg.eigvalsh(sym(c))
    if np.min(np.abs(ce)) < 1e-12 * (1.0 + np.max(np.abs(ce))):
        raise SingularBlock("complement block is numerically singular")
    return sym(a - b @ np.linalg.solve(c, b.conj().T))


# --- random objects ---------------------------------------------------------------

def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR with the standard phase fix."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _spectrum_window(domain: Interval, clip_len: float) -> tuple:
    win = domain.clip(clip_len)
    lo, hi = win.lo, win.hi
    if not win.lo_closed:
        lo = lo + EDGE_SHRINK * (1.0 + abs(lo))
    if not win.hi_closed:
        hi = hi - EDGE_SHRINK * (1.0 + abs(hi))
    if not lo < hi:
        raise ValueError(f"domain {domain} too thin to sample a spectrum")
    return lo, hi


def rand_hermitian(rng: np.random.Generator, n: int, domain: Interval,
                   clip_len: float = 20.0) -> np.ndarray:
    """Random Hermitian matrix with spectrum drawn uniformly from a bounded
    window of the domain (open endpoints shrunk by 1e-6 relative)."""
    lo, hi = _spectrum_window(domain, clip_len)
    eigs = rng.uniform(lo, hi, size=n)
    u = haar_unitary(rng, n)
    return sym((u * eigs) @ u.conj().T)


def rand_ordered_pair(rng: np.random.Generator, n: int, domain: Interval,
                      clip_len: float = 20.0) -> tuple:
    """(h1, h2) with h1 <= h2 and both spectra inside the domain.

    h2 is drawn at random; h1 = h2 - w * vv* with the rank-one weight w
    capped at lambda_min(h2) minus the window floor, which keeps h1's
    spectrum inside by construction (no rejection loop needed).
    """
    lo, hi = _spectrum_window(domain, clip_len)
    h2 = rand_hermitian(rng, n, domain, clip_len)
    lam_min = float(np.min(np.linalg.eigvalsh(h2)))
    head = max(lam_min - lo, 0.0)  # eigh roundoff can put lam_min a hair under lo
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = v / np.linalg.norm(v)
    w = rng.uniform(0.0, 1.0) * head
    h1 = sym(h2 - w * np.outer(v, v.conj()))
    return h1, h2


def rand_projection(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    """Random orthogonal projection of the given rank (Haar-rotated corner)."""
    if not 0 < rank < n:
        raise ValueError(f"rank must be strictly between 0 and {n}")
    u = haar_unitary(rng, n)
    cols = u[:, :rank]
    return sym(cols @ cols.conj().T)


# --- JSON ------------------------------------------------------------------------

def matrix_to_json(m: np.ndarray) -> list:
    """Row-major nested lists of [re, im] pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(e.real), float(e.imag)] for e in row] for row in m]


def matrix_from_json(rows: list) -> np.ndarray:
    return np.array([[complex(e[0], e[1]) for e in row] for row in rows],
                    dtype=complex)
