"""Dense complex linear algebra for small multipartite systems.

Composite indices follow a single convention everywhere: subsystem 0 is the
most significant digit of the mixed-radix basis index (C-order reshape),
so index i of a system with dims (d0, ..., d_{n-1}) decodes to digits
(b0, ..., b_{n-1}) with b0 varying slowest.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .errors import NumericError
from .kernels.jacobi import jacobi_eigh

# Composite dimensions above this are refused (the toolkit targets small
# verification workloads, not bulk simulation).
DIM_CAP = 256

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10


class EigenDecomposition(NamedTuple):
    values: np.ndarray  # real, descending
    vectors: np.ndarray  # orthonormal columns, vectors[:, k] pairs with values[k]


def _as_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_dims(dims: Iterable[int], total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != total:
        raise ValueError(f"dims {dims} do not multiply to matrix dimension {total}")
    return dims


def _normalize_subset(sel: int | Iterable[int], n: int, name: str) -> tuple[int, ...]:
    if isinstance(sel, (int, np.integer)):
        sel = (int(sel),)
    else:
        sel = tuple(sorted({int(k) for k in sel}))
    if not sel:
        raise ValueError(f"{name} must be nonempty")
    for k in sel:
        if k < 0 or k >= n:
            raise ValueError(f"{name} index {k} out of range for {n} subsystems")
    return sel


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = _as_square(m)
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)
    return float(np.max(np.abs(m - m.conj().T))) <= tol * scale


def kron(a: np.ndarray, b: np.ndarray, dim_cap: int = DIM_CAP) -> np.ndarray:
    """Kronecker product; the left factor occupies the more significant digits."""
    a = _as_square(a)
    b = _as_square(b)
    if a.shape[0] * b.shape[0] > dim_cap:
        raise ValueError(
            f"composite dimension {a.shape[0] * b.shape[0]} exceeds cap {dim_cap}"
        )
    return np.kron(a, b)


def partial_trace(
    rho: np.ndarray, dims: Iterable[int], keep: int | Iterable[int]
) -> np.ndarray:
    """Trace out every subsystem not in `keep`; kept subsystems stay in their
    original relative order."""
    rho = _as_square(rho)
    dims = _check_dims(dims, rho.shape[0])
    n = len(dims)
    keep = _normalize_subset(keep, n, "keep")
    keepset = set(keep)
    t = rho.reshape(dims + dims)
    bra = list(range(n))
    ket = [i if i not in keepset else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, bra + ket, out)
    dk = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(dk, dk)


def partial_transpose(
    rho: np.ndarray, dims: Iterable[int], part: int | Iterable[int]
) -> np.ndarray:
    """Transpose the indices of the selected subsystems only."""
    rho = _as_square(rho)
    dims = _check_dims(dims, rho.shape[0])
    n = len(dims)
    part = _normalize_subset(part, n, "part")
    t = rho.reshape(dims + dims)
    axes = list(range(2 * n))
    for p in part:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    return np.transpose(t, axes).reshape(rho.shape)


def permute_subsystems(
    rho: np.ndarray, dims: Iterable[int], order: Iterable[int]
) -> np.ndarray:
    """Reorder subsystems so that new position k holds old subsystem order[k]."""
    rho = _as_square(rho)
    dims = _check_dims(dims, rho.shape[0])
    n = len(dims)
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of 0..{n - 1}")
    t = rho.reshape(dims + dims)
    axes = list(order) + [n + k for k in order]
    return np.transpose(t, axes).reshape(rho.shape)


def hermitian_eig(m: np.ndarray, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input must be Hermitian within `tol` (relative to its largest entry);
    it is symmetrized before the Jacobi iteration. Raises NumericError if the
    solver does not converge within its sweep budget.
    """
    m = _as_square(m)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    a = (m + m.conj().T) / 2.0
    values, vectors, sweeps = jacobi_eigh(a)
    if sweeps < 0:
        raise NumericError("Jacobi eigensolver did not converge")
    order = np.argsort(-values, kind="stable")
    return EigenDecomposition(values[order], np.ascontiguousarray(vectors[:, order]))


def matrix_sqrt_psd(m: np.ndarray, clamp: float = PSD_CLAMP) -> np.ndarray:
    """PSD square root via eigendecomposition.

    Eigenvalues in [-clamp, 0) are treated as numerical noise and clamped to
    zero; anything below -clamp means the input was not PSD.
    """
    values, vectors = hermitian_eig(m)
    if values.size and values[-1] < -clamp:
        raise NumericError(
            f"matrix has a significantly negative eigenvalue ({values[-1]:.3e})"
        )
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def trace_norm_hermitian(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    values, _ = hermitian_eig(m)
    return float(np.sum(np.abs(values)))
