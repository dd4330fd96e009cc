"""Multipartite pure states and density operators: construction, sampling,
two-party reductions, and JSON (de)serialization.

Random sampling uses the counter-based Philox generator so that a 64-bit
seed plus a stream index reproduces the same draw on any platform; sweeps
partition work by stream without shared state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import StateFormatError
from .tensor import (
    DIM_CAP,
    hermitian_eig,
    is_hermitian,
    partial_trace,
    permute_subsystems,
)

_MASK64 = (1 << 64) - 1

NORM_TOL = 1e-10
LOAD_NORM_TOL = 1e-6


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream)."""
    return np.random.Generator(
        np.random.Philox(key=[int(seed) & _MASK64, int(stream) & _MASK64])
    )


def _check_dim_list(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) > DIM_CAP:
        raise ValueError(f"total dimension {int(np.prod(dims))} exceeds cap {DIM_CAP}")
    return dims


@dataclass(frozen=True)
class MultipartiteState:
    """Normalized pure state: amplitude vector plus subsystem dimensions."""

    dims: tuple[int, ...]
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = _check_dim_list(self.dims)
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise ValueError(
                f"amplitude count {amps.size} does not match dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def projector(self) -> "DensityOperator":
        return DensityOperator(self.dims, np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one Hermitian operator plus subsystem dimensions.

    Hermiticity and trace are checked on construction; the eigenvalue
    (positivity) check is deferred to `validate` since reductions of valid
    states are positive by construction.
    """

    dims: tuple[int, ...]
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = _check_dim_list(self.dims)
        mat = np.asarray(self.mat, dtype=np.complex128)
        d = int(np.prod(dims))
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not is_hermitian(mat):
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def validate(self, clamp: float = 1e-8) -> None:
        values, _ = hermitian_eig(self.mat)
        if values.size and values[-1] < -clamp:
            raise StateFormatError(
                f"density matrix has negative eigenvalue {values[-1]:.3e}"
            )


@dataclass(frozen=True)
class PairReductions:
    """Two-party reductions rho_{A,B_j} of a state, focus subsystem first."""

    focus: int
    others: tuple[int, ...]
    pairs: tuple[DensityOperator, ...]


def w_state(n: int) -> MultipartiteState:
    """Equal single-excitation superposition on n qubits."""
    if n < 2:
        raise ValueError("w_state needs at least 2 qubits")
    dims = (2,) * n
    amps = np.zeros(2**n, dtype=np.complex128)
    for k in range(n):
        amps[1 << (n - 1 - k)] = 1.0 / np.sqrt(n)
    return MultipartiteState(dims, amps)


def ghz_state(n: int) -> MultipartiteState:
    if n < 2:
        raise ValueError("ghz_state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2)
    return MultipartiteState((2,) * n, amps)


def ou_state() -> MultipartiteState:
    """The bundled qutrit-qubit-qubit example state on dims 3x2x2.

    Amplitudes (sqrt2, sqrt2, 1, 1)/sqrt6 on the basis kets |100>, |101>,
    |200>, |211> (subsystem 0 most significant).
    """
    dims = (3, 2, 2)
    amps = np.zeros(12, dtype=np.complex128)
    s2 = np.sqrt(2.0)
    for (a, b, c), w in [((1, 0, 0), s2), ((1, 0, 1), s2), ((2, 0, 0), 1.0), ((2, 1, 1), 1.0)]:
        amps[(a * 2 + b) * 2 + c] = w / np.sqrt(6.0)
    return MultipartiteState(dims, amps)


def haar_random_pure(dims: Iterable[int], seed: int) -> MultipartiteState:
    """Haar-random pure state: normalized vector of iid complex Gaussians."""
    dims = _check_dim_list(dims)
    g = generator(seed)
    d = int(np.prod(dims))
    z = g.standard_normal(d) + 1j * g.standard_normal(d)
    return MultipartiteState(dims, z / np.linalg.norm(z))


def random_mixed(dims: Iterable[int], rank: int, seed: int) -> DensityOperator:
    """Random mixed state: partial trace of a Haar pure state on dims + [rank]."""
    dims = _check_dim_list(dims)
    d = int(np.prod(dims))
    if rank < 1 or rank > d:
        raise ValueError(f"rank must be in [1, {d}], got {rank}")
    purified = haar_random_pure(dims + (rank,), seed)
    mat = partial_trace(purified.projector().mat, dims + (rank,), range(len(dims)))
    return DensityOperator(dims, mat)


def reduce_state(
    state: MultipartiteState | DensityOperator, keep: int | Iterable[int]
) -> DensityOperator:
    """Reduced density operator on the kept subsystems (original order)."""
    rho = state.projector() if isinstance(state, MultipartiteState) else state
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(sorted({int(k) for k in keep}))
    mat = partial_trace(rho.mat, rho.dims, keep)
    return DensityOperator(tuple(rho.dims[k] for k in keep), mat)


def pair_reductions(
    state: MultipartiteState | DensityOperator, focus: int
) -> PairReductions:
    """All two-party reductions keeping `focus` and one other subsystem.

    Each returned operator acts on dims (d_focus, d_other), with the focus
    subsystem first even when its original index is larger.
    """
    rho = state.projector() if isinstance(state, MultipartiteState) else state
    n = len(rho.dims)
    if n < 2:
        raise ValueError("need at least 2 subsystems")
    if focus < 0 or focus >= n:
        raise ValueError(f"focus {focus} out of range for {n} subsystems")
    others = tuple(j for j in range(n) if j != focus)
    pairs = []
    for j in others:
        keep = tuple(sorted((focus, j)))
        mat = partial_trace(rho.mat, rho.dims, keep)
        kdims = tuple(rho.dims[k] for k in keep)
        if keep[0] != focus:
            mat = permute_subsystems(mat, kdims, (1, 0))
            kdims = (kdims[1], kdims[0])
        pairs.append(DensityOperator(kdims, mat))
    return PairReductions(focus, others, tuple(pairs))


def _pairs_to_json(vec: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in vec]


def save_state(path: str, state: MultipartiteState | DensityOperator) -> None:
    if isinstance(state, MultipartiteState):
        doc = {
            "kind": "pure",
            "dims": list(state.dims),
            "amps": _pairs_to_json(state.amps),
        }
    else:
        doc = {
            "kind": "mixed",
            "dims": list(state.dims),
            "mat": [_pairs_to_json(row) for row in state.mat],
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def _complex_from_pairs(data, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"{what} entries must be [re, im] pairs") from exc
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise StateFormatError(f"{what} entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def load_state(path: str) -> MultipartiteState | DensityOperator:
    """Load a state file; renormalizes tiny decimal drift, rejects real errors."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc or "dims" not in doc:
        raise StateFormatError("state file must carry 'kind' and 'dims'")
    try:
        dims = _check_dim_list(doc["dims"])
    except (TypeError, ValueError) as exc:
        raise StateFormatError(str(exc)) from exc
    d = int(np.prod(dims))
    kind = doc["kind"]
    if kind == "pure":
        if "amps" not in doc:
            raise StateFormatError("pure state file needs 'amps'")
        amps = _complex_from_pairs(doc["amps"], "amps")
        if amps.ndim != 1 or amps.size != d:
            raise StateFormatError(
                f"amps length {amps.size} does not match dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > LOAD_NORM_TOL:
            raise StateFormatError(f"state norm {norm} deviates beyond {LOAD_NORM_TOL}")
        return MultipartiteState(dims, amps / norm)
    if kind == "mixed":
        if "mat" not in doc:
            raise StateFormatError("mixed state file needs 'mat'")
        mat = _complex_from_pairs(doc["mat"], "mat")
        if mat.shape != (d, d):
            raise StateFormatError(f"mat shape {mat.shape} does not match dims {dims}")
        if not is_hermitian(mat, tol=1e-9):
            raise StateFormatError("mat is not Hermitian")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > LOAD_NORM_TOL:
            raise StateFormatError(f"trace {tr} deviates beyond {LOAD_NORM_TOL}")
        rho = DensityOperator(dims, (mat + mat.conj().T) / (2.0 * tr))
        rho.validate()
        return rho
    raise StateFormatError(f"unknown state kind {kind!r}")
