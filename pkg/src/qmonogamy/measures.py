"""Correlation measures on pure and small mixed states.

Pure-state formulas are evaluated directly from the bipartition matrix of
the amplitude vector. Two-qubit mixed-state concurrence and its assistance
dual use the spin-flip closed forms; SCREN quantities on two-qubit states
reduce to squared (assisted) concurrence because negativity and concurrence
coincide on every two-qubit pure state. Everything else goes through the
convex-roof optimizer, which doubles as the ground-truth oracle for the
closed forms.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import NumericError
from .kernels.roof import CODE_CONCURRENCE, CODE_NEGATIVITY, h_rows_numpy, run_roof
from .states import DensityOperator, MultipartiteState, generator
from .tensor import (
    hermitian_eig,
    matrix_sqrt_psd,
    partial_transpose,
    trace_norm_hermitian,
)

MEASURES = ("concurrence", "coa", "negativity", "scren", "screnoa")

# Exponent gamma at which each measure first satisfies two-party monogamy.
GAMMA_DEFAULTS = {"concurrence": 2.0, "coa": 2.0, "scren": 1.0, "screnoa": 1.0}

RANK_TOL = 1e-10
MU_CLAMP = 1e-12

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SYSY = np.kron(_SY, _SY)

PureMeasure = Union[str, Callable[[MultipartiteState], float]]


def default_gamma(measure: str) -> float:
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if measure not in GAMMA_DEFAULTS:
        raise ValueError(f"measure {measure!r} requires an explicit gamma")
    return GAMMA_DEFAULTS[measure]


def _bipartite_matrix(state: MultipartiteState, focus) -> np.ndarray:
    """Amplitudes reshaped to a (d_focus, d_rest) matrix, focus rows."""
    n = len(state.dims)
    if isinstance(focus, (int, np.integer)):
        focus = (int(focus),)
    focus = tuple(sorted({int(k) for k in focus}))
    if not focus or len(focus) >= n:
        raise ValueError("focus must be a nonempty proper subset of subsystems")
    for k in focus:
        if k < 0 or k >= n:
            raise ValueError(f"focus index {k} out of range")
    rest = tuple(k for k in range(n) if k not in focus)
    t = state.amps.reshape(state.dims)
    t = np.transpose(t, focus + rest)
    d_a = int(np.prod([state.dims[k] for k in focus]))
    return t.reshape(d_a, -1)


def concurrence_pure(state: MultipartiteState, focus) -> float:
    """sqrt(2 (1 - Tr rho_A^2)) across the focus|rest cut."""
    m = _bipartite_matrix(state, focus)
    g = m @ m.conj().T
    purity = float(np.sum(np.abs(g) ** 2))
    return float(np.sqrt(max(2.0 * (1.0 - purity), 0.0)))


def negativity_pure(state: MultipartiteState, focus) -> float:
    """(Tr sqrt(rho_A))^2 - 1 across the focus|rest cut."""
    m = _bipartite_matrix(state, focus)
    g = m @ m.conj().T
    values = np.clip(hermitian_eig(g).values, 0.0, None)
    return max(float(np.sum(np.sqrt(values)) ** 2 - 1.0), 0.0)


def scren_pure(state: MultipartiteState, focus) -> float:
    """Squared negativity of the pure cut (the roof is trivial for pure states)."""
    return negativity_pure(state, focus) ** 2


def screnoa_pure(state: MultipartiteState, focus) -> float:
    return negativity_pure(state, focus) ** 2


def _two_qubit_mu(rho: DensityOperator) -> np.ndarray:
    """Descending eigenvalues of rho * rho_tilde, rho_tilde the spin flip."""
    if rho.dims != (2, 2):
        raise ValueError(f"two-qubit measure needs dims (2, 2), got {rho.dims}")
    flipped = _SYSY @ rho.mat.conj() @ _SYSY
    root = matrix_sqrt_psd(rho.mat)
    mu = hermitian_eig(root @ flipped @ root).values
    return np.where(mu < MU_CLAMP, 0.0, mu)


def concurrence_two_qubit(rho: DensityOperator) -> float:
    """Spin-flip closed form max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4))."""
    s = np.sqrt(_two_qubit_mu(rho))
    return max(0.0, float(s[0] - s[1] - s[2] - s[3]))


def coa_two_qubit(rho: DensityOperator) -> float:
    """Assisted concurrence closed form: sum of all four sqrt(mu_i)."""
    return float(np.sum(np.sqrt(_two_qubit_mu(rho))))


def scren_two_qubit(rho: DensityOperator) -> float:
    return concurrence_two_qubit(rho) ** 2


def screnoa_two_qubit(rho: DensityOperator) -> float:
    return coa_two_qubit(rho) ** 2


def negativity(rho: DensityOperator, part=0) -> float:
    """Trace-norm negativity ||rho^{T_part}|| - 1."""
    pt = partial_transpose(rho.mat, rho.dims, part)
    val = trace_norm_hermitian(pt) - 1.0
    if val < -1e-10:
        raise NumericError(f"negativity {val:.3e} below the noise floor")
    return max(val, 0.0)


@dataclass(frozen=True)
class RoofConfig:
    """Knobs of the convex-roof optimizer.

    decomposition_size defaults to rank + 2; restarts are independent given
    (seed, restart index), with restart 0 pinned to the eigen-ensemble.
    """

    decomposition_size: int | None = None
    restarts: int = 64
    refine_steps: int = 400
    seed: int = 0
    direction: str = "min"

    def __post_init__(self):
        if self.direction not in ("min", "max"):
            raise ValueError(f"direction must be min|max, got {self.direction!r}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be >= 0")


@dataclass(frozen=True)
class RoofResult:
    value: float
    weights: np.ndarray
    states: tuple[MultipartiteState, ...]
    converged: bool

    def reconstruction(self) -> np.ndarray:
        d = self.states[0].dim
        out = np.zeros((d, d), dtype=np.complex128)
        for w, st in zip(self.weights, self.states):
            out += w * np.outer(st.amps, st.amps.conj())
        return out


def _pure_value(amps: np.ndarray, dims, measure: PureMeasure) -> float:
    state = MultipartiteState(dims, amps)
    if callable(measure):
        return float(measure(state))
    if measure == "concurrence":
        return concurrence_pure(state, 0)
    if measure == "negativity":
        return negativity_pure(state, 0)
    raise ValueError(f"unknown roof measure {measure!r}")


def convex_roof(
    rho: DensityOperator,
    pure_measure: PureMeasure = "concurrence",
    cfg: RoofConfig | None = None,
) -> RoofResult:
    """Optimize the decomposition-averaged pure measure over the roof.

    `pure_measure` is either a registered name ("concurrence", "negativity"),
    whose row functional runs inside the compiled kernels, or any callable
    on MultipartiteState, which runs on the (slower) generic path. The
    bipartition is subsystem 0 against the rest. For direction "min" the
    result is an upper bound on the true roof value, for "max" a lower bound;
    the returned decomposition always reconstructs rho.
    """
    cfg = cfg or RoofConfig()
    if len(rho.dims) < 2:
        raise ValueError("convex_roof needs at least two subsystems")
    d_a = rho.dims[0]
    d_b = int(np.prod(rho.dims[1:]))
    eig = hermitian_eig(rho.mat)
    if eig.values[-1] < -1e-8:
        raise NumericError("state has a significantly negative eigenvalue")
    values = np.clip(eig.values, 0.0, None)
    rank = max(int(np.sum(values > RANK_TOL)), 1)
    m = cfg.decomposition_size if cfg.decomposition_size is not None else rank + 2
    if m < rank:
        raise ValueError(f"decomposition size {m} below state rank {rank}")

    weighted = (eig.vectors[:, :rank] * np.sqrt(values[:rank])).T

    if rank == 1:
        amps = weighted[0] / np.linalg.norm(weighted[0])
        return RoofResult(
            value=_pure_value(amps, rho.dims, pure_measure),
            weights=np.array([1.0]),
            states=(MultipartiteState(rho.dims, amps),),
            converged=True,
        )

    sign = 1.0 if cfg.direction == "min" else -1.0
    code = None
    hfun = None
    if isinstance(pure_measure, str):
        try:
            code = {"concurrence": CODE_CONCURRENCE, "negativity": CODE_NEGATIVITY}[
                pure_measure
            ]
        except KeyError:
            raise ValueError(f"unknown roof measure {pure_measure!r}") from None
    else:
        d = d_a * d_b

        def hfun(rows, _f=pure_measure, _dims=rho.dims, _d=d):
            flat = np.asarray(rows).reshape(-1, _d)
            out = np.empty(flat.shape[0])
            for k, row in enumerate(flat):
                p = float(np.vdot(row, row).real)
                if p <= 1e-24:
                    out[k] = 0.0
                else:
                    out[k] = p * float(_f(MultipartiteState(_dims, row / np.sqrt(p))))
            return out.reshape(np.asarray(rows).shape[:-1])

    value, phi, converged = run_roof(
        weighted,
        m,
        d_a,
        d_b,
        sign,
        cfg.restarts,
        cfg.refine_steps,
        cfg.seed,
        generator,
        code=code,
        hfun=hfun,
    )
    weights = np.einsum("id,id->i", phi, phi.conj()).real
    keep = weights > 1e-12
    states = tuple(
        MultipartiteState(rho.dims, phi[k] / np.sqrt(weights[k]))
        for k in range(m)
        if keep[k]
    )
    return RoofResult(value, weights[keep], states, converged)


def scren_mixed(rho: DensityOperator, cfg: RoofConfig | None = None) -> float:
    """Squared roof-minimized negativity; closed form on two qubits."""
    if rho.dims == (2, 2):
        return scren_two_qubit(rho)
    cfg = dataclasses.replace(cfg or RoofConfig(), direction="min")
    return convex_roof(rho, "negativity", cfg).value ** 2


def screnoa_mixed(rho: DensityOperator, cfg: RoofConfig | None = None) -> float:
    """Squared roof-maximized negativity; closed form on two qubits."""
    if rho.dims == (2, 2):
        return screnoa_two_qubit(rho)
    cfg = dataclasses.replace(cfg or RoofConfig(), direction="max")
    return convex_roof(rho, "negativity", cfg).value ** 2


def eigen_ensemble_average(
    rho: DensityOperator, pure_measure: PureMeasure = "concurrence"
) -> float:
    """Decomposition average over the eigen-ensemble (refinement baseline)."""
    eig = hermitian_eig(rho.mat)
    values = np.clip(eig.values, 0.0, None)
    rank = max(int(np.sum(values > RANK_TOL)), 1)
    weighted = (eig.vectors[:, :rank] * np.sqrt(values[:rank])).T
    if isinstance(pure_measure, str):
        code = {"concurrence": CODE_CONCURRENCE, "negativity": CODE_NEGATIVITY}[
            pure_measure
        ]
        d_a = rho.dims[0]
        d_b = int(np.prod(rho.dims[1:]))
        return float(np.sum(h_rows_numpy(weighted, d_a, d_b, code)))
    total = 0.0
    for row in weighted:
        p = float(np.vdot(row, row).real)
        if p > 1e-24:
            total += p * float(pure_measure(MultipartiteState(rho.dims, row / np.sqrt(p))))
    return total
