"""Hamming-weight bound coefficients, inequality evaluators, and the verdict
engine comparing measured correlations against every bound family.

Lower-bound schemes (monogamy) require exponent >= gamma; upper-bound
schemes (polygamy) require 0 <= exponent <= gamma. With x = 2^(exp/gamma) - 1
the coefficient of the j-th (descending-sorted) pair value is:

    ckw, alpha_power, dual_sum   1
    legacy_geometric             (exp/2)^j
    hamming_lower/upper          x^(hamming weight of j)
    geometric_lower/upper        x^j
    split_upper(m)               x^j for j <= m, then x^(m+2) for the middle
                                 block, x^(m+1) for the last pair

Every scheme is always evaluated; conditions that the originating theorem
puts on the state are reported as an `applicable` flag with detail text,
never as a refusal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import measures as _measures
from .measures import (
    RoofConfig,
    coa_two_qubit,
    concurrence_pure,
    concurrence_two_qubit,
    default_gamma,
    negativity_pure,
    scren_mixed,
    scren_pure,
    screnoa_mixed,
)
from .states import DensityOperator, MultipartiteState, pair_reductions
from .tensor import hermitian_eig

CONDITION_TOL = 1e-12

LOWER_SCHEMES = (
    "ckw",
    "alpha_power",
    "legacy_geometric",
    "hamming_lower",
    "geometric_lower",
)
UPPER_SCHEMES = ("dual_sum", "hamming_upper", "geometric_upper", "split_upper")

LOWER_KINDS = ("concurrence", "negativity", "scren")
UPPER_KINDS = ("coa", "screnoa")


def hamming_weight(j: int) -> int:
    """Number of 1 bits in the binary expansion of j."""
    j = int(j)
    if j < 0:
        raise ValueError("hamming_weight needs a non-negative integer")
    return j.bit_count()


def binary_vector(j: int, n: int) -> tuple[int, ...]:
    """Bits (j_0, ..., j_{n-1}) with j = sum_i j_i 2^i (LSB first)."""
    j = int(j)
    if j < 0 or j >= (1 << n):
        raise ValueError(f"binary_vector needs 0 <= j < 2^{n}, got {j}")
    return tuple((j >> i) & 1 for i in range(n))


def coeff_base(exponent: float, gamma: float) -> float:
    """The base x = 2^(exponent/gamma) - 1 of the Hamming-weight coefficients."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return 2.0 ** (exponent / gamma) - 1.0


def powv(values, exponent: float):
    """Elementwise v^exponent with 0^0 := 0 (a vanished pair contributes nothing)."""
    v = np.asarray(values, dtype=np.float64)
    out = np.zeros_like(v)
    pos = v > 0.0
    out[pos] = v[pos] ** exponent
    if np.ndim(values) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class PairValues:
    """Pairwise correlation values plus the sort bookkeeping.

    perm[k] is the original pair position that landed at sorted position k.
    """

    values: np.ndarray
    perm: tuple[int, ...]
    descending: bool

    @classmethod
    def from_values(cls, values: Iterable[float], sort: bool = True) -> "PairValues":
        v = np.asarray(list(values), dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("pair values must be a nonempty 1-d sequence")
        if np.any(v < -CONDITION_TOL):
            raise ValueError("pair values must be non-negative")
        v = np.clip(v, 0.0, None)
        if sort:
            order = np.argsort(-v, kind="stable")
            return cls(v[order], tuple(int(k) for k in order), True)
        return cls(v, tuple(range(v.size)), check_descending(v)[0])

    @property
    def n(self) -> int:
        return int(self.values.size)


def check_descending(values, tol: float = CONDITION_TOL) -> tuple[bool, str]:
    """True iff v_j >= v_{j+1} >= 0 within tolerance for all j."""
    v = np.asarray(values, dtype=np.float64)
    if v.size <= 1:
        return True, "trivially descending"
    bad = [int(j) for j in range(v.size - 1) if v[j] < v[j + 1] - tol]
    if bad:
        return False, f"order violated at positions {bad}"
    return True, "descending"


def check_dominance(values, gamma: float, tol: float = CONDITION_TOL) -> tuple[bool, str]:
    """True iff v_i^gamma >= sum_{j>i} v_j^gamma for every i <= n-2."""
    v = np.asarray(values, dtype=np.float64)
    pg = powv(v, gamma)
    tails = np.concatenate([np.cumsum(pg[::-1])[::-1][1:], [0.0]])
    bad = [int(i) for i in range(v.size - 1) if pg[i] < tails[i] - tol]
    if bad:
        return False, f"dominance fails at positions {bad}"
    return True, "each power dominates the tail sum"


def split_point(values, gamma: float, tol: float = CONDITION_TOL):
    """Largest m in [1, n-3] where dominance holds through m and reverses after.

    Returns (m or None, detail). The split needs at least four pair values.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    pg = powv(v, gamma)
    tails = np.concatenate([np.cumsum(pg[::-1])[::-1][1:], [0.0]])
    ge = [bool(pg[i] >= tails[i] - tol) for i in range(n)]
    le = [bool(pg[i] <= tails[i] + tol) for i in range(n)]
    detail = f"tail-dominance per index: {['>=' if g else '<' for g in ge]}"
    if not np.any(v > tol):
        return None, "all pair values vanish; no meaningful split"
    if n < 4:
        return None, f"needs at least 4 pair values, have {n}; {detail}"
    for m in range(n - 3, 0, -1):
        if all(ge[i] for i in range(m + 1)) and all(le[j] for j in range(m + 1, n - 1)):
            return m, f"split at m={m}; {detail}"
    return None, f"no admissible split; {detail}"


@dataclass(frozen=True)
class BoundSpec:
    """Which inequality family to evaluate, at which exponent and gamma."""

    scheme: str
    exponent: float
    gamma: float = 2.0
    m: int | None = None

    def __post_init__(self):
        if self.scheme not in LOWER_SCHEMES + UPPER_SCHEMES:
            raise ValueError(f"unknown bound scheme {self.scheme!r}")
        if self.gamma < 1.0 - CONDITION_TOL:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if self.is_lower:
            if self.exponent < self.gamma - CONDITION_TOL:
                raise ValueError(
                    f"lower-bound scheme {self.scheme} needs exponent >= gamma "
                    f"({self.exponent} < {self.gamma})"
                )
        else:
            if not (-CONDITION_TOL <= self.exponent <= self.gamma + CONDITION_TOL):
                raise ValueError(
                    f"upper-bound scheme {self.scheme} needs 0 <= exponent <= gamma "
                    f"(got {self.exponent}, gamma {self.gamma})"
                )
        if self.scheme == "split_upper":
            if self.m is None or self.m < 0:
                raise ValueError("split_upper needs a non-negative split index m")

    @property
    def is_lower(self) -> bool:
        return self.scheme in LOWER_SCHEMES

    @property
    def label(self) -> str:
        if self.scheme == "split_upper":
            return f"split_upper_m{self.m}"
        return self.scheme


def _coefficients(spec: BoundSpec, n: int) -> np.ndarray:
    j = np.arange(n)
    if spec.scheme in ("ckw", "alpha_power", "dual_sum"):
        return np.ones(n)
    if spec.scheme == "legacy_geometric":
        return (spec.exponent / 2.0) ** j
    x = coeff_base(spec.exponent, spec.gamma)
    if spec.scheme in ("hamming_lower", "hamming_upper"):
        return x ** np.array([hamming_weight(int(k)) for k in j], dtype=np.float64)
    if spec.scheme in ("geometric_lower", "geometric_upper"):
        return x ** j.astype(np.float64)
    # split_upper: x^j through m, x^(m+2) on the middle block, x^(m+1) last
    m = int(spec.m)
    coeff = np.empty(n)
    for k in range(n):
        if k <= m:
            coeff[k] = x ** k
        elif k == n - 1:
            coeff[k] = x ** (m + 1)
        else:
            coeff[k] = x ** (m + 2)
    return coeff


def lower_bound(pv: PairValues, spec: BoundSpec) -> float:
    """Coefficient-weighted power sum of a monogamy (lower) bound scheme."""
    if not spec.is_lower:
        raise ValueError(f"{spec.scheme} is not a lower-bound scheme")
    return float(np.dot(_coefficients(spec, pv.n), powv(pv.values, spec.exponent)))


def upper_bound(pv: PairValues, spec: BoundSpec) -> float:
    """Coefficient-weighted power sum of a polygamy (upper) bound scheme."""
    if spec.is_lower:
        raise ValueError(f"{spec.scheme} is not an upper-bound scheme")
    return float(np.dot(_coefficients(spec, pv.n), powv(pv.values, spec.exponent)))


def applicability(pv: PairValues, spec: BoundSpec) -> tuple[bool, str]:
    """Whether the originating inequality's conditions hold for these values."""
    if spec.scheme in ("ckw", "dual_sum"):
        ok = abs(spec.exponent - spec.gamma) <= CONDITION_TOL
        return ok, (
            "plain power sum; exact at exponent == gamma"
            if ok
            else f"plain sum stated at exponent == gamma, evaluated at {spec.exponent}"
        )
    if spec.scheme == "alpha_power":
        return True, "power sum valid for exponent >= gamma"
    if spec.scheme == "legacy_geometric":
        if abs(spec.gamma - 2.0) > CONDITION_TOL:
            return False, "legacy geometric scheme is specific to gamma == 2"
        return True, "state ordering condition of the legacy relation not checked"
    if spec.scheme in ("hamming_lower", "hamming_upper"):
        return check_descending(pv.values)
    if spec.scheme in ("geometric_lower", "geometric_upper"):
        ok_d, det_d = check_descending(pv.values)
        ok_c, det_c = check_dominance(pv.values, spec.gamma)
        return ok_d and ok_c, f"{det_d}; {det_c}"
    # split_upper
    n = pv.n
    ok_d, det_d = check_descending(pv.values)
    if n < 4:
        return False, f"needs at least 4 pair values, have {n}; {det_d}"
    if not (1 <= spec.m <= n - 3):
        return False, f"m={spec.m} outside [1, {n - 3}]; {det_d}"
    m_found, det_s = split_point(pv.values, spec.gamma)
    ok = ok_d and m_found is not None and _split_holds_at(pv.values, spec.gamma, spec.m)
    return ok, f"{det_d}; {det_s}"


def _split_holds_at(values, gamma: float, m: int, tol: float = CONDITION_TOL) -> bool:
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    pg = powv(v, gamma)
    tails = np.concatenate([np.cumsum(pg[::-1])[::-1][1:], [0.0]])
    head = all(pg[i] >= tails[i] - tol for i in range(min(m + 1, n)))
    tail = all(pg[j] <= tails[j] + tol for j in range(m + 1, n - 1))
    return head and tail


@dataclass(frozen=True)
class BoundEntry:
    spec: BoundSpec
    bound: float
    applicable: bool
    condition: str
    slack: float  # lhs - bound for lower schemes, bound - lhs for upper


@dataclass(frozen=True)
class BoundReport:
    exponent: float
    gamma: float
    lhs_base: float  # measure of the focus|rest cut, before powering
    lhs: float  # lhs_base ** exponent
    delta_q: float  # monogamy score at exponent gamma, unit coefficients
    pair_values: PairValues
    entries: dict[str, BoundEntry] = field(default_factory=dict)


def default_schemes(kind: str, gamma: float) -> tuple[str, ...]:
    if kind in LOWER_KINDS:
        base = ["ckw", "alpha_power", "hamming_lower", "geometric_lower"]
        if abs(gamma - 2.0) <= CONDITION_TOL:
            base.insert(2, "legacy_geometric")
        return tuple(base)
    if kind in UPPER_KINDS:
        return UPPER_SCHEMES
    raise ValueError(f"unknown measure kind {kind!r}")


def _cut_state(state) -> MultipartiteState:
    if isinstance(state, MultipartiteState):
        return state
    if isinstance(state, DensityOperator):
        eig = hermitian_eig(state.mat)
        if eig.values[0] < 1.0 - 1e-8:
            raise ValueError(
                "full-cut measures need a pure input state (rank-1 density operator)"
            )
        return MultipartiteState(state.dims, eig.vectors[:, 0])
    raise TypeError(f"unsupported state type {type(state)!r}")


def _cut_value(state: MultipartiteState, focus: int, kind: str) -> float:
    if kind in ("concurrence", "coa"):
        return concurrence_pure(state, focus)
    if kind == "negativity":
        return negativity_pure(state, focus)
    if kind in ("scren", "screnoa"):
        return scren_pure(state, focus)
    raise ValueError(f"unknown measure kind {kind!r}")


def _pair_value(rho: DensityOperator, kind: str, roof_cfg: RoofConfig | None) -> float:
    if kind == "concurrence":
        return concurrence_two_qubit(rho)
    if kind == "coa":
        return coa_two_qubit(rho)
    if kind == "negativity":
        return _measures.negativity(rho, 0)
    if kind == "scren":
        return scren_mixed(rho, roof_cfg)
    if kind == "screnoa":
        return screnoa_mixed(rho, roof_cfg)
    raise ValueError(f"unknown measure kind {kind!r}")


def verdict(
    state,
    focus: int = 0,
    kind: str = "concurrence",
    exponents: Sequence[float] = (2.0,),
    schemes: Sequence[str] | None = None,
    gamma: float | None = None,
    sort: bool = True,
    roof_cfg: RoofConfig | None = None,
) -> list[BoundReport]:
    """Evaluate each bound scheme against the measured focus|rest correlation.

    The pair values are sorted descending (recording the permutation) unless
    `sort=False`, in which case schemes whose theorems assume the ordering
    are flagged non-applicable when it fails. One report per exponent.
    """
    if kind not in LOWER_KINDS + UPPER_KINDS:
        raise ValueError(f"unknown measure kind {kind!r}")
    g = float(gamma) if gamma is not None else default_gamma(kind)
    if g < 1.0 - CONDITION_TOL:
        raise ValueError(f"gamma must be >= 1, got {g}")
    cut = _cut_state(state)
    base = _cut_value(cut, focus, kind)
    reductions = pair_reductions(cut, focus)
    raw = [_pair_value(p, kind, roof_cfg) for p in reductions.pairs]
    pv = PairValues.from_values(raw, sort=sort)
    use = tuple(schemes) if schemes is not None else default_schemes(kind, g)
    sp_m, _ = split_point(pv.values, g)
    m_use = sp_m if sp_m is not None else 1

    reports = []
    delta_q = powv(base, g) - float(np.sum(powv(pv.values, g)))
    for ex in exponents:
        ex = float(ex)
        lhs = powv(base, ex)
        entries: dict[str, BoundEntry] = {}
        for scheme in use:
            m_arg = m_use if scheme == "split_upper" else None
            spec = BoundSpec(scheme, ex, g, m=m_arg)
            if spec.is_lower:
                bound = lower_bound(pv, spec)
                slack = lhs - bound
            else:
                bound = upper_bound(pv, spec)
                slack = bound - lhs
            ok, detail = applicability(pv, spec)
            entries[spec.label] = BoundEntry(spec, bound, ok, detail, slack)
        reports.append(
            BoundReport(
                exponent=ex,
                gamma=g,
                lhs_base=base,
                lhs=lhs,
                delta_q=delta_q,
                pair_values=pv,
                entries=entries,
            )
        )
    return reports
