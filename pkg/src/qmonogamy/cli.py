"""Command-line front end.

Subcommands: analyze (bound reports for a state), figure (curve data for the
bundled examples), sweep (randomized inequality validation), oracle
(closed-form vs convex-roof cross-check). All outputs are machine readable,
embed tool version / seed / grid / input hash, and are byte-identical across
reruns with the same flags. Exit codes: 0 ok, 2 input error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__
from ._backend import active_backend
from .errors import NumericError, StateFormatError
from .measures import (
    RoofConfig,
    coa_two_qubit,
    concurrence_pure,
    concurrence_two_qubit,
    convex_roof,
    scren_mixed,
    scren_pure,
    screnoa_pure,
    screnoa_two_qubit,
)
from .monogamy import (
    BoundSpec,
    PairValues,
    hamming_weight,
    lower_bound,
    powv,
    upper_bound,
    verdict,
)
from .states import (
    MultipartiteState,
    haar_random_pure,
    load_state,
    ou_state,
    pair_reductions,
    random_mixed,
    w_state,
)

MEASURE_CHOICES = ("concurrence", "coa", "negativity", "scren", "screnoa")

FIGURE_GRID_DEFAULTS = {1: "0:2:0.01", 2: "1:3:0.01", 3: "0:1:0.01", 4: "0:1:0.01"}
FIGURE_GRID_RANGES = {1: (0.0, 2.0), 2: (1.0, math.inf), 3: (0.0, 1.0), 4: (0.0, 1.0)}


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be START:STOP:STEP, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must be >= start")
    count = int(math.floor((stop - start) / step + 1e-9))
    return [start + k * step for k in range(count + 1)]


def _parse_float_list(text: str) -> list[float]:
    vals = [float(p) for p in text.split(",") if p.strip()]
    if not vals:
        raise ValueError("expected a comma-separated list of numbers")
    return vals


def _parse_dims(text: str) -> tuple[int, ...]:
    dims = tuple(int(p) for p in text.split(",") if p.strip())
    if not dims:
        raise ValueError("expected comma-separated dimensions")
    return dims


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _state_doc(state) -> dict:
    if isinstance(state, MultipartiteState):
        return {
            "kind": "pure",
            "dims": list(state.dims),
            "amps": [[float(z.real), float(z.imag)] for z in state.amps],
        }
    return {
        "kind": "mixed",
        "dims": list(state.dims),
        "mat": [[[float(z.real), float(z.imag)] for z in row] for row in state.mat],
    }


def _example_state(n: int):
    if n in (1, 3, 4):
        return w_state(4)
    if n == 2:
        return ou_state()
    raise ValueError(f"example must be 1..4, got {n}")


def _load_input(args) -> tuple[object, dict]:
    if getattr(args, "state", None):
        with open(args.state, "rb") as fh:
            digest = _sha256_bytes(fh.read())
        state = load_state(args.state)
        return state, {"state_file": args.state, "example": None, "sha256": digest}
    state = _example_state(args.example)
    canon = json.dumps(_state_doc(state), sort_keys=True).encode()
    return state, {
        "state_file": None,
        "example": args.example,
        "sha256": _sha256_bytes(canon),
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(meta: dict, header: list[str], rows: list[list]) -> str:
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _meta(command: str, extra: dict | None = None) -> dict:
    meta = {
        "tool": "qmonogamy",
        "version": __version__,
        "backend": active_backend(),
        "command": command,
    }
    if extra:
        meta.update(extra)
    return meta


# ---------------------------------------------------------------- analyze


def _cmd_analyze(args) -> None:
    state, input_info = _load_input(args)
    if args.grid:
        exponents = _parse_grid(args.grid)
        grid_str = args.grid
    else:
        point = args.alpha if args.alpha is not None else args.beta
        exponents = [float(point)]
        grid_str = f"{point}:{point}:1"
    roof_cfg = RoofConfig(restarts=args.restarts, refine_steps=args.steps, seed=args.seed)
    reports = verdict(
        state,
        focus=args.focus,
        kind=args.measure,
        exponents=exponents,
        gamma=args.gamma,
        sort=not args.unsorted,
        roof_cfg=roof_cfg,
    )
    pv = reports[0].pair_values
    doc = _meta(
        "analyze",
        {
            "input": input_info,
            "measure": args.measure,
            "focus": args.focus,
            "gamma": reports[0].gamma,
            "seed": args.seed,
            "grid": grid_str,
            "sorted": not args.unsorted,
            "pair_values": [float(v) for v in pv.values],
            "permutation": list(pv.perm),
            "lhs_base": reports[0].lhs_base,
        },
    )
    doc["reports"] = [
        {
            "exponent": r.exponent,
            "lhs": r.lhs,
            "delta_q": r.delta_q,
            "bounds": {
                label: {
                    "bound": e.bound,
                    "slack": e.slack,
                    "applicable": e.applicable,
                    "condition": e.condition,
                }
                for label, e in r.entries.items()
            },
        }
        for r in reports
    ]
    if args.format == "json":
        _emit(_json_text(doc), args.out)
        return
    labels = sorted(reports[0].entries)
    header = ["exponent", "lhs", "delta_q"]
    for lab in labels:
        header += [f"{lab}_bound", f"{lab}_slack", f"{lab}_applicable"]
    rows = []
    for r in reports:
        row: list = [r.exponent, r.lhs, r.delta_q]
        for lab in labels:
            e = r.entries[lab]
            row += [e.bound, e.slack, int(e.applicable)]
        rows.append(row)
    meta = {k: v for k, v in doc.items() if k not in ("reports", "input")}
    meta["input_sha256"] = input_info["sha256"]
    meta["pair_values"] = ";".join(_fmt(v) for v in pv.values)
    meta["permutation"] = ";".join(str(p) for p in pv.perm)
    _emit(_csv_text(meta, header, rows), args.out)


# ---------------------------------------------------------------- figure


def _figure_rows(example: int, grid: list[float], cfg: RoofConfig):
    if example == 1:
        w4 = w_state(4)
        base = concurrence_pure(w4, 0)
        ca = [coa_two_qubit(p) for p in pair_reductions(w4, 0).pairs]
        pv = PairValues.from_values(ca)
        header = [
            "beta",
            "exact",
            "bound_hamming",
            "bound_split",
            "paper_formula_hamming",
            "paper_formula_split",
        ]
        rows = []
        for b in grid:
            x = 2.0 ** (b / 2.0) - 1.0
            rows.append(
                [
                    b,
                    powv(base, b),
                    upper_bound(pv, BoundSpec("hamming_upper", b, 2.0)),
                    upper_bound(pv, BoundSpec("split_upper", b, 2.0, m=1)),
                    (x * x + 2.0) * 0.5**b,
                    (2.0 ** (b / 2.0 + 1.0) - 1.0) * 0.5**b,
                ]
            )
        return header, rows
    if example == 2:
        ou = ou_state()
        base = scren_pure(ou, 0)
        cfg_min = dataclasses.replace(cfg, direction="min")
        s = [scren_mixed(p, cfg_min) for p in pair_reductions(ou, 0).pairs]
        pv = PairValues.from_values(s)
        wh = np.array([hamming_weight(j) for j in range(pv.n)], dtype=np.float64)
        header = [
            "alpha",
            "exact",
            "bound_hamming",
            "bound_prior_hamming",
            "paper_formula_hamming",
            "paper_formula_prior",
            "paper_value_exact",
        ]
        rows = []
        for a in grid:
            rows.append(
                [
                    a,
                    powv(base, a),
                    lower_bound(pv, BoundSpec("hamming_lower", a, 1.0)),
                    float(np.dot(a**wh, powv(pv.values, a))),
                    (8.0 / 9.0) ** a * 2.0**a,
                    (1.0 + a) * (8.0 / 9.0) ** a,
                    4.0**a,
                ]
            )
        return header, rows
    w4 = w_state(4)
    base = screnoa_pure(w4, 0)
    sa = [screnoa_two_qubit(p) for p in pair_reductions(w4, 0).pairs]
    pv = PairValues.from_values(sa)
    wh = np.array([hamming_weight(j) for j in range(pv.n)], dtype=np.float64)
    jj = np.arange(pv.n, dtype=np.float64)
    if example == 3:
        header = [
            "beta",
            "exact",
            "bound_hamming",
            "bound_prior_hamming",
            "paper_formula_hamming",
            "paper_formula_prior",
        ]
        rows = []
        for b in grid:
            rows.append(
                [
                    b,
                    powv(base, b),
                    upper_bound(pv, BoundSpec("hamming_upper", b, 1.0)),
                    float(np.dot(b**wh, powv(pv.values, b))),
                    (2.0**b + 1.0) * 0.25**b,
                    (2.0 + b) * 0.25**b,
                ]
            )
        return header, rows
    header = [
        "beta",
        "exact",
        "bound_split",
        "bound_hamming",
        "bound_prior_geometric",
        "paper_formula_split",
        "paper_formula_hamming",
        "paper_formula_prior",
    ]
    rows = []
    for b in grid:
        x = 2.0**b - 1.0
        rows.append(
            [
                b,
                powv(base, b),
                upper_bound(pv, BoundSpec("split_upper", b, 1.0, m=1)),
                upper_bound(pv, BoundSpec("hamming_upper", b, 1.0)),
                float(np.dot(b**jj, powv(pv.values, b))),
                (2.0 ** (b + 1.0) - 1.0) * 0.25**b,
                (2.0 + x * x) * 0.25**b,
                (2.0 + b * b) * 0.25**b,
            ]
        )
    return header, rows


def _cmd_figure(args) -> None:
    example = args.example
    if example not in (1, 2, 3, 4):
        raise ValueError(f"example must be 1..4, got {example}")
    grid_str = args.grid or FIGURE_GRID_DEFAULTS[example]
    grid = _parse_grid(grid_str)
    lo, hi = FIGURE_GRID_RANGES[example]
    if grid[0] < lo - 1e-12 or grid[-1] > hi + 1e-12:
        raise ValueError(
            f"grid {grid_str} outside the exponent range [{lo}, {hi}] of example {example}"
        )
    state = _example_state(example)
    canon = json.dumps(_state_doc(state), sort_keys=True).encode()
    cfg = RoofConfig(restarts=args.restarts, refine_steps=args.steps, seed=args.seed)
    header, rows = _figure_rows(example, grid, cfg)
    meta = _meta(
        "figure",
        {
            "example": example,
            "grid": grid_str,
            "seed": args.seed,
            "input_sha256": _sha256_bytes(canon),
        },
    )
    _emit(_csv_text(meta, header, rows), args.out)


# ---------------------------------------------------------------- sweep

_SLACK_TOL = 1e-8

_LOWER_FAMS = ("ckw", "alpha_power", "hamming_lower", "geometric_lower")
_UPPER_FAMS = ("dual_sum", "hamming_upper", "geometric_upper", "split_upper")


def _family_min_slack(reports, family: str):
    slacks = []
    for r in reports:
        for label, e in r.entries.items():
            if label == family or label.startswith(family + "_m"):
                if e.applicable:
                    slacks.append(e.slack)
    return min(slacks) if slacks else math.nan


def _family_bound(report, family: str):
    for label, e in report.entries.items():
        if label == family or label.startswith(family + "_m"):
            return e.bound
    return math.nan


def _cmd_sweep(args) -> None:
    dims = _parse_dims(args.dims)
    alphas = _parse_float_list(args.alphas)
    betas = _parse_float_list(args.betas)
    header = [
        "sample",
        "seed",
        "slack_ckw",
        "slack_alpha_power",
        "slack_hamming_lower",
        "slack_geometric_lower",
        "dominance_c",
        "slack_dual_sum",
        "slack_hamming_upper",
        "slack_geometric_upper",
        "slack_split_upper",
        "dominance_ca",
        "lower_coeff_gap_min",
        "upper_coeff_gap_min",
    ]
    rows = []
    fam_slacks: dict[str, list[float]] = {f: [] for f in _LOWER_FAMS + _UPPER_FAMS}
    dom_c_count = 0
    dom_ca_count = 0
    lower_gap_min = math.inf
    upper_gap_min = math.inf
    for i in range(args.samples):
        seed_i = args.seed ^ i
        st = haar_random_pure(dims, seed_i)
        rep_c = verdict(st, 0, "concurrence", alphas, schemes=(
            "ckw", "alpha_power", "hamming_lower", "geometric_lower"))
        rep_a = verdict(st, 0, "coa", betas)
        row: list = [i, seed_i]
        sample_gaps_low = []
        sample_gaps_up = []
        for fam in _LOWER_FAMS:
            s = _family_min_slack(rep_c, fam)
            row.append(s)
            if not math.isnan(s):
                fam_slacks[fam].append(s)
        dom_c = all(
            r.entries["geometric_lower"].applicable for r in rep_c
        )
        dom_c_count += dom_c
        row.append(int(dom_c))
        for fam in _UPPER_FAMS:
            s = _family_min_slack(rep_a, fam)
            row.append(s)
            if not math.isnan(s):
                fam_slacks[fam].append(s)
        dom_ca = all(r.entries["geometric_upper"].applicable for r in rep_a)
        dom_ca_count += dom_ca
        row.append(int(dom_ca))
        for r in rep_c:
            sample_gaps_low.append(
                _family_bound(r, "geometric_lower") - _family_bound(r, "hamming_lower")
            )
        for r in rep_a:
            sample_gaps_up.append(
                _family_bound(r, "hamming_upper") - _family_bound(r, "geometric_upper")
            )
        gl = min(sample_gaps_low)
        gu = min(sample_gaps_up)
        lower_gap_min = min(lower_gap_min, gl)
        upper_gap_min = min(upper_gap_min, gu)
        rows.append(row + [gl, gu])
    families = {}
    for fam, slacks in fam_slacks.items():
        arr = np.array(slacks) if slacks else np.array([math.nan])
        families[fam] = {
            "evaluated": len(slacks),
            "min_slack": float(np.min(arr)),
            "mean_slack": float(np.mean(arr)),
            "violations": int(np.sum(arr < -_SLACK_TOL)) if slacks else 0,
        }
    summary = _meta(
        "sweep",
        {
            "dims": list(dims),
            "samples": args.samples,
            "seed": args.seed,
            "alphas": alphas,
            "betas": betas,
            "families": families,
            "dominance_c_count": dom_c_count,
            "dominance_ca_count": dom_ca_count,
            "coefficient_order": {
                "lower_gap_min": lower_gap_min,
                "upper_gap_min": upper_gap_min,
            },
        },
    )
    meta = _meta(
        "sweep",
        {
            "dims": args.dims,
            "samples": args.samples,
            "seed": args.seed,
            "alphas": args.alphas,
            "betas": args.betas,
        },
    )
    _emit(_csv_text(meta, header, rows), args.out)
    summary_path = _summary_path(args.out)
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(_json_text(summary))


def _summary_path(out: str) -> str:
    if out.endswith(".csv"):
        return out[: -len(".csv")] + ".summary.json"
    return out + ".summary.json"


# ---------------------------------------------------------------- oracle


def _cmd_oracle(args) -> None:
    header = [
        "sample",
        "seed",
        "closed_concurrence",
        "roof_min",
        "dev_min",
        "converged_min",
        "closed_coa",
        "roof_max",
        "dev_max",
        "converged_max",
    ]
    rows = []
    devs_min = []
    devs_max = []
    not_conv = 0
    for i in range(args.samples):
        seed_i = args.seed ^ i
        rho = random_mixed((2, 2), args.rank, seed_i)
        closed_c = concurrence_two_qubit(rho)
        closed_a = coa_two_qubit(rho)
        cfg_min = RoofConfig(
            restarts=args.restarts, refine_steps=args.steps, seed=seed_i, direction="min"
        )
        cfg_max = dataclasses.replace(cfg_min, direction="max")
        rmin = convex_roof(rho, "concurrence", cfg_min)
        rmax = convex_roof(rho, "concurrence", cfg_max)
        dev_min = abs(closed_c - rmin.value)
        dev_max = abs(closed_a - rmax.value)
        devs_min.append(dev_min)
        devs_max.append(dev_max)
        not_conv += (not rmin.converged) + (not rmax.converged)
        rows.append(
            [
                i,
                seed_i,
                closed_c,
                rmin.value,
                dev_min,
                int(rmin.converged),
                closed_a,
                rmax.value,
                dev_max,
                int(rmax.converged),
            ]
        )
    meta = _meta(
        "oracle",
        {
            "samples": args.samples,
            "seed": args.seed,
            "rank": args.rank,
            "restarts": args.restarts,
            "steps": args.steps,
        },
    )
    summary = _meta(
        "oracle",
        {
            "samples": args.samples,
            "seed": args.seed,
            "rank": args.rank,
            "restarts": args.restarts,
            "steps": args.steps,
            "max_dev_min": float(np.max(devs_min)),
            "max_dev_max": float(np.max(devs_max)),
            "mean_dev_min": float(np.mean(devs_min)),
            "mean_dev_max": float(np.mean(devs_max)),
            "not_converged": not_conv,
        },
    )
    _emit(_csv_text(meta, header, rows), args.out)
    with open(_summary_path(args.out), "w", encoding="utf-8") as fh:
        fh.write(_json_text(summary))


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmonogamy",
        description="Correlation measures and monogamy/polygamy bound verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="bound report for a state over an exponent grid")
    src = pa.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", help="state file (JSON)")
    src.add_argument("--example", type=int, choices=(1, 2, 3, 4), help="bundled example")
    pa.add_argument("--measure", required=True, choices=MEASURE_CHOICES)
    pa.add_argument("--focus", type=int, default=0)
    pa.add_argument("--gamma", type=float, default=None)
    grid = pa.add_mutually_exclusive_group(required=True)
    grid.add_argument("--grid", help="exponent grid START:STOP:STEP")
    grid.add_argument("--alpha", type=float, help="single exponent")
    grid.add_argument("--beta", type=float, help="single exponent")
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--restarts", type=int, default=64, help="roof restarts (roof-valued pairs)")
    pa.add_argument("--steps", type=int, default=400, help="roof refinement steps")
    pa.add_argument("--unsorted", action="store_true", help="skip descending sort of pair values")
    pa.add_argument("--out", default=None)
    pa.add_argument("--format", choices=("json", "csv"), default="json")
    pa.set_defaults(func=_cmd_analyze)

    pf = sub.add_parser("figure", help="curve data reproducing a bundled example")
    pf.add_argument("--example", type=int, required=True, choices=(1, 2, 3, 4))
    pf.add_argument("--grid", default=None, help="exponent grid START:STOP:STEP")
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--restarts", type=int, default=64)
    pf.add_argument("--steps", type=int, default=400)
    pf.add_argument("--out", default=None)
    pf.set_defaults(func=_cmd_figure)

    ps = sub.add_parser("sweep", help="randomized monogamy/polygamy validation")
    ps.add_argument("--dims", default="2,2,2,2")
    ps.add_argument("--samples", type=int, default=500)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--alphas", default="2,2.5,3")
    ps.add_argument("--betas", default="0.5,1,1.5,2")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=_cmd_sweep)

    po = sub.add_parser("oracle", help="closed forms vs convex-roof optimizer")
    po.add_argument("--samples", type=int, default=50)
    po.add_argument("--seed", type=int, default=0)
    po.add_argument("--rank", type=int, default=2)
    po.add_argument("--restarts", type=int, default=64)
    po.add_argument("--steps", type=int, default=400)
    po.add_argument("--out", required=True)
    po.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except (StateFormatError, ValueError, OSError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
