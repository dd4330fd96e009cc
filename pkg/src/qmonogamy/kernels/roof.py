"""Decomposition-refinement kernels for the convex-roof optimizer.

A size-m decomposition of a rank-r mixed state is parameterized by an m x r
isometry U acting on the weighted eigenvectors W (rows sqrt(lambda_k) v_k):
the unnormalized members are the rows of Phi = U W, with weights |phi_i|^2.
Left-multiplying U by a unitary preserves the decomposition property, so the
optimizer walks the manifold with two-row rotations

    phi_i' =  cos(t) phi_i + w sin(t) phi_j
    phi_j' = -conj(w) sin(t) phi_i + cos(t) phi_j      |w| = 1

alternating w = 1 (real rotation) and w = i (phase rotation) over all row
pairs, choosing each angle by a coarse scan plus golden-section refinement.
Only the row functional

    h(phi) = |phi|^2 * f(phi / |phi|)

is measure-specific; for the supported measures it has closed forms in the
unnormalized row, so no normalization is ever needed in the hot loop.

Two implementations: a numba kernel refining one restart at a time, and a
numpy path vectorized across all restarts (also used for arbitrary callable
measures). Both follow the identical angle schedule.
"""

from __future__ import annotations

import numpy as np

from .._backend import HAVE_NUMBA, USE_NUMBA

CODE_CONCURRENCE = 0
CODE_NEGATIVITY = 1

GRID_N = 16
GS_ITERS = 28
CYCLE_TOL = 1e-12

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def haar_isometry(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed m x r isometry (orthonormal columns)."""
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, rr = np.linalg.qr(z)
    d = np.diag(rr)
    phase = np.where(np.abs(d) > 1e-300, d / np.abs(d), 1.0)
    return q * phase


def h_rows_numpy(rows: np.ndarray, d_a: int, d_b: int, code: int) -> np.ndarray:
    """Row functional h for a stack of unnormalized vectors (..., d_a*d_b)."""
    m = rows.reshape(rows.shape[:-1] + (d_a, d_b))
    p = np.einsum("...ab,...ab->...", m, m.conj()).real
    if code == CODE_CONCURRENCE:
        g = np.einsum("...ab,...cb->...ac", m, m.conj())
        g2 = np.einsum("...ac,...ac->...", g, g.conj()).real
        return np.sqrt(np.clip(2.0 * (p * p - g2), 0.0, None))
    if code != CODE_NEGATIVITY:
        raise ValueError(f"unknown measure code {code}")
    k = min(d_a, d_b)
    if k == 1:
        return np.zeros(p.shape)
    if d_a <= d_b:
        g = np.einsum("...ab,...cb->...ac", m, m.conj())
    else:
        g = np.einsum("...ab,...ac->...bc", m.conj(), m)
    if k == 2:
        det = g[..., 0, 0].real * g[..., 1, 1].real - np.abs(g[..., 0, 1]) ** 2
        return 2.0 * np.sqrt(np.clip(det, 0.0, None))
    lam = np.linalg.eigvalsh(g)
    s = np.sqrt(np.clip(lam, 0.0, None)).sum(axis=-1)
    return s * s - p


def refine_numpy(
    phi: np.ndarray,
    pairs_i: np.ndarray,
    pairs_j: np.ndarray,
    hfun,
    sign: float,
    steps: int,
    grid_n: int = GRID_N,
    gs_iters: int = GS_ITERS,
    cycle_tol: float = CYCLE_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """Refine a batch of restarts in place. phi has shape (R, m, D).

    Returns (values, converged) per restart; `sign` is +1 to minimize the
    average, -1 to maximize.
    """
    n_restarts, m, _ = phi.shape
    h = hfun(phi)
    cycle_len = 2 * len(pairs_i)
    grid_t = -np.pi / 2.0 + np.pi * (np.arange(grid_n) + 0.5) / grid_n
    combo = 0
    cycle_gain = np.zeros(n_restarts)
    converged = np.zeros(n_restarts, dtype=bool)
    ridx = np.arange(n_restarts)

    def pair_obj(a, b, th, w):
        c = np.cos(th)[..., None]
        s = np.sin(th)[..., None]
        return hfun(c * a + s * (w * b)) + hfun(c * b - s * (np.conj(w) * a))

    for _ in range(steps):
        pidx, fam = divmod(combo, 2)
        i = int(pairs_i[pidx])
        j = int(pairs_j[pidx])
        w = 1.0 + 0.0j if fam == 0 else 1.0j
        a = phi[:, i, :]
        b = phi[:, j, :]
        base = sign * (h[:, i] + h[:, j])

        cg = np.cos(grid_t)[:, None, None]
        sg = np.sin(grid_t)[:, None, None]
        fg = sign * (
            hfun(cg * a[None] + sg * (w * b)[None])
            + hfun(cg * b[None] - sg * (np.conj(w) * a)[None])
        )
        gbest = np.argmin(fg, axis=0)
        fgrid = fg[gbest, ridx]
        better = fgrid < base
        tc = np.where(better, grid_t[gbest], 0.0)
        fc = np.where(better, fgrid, base)

        lo = tc - np.pi / grid_n
        hi = tc + np.pi / grid_n
        x1 = hi - _INVPHI * (hi - lo)
        x2 = lo + _INVPHI * (hi - lo)
        f1 = sign * pair_obj(a, b, x1, w)
        f2 = sign * pair_obj(a, b, x2, w)
        for _it in range(gs_iters):
            take1 = f1 <= f2
            hi_n = np.where(take1, x2, hi)
            lo_n = np.where(take1, lo, x1)
            x1_cand = hi_n - _INVPHI * (hi_n - lo_n)
            x2_cand = lo_n + _INVPHI * (hi_n - lo_n)
            xn = np.where(take1, x1_cand, x2_cand)
            fn = sign * pair_obj(a, b, xn, w)
            x1, x2, f1, f2 = (
                np.where(take1, x1_cand, x2),
                np.where(take1, x1, x2_cand),
                np.where(take1, fn, f2),
                np.where(take1, f1, fn),
            )
            lo, hi = lo_n, hi_n
        tm = 0.5 * (lo + hi)
        fm = sign * pair_obj(a, b, tm, w)
        tstar = np.where(fm < fc, tm, tc)
        fstar = np.minimum(fm, fc)
        improve = base - fstar
        mask = improve > 0.0

        th_apply = np.where(mask, tstar, 0.0)
        c1 = np.cos(th_apply)[:, None]
        s1 = np.sin(th_apply)[:, None]
        an = c1 * a + s1 * (w * b)
        bn = c1 * b - s1 * (np.conj(w) * a)
        phi[:, i, :] = an
        phi[:, j, :] = bn
        h[:, i] = hfun(an)
        h[:, j] = hfun(bn)
        cycle_gain += np.where(mask, improve, 0.0)

        combo += 1
        if combo == cycle_len:
            combo = 0
            converged = cycle_gain <= cycle_tol
            if np.all(converged):
                break
            cycle_gain[:] = 0.0
    return h.sum(axis=1), converged


if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _eigvals_small(a):  # pragma: no cover - compiled
        n = a.shape[0]
        fro = 0.0
        for i in range(n):
            for j in range(n):
                fro += a[i, j].real ** 2 + a[i, j].imag ** 2
        scale = max(1.0, np.sqrt(fro))
        for _sweep in range(60):
            off = 0.0
            for i in range(n):
                for j in range(n):
                    if i != j:
                        off += a[i, j].real ** 2 + a[i, j].imag ** 2
            if np.sqrt(off) <= 1e-14 * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    r = abs(apq)
                    if r <= 1e-18 * scale:
                        continue
                    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    if tau >= 0.0:
                        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                    else:
                        t = 1.0 / (tau - np.sqrt(1.0 + tau * tau))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    ph = apq / r
                    phc = np.conj(ph)
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * phc * akq
                        a[k, q] = s * ph * akp + c * akq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * ph * aqk
                        a[q, k] = s * phc * apk + c * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
        out = np.empty(n)
        for i in range(n):
            out[i] = a[i, i].real
        return out

    @njit(cache=True)
    def _h_row(row, d_a, d_b, code):  # pragma: no cover - compiled
        d = row.shape[0]
        p = 0.0
        for k in range(d):
            p += row[k].real ** 2 + row[k].imag ** 2
        if code == 0:
            g2 = 0.0
            for i in range(d_a):
                for j in range(i, d_a):
                    re = 0.0
                    im = 0.0
                    for b in range(d_b):
                        x = row[i * d_b + b]
                        y = row[j * d_b + b]
                        re += x.real * y.real + x.imag * y.imag
                        im += x.imag * y.real - x.real * y.imag
                    w2 = re * re + im * im
                    if i == j:
                        g2 += w2
                    else:
                        g2 += 2.0 * w2
            val = 2.0 * (p * p - g2)
            if val <= 0.0:
                return 0.0
            return np.sqrt(val)
        k = d_a if d_a < d_b else d_b
        if k == 1:
            return 0.0
        g = np.zeros((k, k), dtype=np.complex128)
        if d_a <= d_b:
            for i in range(d_a):
                for j in range(d_a):
                    acc = 0.0 + 0.0j
                    for b in range(d_b):
                        acc += row[i * d_b + b] * np.conj(row[j * d_b + b])
                    g[i, j] = acc
        else:
            for i in range(d_b):
                for j in range(d_b):
                    acc = 0.0 + 0.0j
                    for a2 in range(d_a):
                        acc += np.conj(row[a2 * d_b + i]) * row[a2 * d_b + j]
                    g[i, j] = acc
        if k == 2:
            det = g[0, 0].real * g[1, 1].real - (
                g[0, 1].real ** 2 + g[0, 1].imag ** 2
            )
            if det <= 0.0:
                return 0.0
            return 2.0 * np.sqrt(det)
        lam = _eigvals_small(g)
        s = 0.0
        for idx in range(k):
            if lam[idx] > 0.0:
                s += np.sqrt(lam[idx])
        return s * s - p

    @njit(cache=True)
    def _pair_obj(phi, i, j, c, s, w, tmp_i, tmp_j, d_a, d_b, code):  # pragma: no cover
        d = phi.shape[1]
        wc = np.conj(w)
        for k in range(d):
            a = phi[i, k]
            b = phi[j, k]
            tmp_i[k] = c * a + s * (w * b)
            tmp_j[k] = c * b - s * (wc * a)
        return _h_row(tmp_i, d_a, d_b, code) + _h_row(tmp_j, d_a, d_b, code)

    @njit(cache=True)
    def _refine_numba(
        phi, pairs_i, pairs_j, d_a, d_b, code, sign, steps, grid_n, gs_iters, cycle_tol
    ):  # pragma: no cover - compiled
        m, d = phi.shape
        h = np.empty(m)
        for i in range(m):
            h[i] = _h_row(phi[i], d_a, d_b, code)
        cycle_len = 2 * pairs_i.shape[0]
        tmp_i = np.empty(d, np.complex128)
        tmp_j = np.empty(d, np.complex128)
        invphi = (np.sqrt(5.0) - 1.0) / 2.0
        combo = 0
        cycle_gain = 0.0
        converged = False
        for _step in range(steps):
            pidx = combo // 2
            fam = combo - 2 * pidx
            i = pairs_i[pidx]
            j = pairs_j[pidx]
            w = 1.0 + 0.0j if fam == 0 else 0.0 + 1.0j
            base = sign * (h[i] + h[j])
            best_t = 0.0
            best_f = base
            for g in range(grid_n):
                th = -np.pi / 2.0 + np.pi * (g + 0.5) / grid_n
                f = sign * _pair_obj(
                    phi, i, j, np.cos(th), np.sin(th), w, tmp_i, tmp_j, d_a, d_b, code
                )
                if f < best_f:
                    best_f = f
                    best_t = th
            lo = best_t - np.pi / grid_n
            hi = best_t + np.pi / grid_n
            x1 = hi - invphi * (hi - lo)
            x2 = lo + invphi * (hi - lo)
            f1 = sign * _pair_obj(
                phi, i, j, np.cos(x1), np.sin(x1), w, tmp_i, tmp_j, d_a, d_b, code
            )
            f2 = sign * _pair_obj(
                phi, i, j, np.cos(x2), np.sin(x2), w, tmp_i, tmp_j, d_a, d_b, code
            )
            for _it in range(gs_iters):
                if f1 <= f2:
                    hi = x2
                    x2 = x1
                    f2 = f1
                    x1 = hi - invphi * (hi - lo)
                    f1 = sign * _pair_obj(
                        phi, i, j, np.cos(x1), np.sin(x1), w, tmp_i, tmp_j, d_a, d_b, code
                    )
                else:
                    lo = x1
                    x1 = x2
                    f1 = f2
                    x2 = lo + invphi * (hi - lo)
                    f2 = sign * _pair_obj(
                        phi, i, j, np.cos(x2), np.sin(x2), w, tmp_i, tmp_j, d_a, d_b, code
                    )
            tm = 0.5 * (lo + hi)
            fm = sign * _pair_obj(
                phi, i, j, np.cos(tm), np.sin(tm), w, tmp_i, tmp_j, d_a, d_b, code
            )
            if fm < best_f:
                best_f = fm
                best_t = tm
            if best_f < base:
                c = np.cos(best_t)
                s = np.sin(best_t)
                wc = np.conj(w)
                for k in range(d):
                    a = phi[i, k]
                    b = phi[j, k]
                    phi[i, k] = c * a + s * (w * b)
                    phi[j, k] = c * b - s * (wc * a)
                h[i] = _h_row(phi[i], d_a, d_b, code)
                h[j] = _h_row(phi[j], d_a, d_b, code)
                cycle_gain += base - best_f
            combo += 1
            if combo == cycle_len:
                combo = 0
                converged = cycle_gain <= cycle_tol
                if converged:
                    break
                cycle_gain = 0.0
        total = 0.0
        for i in range(m):
            total += h[i]
        return total, converged


def run_roof(
    weighted_vectors: np.ndarray,
    m: int,
    d_a: int,
    d_b: int,
    sign: float,
    restarts: int,
    steps: int,
    seed: int,
    rng_factory,
    code: int | None = None,
    hfun=None,
) -> tuple[float, np.ndarray, bool]:
    """Optimize the decomposition average over `restarts` starting isometries.

    Restart 0 is the deterministic identity embedding (the eigen-ensemble
    itself), so the minimized value never exceeds the eigen-ensemble average
    and the maximized value never falls below it. Returns the best restart's
    (value, Phi rows, converged flag).
    """
    r, d = weighted_vectors.shape
    if m < r:
        raise ValueError(f"decomposition size {m} below state rank {r}")
    phis = np.zeros((restarts, m, d), dtype=np.complex128)
    phis[0, :r, :] = weighted_vectors
    for t in range(1, restarts):
        u = haar_isometry(m, r, rng_factory(seed, t))
        phis[t] = u @ weighted_vectors
    if m < 2:
        if code is not None:
            vals = h_rows_numpy(phis[:, 0, :], d_a, d_b, code)
        else:
            vals = hfun(phis[:, 0, :])
        best = int(np.argmin(sign * vals))
        return float(vals[best]), phis[best], True

    pi, pj = np.array(
        [(i, j) for i in range(m - 1) for j in range(i + 1, m)], dtype=np.int64
    ).T.reshape(2, -1)

    if code is not None and USE_NUMBA:
        values = np.empty(restarts)
        conv = np.zeros(restarts, dtype=bool)
        for t in range(restarts):
            values[t], conv[t] = _refine_numba(
                phis[t], pi, pj, d_a, d_b, code, sign, steps, GRID_N, GS_ITERS, CYCLE_TOL
            )
    else:
        if hfun is None:
            hfun = lambda rows: h_rows_numpy(rows, d_a, d_b, code)  # noqa: E731
        values, conv = refine_numpy(phis, pi, pj, hfun, sign, steps)
    best = int(np.argmin(sign * values))
    return float(values[best]), phis[best], bool(conv[best])
