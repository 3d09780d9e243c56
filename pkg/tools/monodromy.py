"""Monodromy solver for the parabolic representation equations.

The overdetermined residual ``R(z)`` of :class:`parabolic.ParabolicProblem`
is squared up with a random matrix ``A``.  The family ``A R(z) = p`` is
parametrized by ``p`` and its incidence variety is the graph of ``A R``, so it
is irreducible and monodromy loops in ``p`` act transitively on the solutions
of a generic fibre.  Starting from one point ``(z0, A R(z0))`` the loops
collect the whole fibre, and a straight-line parameter homotopy carries every
solution to ``p = 0``.
"""

from __future__ import annotations

import numpy as np

H_FD = 1e-7


class Tracker:
    """Batched predictor-corrector path tracking for ``A R(z) - p(s) = 0``."""

    def __init__(self, residual, n_vars: int, n_res: int, rng: np.random.Generator):
        self.residual = residual
        self.m = n_vars
        self.A = (rng.normal(size=(n_vars, n_res)) + 1j * rng.normal(size=(n_vars, n_res))) / np.sqrt(2 * n_res)

    def F(self, z):
        with np.errstate(all="ignore"):
            return self.residual(z) @ self.A.T

    def jac(self, z, f0=None):
        f0 = self.F(z) if f0 is None else f0
        out = np.empty((z.shape[0], self.m, self.m), dtype=complex)
        for k in range(self.m):
            dz = np.zeros(self.m, complex)
            dz[k] = H_FD * np.maximum(1.0, 0.0)
            out[:, :, k] = (self.F(z + dz) - f0) / H_FD
        return out

    def track(self, z, p0, p1, max_steps=2000, min_step=1e-9, end_newton=6):
        """Track rows of ``z`` (solutions at ``p0``) to ``p1``; returns (z, ok)."""
        b = z.shape[0]
        z = z.copy()
        s = np.zeros(b)
        ds = np.full(b, 0.02)
        ok = np.ones(b, dtype=bool)
        active = np.ones(b, dtype=bool)
        dp = p1 - p0
        for _ in range(max_steps):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            zi, si, dsi = z[idx], s[idx], np.minimum(ds[idx], 1.0 - s[idx])
            # RK-free Euler predictor with a midpoint refinement
            with np.errstate(all="ignore"):
                j0 = self.jac(zi)
                try:
                    v0 = np.linalg.solve(j0, np.broadcast_to(dp, (idx.size, self.m))[:, :, None])[:, :, 0]
                except np.linalg.LinAlgError:
                    v0 = np.full_like(zi, np.nan)
                zm = zi + 0.5 * dsi[:, None] * v0
                jm = self.jac(zm)
                try:
                    vm = np.linalg.solve(jm, np.broadcast_to(dp, (idx.size, self.m))[:, :, None])[:, :, 0]
                except np.linalg.LinAlgError:
                    vm = np.full_like(zi, np.nan)
                zp = zi + dsi[:, None] * vm
                snew = si + dsi
                target = p0 + snew[:, None] * dp
                # Newton corrector, three steps with a contraction test
                good = np.all(np.isfinite(zp), axis=1)
                prev = None
                for it in range(3):
                    f = self.F(zp) - target
                    jc = self.jac(zp, self.F(zp))
                    try:
                        step = np.linalg.solve(jc, f[:, :, None])[:, :, 0]
                    except np.linalg.LinAlgError:
                        step = np.full_like(zp, np.nan)
                    zp = zp - step
                    nrm = np.linalg.norm(step, axis=1) / (1.0 + np.linalg.norm(zp, axis=1))
                    good &= np.isfinite(nrm)
                    if prev is not None:
                        good &= (nrm <= 0.5 * prev) | (nrm < 1e-11)
                    prev = nrm
                good &= prev < 1e-7
            acc = idx[good]
            rej = idx[~good]
            z[acc] = zp[good]
            s[acc] = snew[good]
            ds[acc] = np.minimum(ds[acc] * 1.6, 0.2)
            ds[rej] *= 0.5
            fail = rej[ds[rej] < min_step]
            ok[fail] = False
            active[fail] = False
            big = acc[np.linalg.norm(z[acc], axis=1) > 1e8]
            ok[big] = False
            active[big] = False
            done = acc[s[acc] >= 1.0 - 1e-14]
            active[done] = False
        ok &= ~active
        # final Newton at p1
        target = np.broadcast_to(p1, z.shape)
        with np.errstate(all="ignore"):
            for _ in range(end_newton):
                f = self.F(z) - target
                try:
                    step = np.linalg.solve(self.jac(z), f[:, :, None])[:, :, 0]
                except np.linalg.LinAlgError:
                    break
                z = np.where(np.isfinite(step), z - step, z)
        ok &= np.all(np.isfinite(z), axis=1)
        return z, ok


def _dedupe(existing: np.ndarray, new: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Rows of ``new`` not within ``tol`` (relative) of ``existing`` or each other."""
    keep = []
    pool = [r for r in existing]
    for r in new:
        scale = 1.0 + np.linalg.norm(r)
        if all(np.linalg.norm(r - q) > tol * scale for q in pool):
            pool.append(r)
            keep.append(r)
    return np.array(keep, dtype=complex).reshape(-1, new.shape[1] if new.ndim == 2 else 0)


def monodromy_solve(residual, n_vars: int, rng: np.random.Generator, stall: int = 4, max_loops: int = 40,
                    max_solutions: int = 4000, log=None):
    """All solutions of ``A R(z) = p*`` for a random ``p*``; returns (tracker, p*, solutions)."""
    z0 = (rng.normal(size=(1, n_vars)) + 1j * rng.normal(size=(1, n_vars))) / np.sqrt(2)
    n_res = residual(z0).shape[1]
    tr = Tracker(residual, n_vars, n_res, rng)
    p_star = tr.F(z0)[0]
    sols = z0.copy()
    quiet = 0
    for loop in range(max_loops):
        scale = np.linalg.norm(p_star)
        p1 = scale * (rng.normal(size=n_vars) + 1j * rng.normal(size=n_vars)) / np.sqrt(2 * n_vars)
        p2 = scale * (rng.normal(size=n_vars) + 1j * rng.normal(size=n_vars)) / np.sqrt(2 * n_vars)
        z, ok = tr.track(sols, p_star, p1)
        z, ok2 = tr.track(z[ok], p1, p2)
        z, ok3 = tr.track(z[ok2], p2, p_star)
        z = z[ok3]
        res = np.linalg.norm(tr.F(z) - p_star, axis=1) / (1 + np.linalg.norm(z, axis=1))
        z = z[res < 1e-8]
        fresh = _dedupe(sols, z)
        if log:
            log(f"  loop {loop}: tracked {len(sols)}, new {len(fresh)}")
        if len(fresh):
            sols = np.vstack([sols, fresh])
            quiet = 0
        else:
            quiet += 1
            if quiet >= stall:
                break
        if len(sols) >= max_solutions:
            break
    return tr, p_star, sols


def solve_target(tr: Tracker, p_star, sols):
    """Track the fibre at ``p*`` to ``p = 0`` with the gamma trick; returns endpoints that tracked."""
    z, ok = tr.track(sols, p_star, np.zeros_like(p_star), max_steps=4000)
    return z[ok]
