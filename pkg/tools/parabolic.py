"""Numerical solver for parabolic SL(2, C) representations of a knot group.

Used offline to build the representation fixtures; the package itself only
reads representation files.

Every Wirtinger generator of a hyperbolic knot maps to a parabolic element
under the holonomy, so each arc carries ``M(v) = I + v v^T J`` for a vector
``v`` in C^2 (defined up to sign).  Since ``g M(v) g^-1 = M(g v)``, the
crossing relations propagate vectors from a few seed arcs to the whole
diagram.  The remaining crossings give polynomial equations in the seed
parameters, solved by Levenberg-Marquardt from random starts.  The discrete
faithful representation is picked out among the solutions by its cusp shape.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import least_squares

from knotvol.alexander import wirtinger
from knotvol.notation import KnotDiagram

J = np.array([[0, 1], [-1, 0]], dtype=complex)


def parabolic(v: np.ndarray) -> np.ndarray:
    return np.eye(2, dtype=complex) + np.outer(v, v) @ J


def _inv(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


class ParabolicProblem:
    def __init__(self, d: KnotDiagram, second_seed: int | None = None):
        self.diagram = d
        self.arc_of = wirtinger(d).arc_of()
        self.arcs = sorted(set(self.arc_of.values()))
        self.cross = []  # (incoming under arc, outgoing under arc, over arc, sign)
        for k, (a, _, c, _) in enumerate(d.crossings):
            over_in, _ = d.over_in_out(k)
            self.cross.append((self.arc_of[a], self.arc_of[c], self.arc_of[over_in], d.sign(k)))
        self._plan(second_seed)

    def _closure(self, seeds):
        known = set(seeds)
        steps = []
        changed = True
        while changed:
            changed = False
            for k, (a, c, o, _) in enumerate(self.cross):
                if o not in known:
                    continue
                if a in known and c not in known:
                    steps.append((k, +1))
                    known.add(c)
                    changed = True
                elif c in known and a not in known:
                    steps.append((k, -1))
                    known.add(a)
                    changed = True
        return known, steps

    def seed_options(self) -> list[int]:
        """Second seeds ordered by how much of the diagram they determine together with the first."""
        s1 = self.arc_of[1]
        return sorted((g for g in self.arcs if g != s1), key=lambda g: -len(self._closure([s1, g])[0]))

    def _plan(self, second_seed=None):
        best = None
        s1 = self.arc_of[1]  # the edge-1 meridian is put in standard position
        for s2 in self.arcs:
            if s2 == s1 or (second_seed is not None and s2 != second_seed):
                continue
            known, _ = self._closure([s1, s2])
            if best is None or len(known) > best[0]:
                best = (len(known), [s1, s2])
        seeds = best[1]
        while True:
            known, steps = self._closure(seeds)
            if len(known) == len(self.arcs):
                break
            nxt = max(
                (g for g in self.arcs if g not in known),
                key=lambda g: len(self._closure(seeds + [g])[0]),
            )
            seeds.append(nxt)
        used = {k for k, _ in steps}
        self.seeds = seeds
        self.steps = steps
        self.checks = [k for k in range(len(self.cross)) if k not in used]
        self.n_params = 1 + 2 * (len(seeds) - 2)

    def vectors(self, z: np.ndarray) -> dict:
        v = {self.seeds[0]: np.array([1, 0], dtype=complex), self.seeds[1]: np.array([0, z[0]], dtype=complex)}
        for i, s in enumerate(self.seeds[2:]):
            v[s] = np.array([z[1 + 2 * i], z[2 + 2 * i]], dtype=complex)
        for k, direction in self.steps:
            a, c, o, sign = self.cross[k]
            x = parabolic(v[o])
            if sign < 0:
                x = _inv(x)
            if direction > 0:
                v[c] = x @ v[a]
            else:
                v[a] = _inv(x) @ v[c]
        return v

    def residual(self, z: np.ndarray) -> np.ndarray:
        v = self.vectors(z)
        out = []
        for k in self.checks:
            a, c, o, sign = self.cross[k]
            x = parabolic(v[o])
            if sign < 0:
                x = _inv(x)
            out.append((parabolic(v[c]) - x @ parabolic(v[a]) @ _inv(x)).ravel())
        return np.concatenate(out) if out else np.zeros(0, dtype=complex)

    def matrices(self, z: np.ndarray) -> dict:
        """Matrices indexed by PD edge label."""
        v = self.vectors(z)
        return {e: parabolic(v[self.arc_of[e]]) for e in range(1, self.diagram.arc_count + 1)}

    def solve(self, rng: np.random.Generator, starts: int = 200, scale: float = 1.5):
        """Distinct nonabelian solutions found from random starts, as parameter vectors."""
        m = self.n_params

        def f(x):
            r = self.residual(x[:m] + 1j * x[m:])
            return np.concatenate([r.real, r.imag])

        found = []
        for _ in range(starts):
            x0 = rng.normal(scale=scale, size=2 * m)
            try:
                sol = least_squares(f, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400 * m)
            except (ValueError, np.linalg.LinAlgError):
                continue
            z = sol.x[:m] + 1j * sol.x[m:]
            if not np.all(np.isfinite(z)) or np.max(np.abs(f(sol.x)), initial=0.0) > 1e-10:
                continue
            if abs(z[0]) < 1e-6:
                continue  # abelian
            yield z

    # -- batched solver -----------------------------------------------------

    def batch_vectors(self, z: np.ndarray) -> dict:
        """Arc vectors for a batch of parameter rows ``z`` of shape (B, n_params)."""
        b = z.shape[0]
        v = {
            self.seeds[0]: np.stack([np.ones(b, complex), np.zeros(b, complex)], axis=1),
            self.seeds[1]: np.stack([np.zeros(b, complex), z[:, 0]], axis=1),
        }
        for i, s in enumerate(self.seeds[2:]):
            v[s] = z[:, 1 + 2 * i : 3 + 2 * i]
        for k, direction in self.steps:
            a, c, o, sign = self.cross[k]
            vo = v[o]
            if direction > 0:
                v[c] = v[a] + (sign * _omega(vo, v[a]))[:, None] * vo
            else:
                v[a] = v[c] - (sign * _omega(vo, v[c]))[:, None] * vo
        return v

    def batch_residual(self, z: np.ndarray, scaled: bool = False) -> np.ndarray:
        """``v_c (x) v_c - w (x) w`` at the check crossings, shape (B, 3 * checks).

        The unscaled residual is holomorphic in ``z``, which the finite
        difference Jacobian relies on; the scaled one is for acceptance.
        """
        v = self.batch_vectors(z)
        out = []
        for k in self.checks:
            a, c, o, sign = self.cross[k]
            vo, vc = v[o], v[c]
            w = v[a] + (sign * _omega(vo, v[a]))[:, None] * vo
            scale = 1.0 + np.sum(np.abs(vc) ** 2, axis=1) + np.sum(np.abs(w) ** 2, axis=1) if scaled else 1.0
            for p, q in ((0, 0), (0, 1), (1, 1)):
                out.append((vc[:, p] * vc[:, q] - w[:, p] * w[:, q]) / scale)
        return np.stack(out, axis=1)

    def batch_longitude(self, z: np.ndarray) -> np.ndarray:
        """Longitude matrices, shape (B, 2, 2), with the edge-1 meridian at ``[[1, 1], [0, 1]]``."""
        d = self.diagram
        v = self.batch_vectors(z)
        b = z.shape[0]
        under_at = {cr[0]: k for k, cr in enumerate(d.crossings)}
        w = np.broadcast_to(np.eye(2, dtype=complex), (b, 2, 2)).copy()
        total = 0
        for e in range(1, d.arc_count + 1):
            k = under_at.get(e)
            if k is None:
                continue
            _, _, o, sign = self.cross[k]
            vo = v[o]
            n = np.einsum("bi,bj->bij", vo, vo) @ J
            w = (np.eye(2) + sign * n) @ w
            total += sign
        mu_pow = np.array([[1, -total], [0, 1]], dtype=complex)
        return w @ mu_pow

    def batch_cusp_residual(self, z: np.ndarray, tau: complex) -> np.ndarray:
        lam = self.batch_longitude(z)
        return np.stack(
            [lam[:, 1, 0], lam[:, 0, 1] - tau * lam[:, 0, 0], lam[:, 0, 0] - lam[:, 1, 1]], axis=1
        )

    def batch_solve(
        self,
        rng: np.random.Generator,
        batch: int = 4096,
        iters: int = 80,
        scale: float | str = 1.5,
        tau: complex | None = None,
        z0: np.ndarray | None = None,
        accept: float = 1e-16,
    ):
        """Damped complex Gauss-Newton from ``batch`` random starts; converged nonabelian rows.

        With ``tau`` the cusp-shape equations are added and the result is
        polished on the representation equations alone.
        """
        m = self.n_params
        if z0 is None:
            if scale == "log":  # magnitudes log-uniform in [0.1, 10]
                z = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=(batch, m)) + 2j * np.pi * rng.random((batch, m)))
            else:
                z = (rng.normal(size=(batch, m)) + 1j * rng.normal(size=(batch, m))) * scale / np.sqrt(2)
        else:
            z = z0.copy()
            batch = z.shape[0]
        if tau is not None:
            def fun(zz):
                return np.concatenate([self.batch_residual(zz), self.batch_cusp_residual(zz, tau)], axis=1)
            z = self._gauss_newton(fun, z, iters)
            return self.batch_solve(rng, iters=30, z0=z, accept=accept)
        z = self._gauss_newton(self.batch_residual, z, iters)
        with np.errstate(all="ignore"):
            final = np.sum(np.abs(self.batch_residual(z, scaled=True)) ** 2, axis=1)
        ok = (final < accept) & (np.abs(z[:, 0]) > 1e-6) & np.all(np.isfinite(z), axis=1)
        return z[ok]

    @staticmethod
    def _gauss_newton(fun, z, iters):
        m = z.shape[1]
        batch = z.shape[0]
        lam = np.full(batch, 1e-3)
        with np.errstate(all="ignore"):
            r = fun(z)
        cost = np.sum(np.abs(r) ** 2, axis=1)
        cost[~np.isfinite(cost)] = np.inf
        h = 1e-7
        eye = np.eye(m)
        for _ in range(iters):
            jac = np.empty(r.shape + (m,), dtype=complex)
            for k in range(m):
                dz = np.zeros(m, complex)
                dz[k] = h
                with np.errstate(all="ignore"):
                    jac[:, :, k] = (fun(z + dz) - r) / h
            jh = np.conj(np.transpose(jac, (0, 2, 1)))
            a = jh @ jac
            g = (jh @ r[:, :, None])[:, :, 0]
            diag = np.real(np.einsum("bii->bi", a))
            a = a + (lam[:, None] * (diag + 1e-12))[:, :, None] * eye
            with np.errstate(all="ignore"):
                try:
                    step = np.linalg.solve(a, -g[:, :, None])[:, :, 0]
                except np.linalg.LinAlgError:
                    step = np.zeros_like(z)
                z_new = z + step
                r_new = fun(z_new)
                c_new = np.sum(np.abs(r_new) ** 2, axis=1)
            better = np.isfinite(c_new) & (c_new < cost)
            z[better], r[better], cost[better] = z_new[better], r_new[better], c_new[better]
            lam = np.where(better, lam / 3, lam * 4)
        return z

    def cusp_residual(self, z: np.ndarray, tau: complex) -> np.ndarray:
        """Zero when the longitude is +-[[1, tau], [0, 1]] (the meridian is [[1, 1], [0, 1]])."""
        lam = self.longitude(self.matrices(z))
        r = np.array([lam[1, 0], lam[0, 1] - tau * lam[0, 0], lam[0, 0] - lam[1, 1]])
        return r / (1.0 + np.linalg.norm(lam))

    def solve_geometric(self, tau_ref: complex, rng: np.random.Generator, starts: int = 40, scale: float = 1.5):
        """Solution whose cusp shape is one of ``+-tau_ref``, ``+-conj(tau_ref)``.

        Phase one adds the (rounded) cusp shape as extra equations, phase two
        polishes on the representation equations alone.
        """
        m = self.n_params
        cands = [tau_ref, -tau_ref, tau_ref.conjugate(), -tau_ref.conjugate()]

        def split(r):
            return np.concatenate([r.real, r.imag])

        def polish(x0):
            sol = least_squares(
                lambda x: split(self.residual(x[:m] + 1j * x[m:])),
                x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200 * m,
            )
            return sol.x[:m] + 1j * sol.x[m:], np.max(np.abs(split(self.residual(sol.x[:m] + 1j * sol.x[m:]))))

        for _ in range(starts):
            x0 = rng.normal(scale=scale, size=2 * m)
            for tau in cands:
                try:
                    sol = least_squares(
                        lambda x: split(np.concatenate([self.residual(x[:m] + 1j * x[m:]), self.cusp_residual(x[:m] + 1j * x[m:], tau)])),
                        x0, method="lm", max_nfev=200 * m,
                    )
                except (ValueError, np.linalg.LinAlgError):
                    continue
                if not np.all(np.isfinite(sol.x)) or np.max(np.abs(sol.fun)) > 1e-5:
                    continue
                z, res = polish(sol.x)
                if res > 1e-12 or abs(z[0]) < 1e-6:
                    continue
                got = self.cusp_shape(self.matrices(z))
                if abs(got - tau) < 1e-7 * max(1.0, abs(tau)):
                    return z, got
        return None

    def longitude(self, mats: dict) -> np.ndarray:
        """Preferred longitude based at edge 1 (commutes with the edge-1 meridian)."""
        d = self.diagram
        under_at = {cr[0]: k for k, cr in enumerate(d.crossings)}
        w = np.eye(2, dtype=complex)
        total = 0
        for e in range(1, d.arc_count + 1):
            k = under_at.get(e)
            if k is None:
                continue  # edge e ends on an over-pass
            over_in, _ = d.over_in_out(k)
            s = d.sign(k)
            x = mats[over_in]
            w = (x if s > 0 else _inv(x)) @ w
            total += s
        mu = mats[1]
        power = np.linalg.matrix_power(mu if total < 0 else _inv(mu), abs(total))
        return w @ power

    def cusp_shape(self, mats: dict) -> complex:
        mu = mats[1]
        lam = self.longitude(mats)
        if np.linalg.norm(mu @ lam - lam @ mu) > 1e-6 * max(1.0, np.linalg.norm(lam)):
            raise ValueError("longitude does not commute with meridian")
        # conjugate so that mu = [[1, 1], [0, 1]]
        x, y = _fixed_vector(mu)
        g = np.array([[1 / x, 0], [-y, x]]) if abs(x) > 1e-9 else np.array([[0, 1 / y], [-y, 0]])
        m2 = g @ mu @ _inv(g)
        l2 = g @ lam @ _inv(g)
        return complex((l2[0, 1] / l2[0, 0]) / (m2[0, 1] / m2[0, 0]))


def _omega(v, w):
    """Row-wise ``v^T J w``."""
    return v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]


def _fixed_vector(mu):
    """Vector v with mu = I + v v^T J."""
    # mu - I = v v^T J  =>  (mu - I) J^-1 = v v^T
    s = (mu - np.eye(2)) @ np.linalg.inv(J)
    if abs(s[0, 0]) >= abs(s[1, 1]):
        x = np.sqrt(s[0, 0])
        y = s[1, 0] / x
    else:
        y = np.sqrt(s[1, 1])
        x = s[0, 1] / y
    return x, y
