"""Build the bundled fixture data from the KnotInfo tables.

Run from the repository root::

    pip install database_knotinfo scipy mpmath
    python tools/make_fixtures.py

Neither ``database_knotinfo`` nor this script is needed at run time.  Outputs:

- ``src/knotvol/data/census.csv``: a uniform random sample of hyperbolic
  knots with at most 12 crossings (PD code, alternating flag, volume).
- ``src/knotvol/data/reps/<name>.rep``: the discrete faithful SL(2, C)
  representation for every census knot where the solver found it.
- ``src/knotvol/data/two_bridge.csv``: 2-bridge knots up to 10 crossings with
  their table fraction ``p/q`` (the determinant is ``p``).
- ``src/knotvol/data/braids.txt``: braid words of the census knots.
- ``tests/fixtures/knotinfo_reference.csv``: published determinant, Alexander
  and Jones polynomials for all of the above, used as test oracles.

Solved representations are cached in ``tools/cache`` so reruns are quick.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import re
import sys
import time
import warnings
from pathlib import Path

import mpmath as mp
import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tools"))

from knotvol.notation import CensusRecord, KnotDiagram, parse_pd, write_census  # noqa: E402
from knotvol.twisted import Sl2Rep, twisted_alexander, validate_rep  # noqa: E402
from parabolic import ParabolicProblem  # noqa: E402

DATA = ROOT / "src" / "knotvol" / "data"
CACHE = ROOT / "tools" / "cache"
REFERENCE = ROOT / "tests" / "fixtures" / "knotinfo_reference.csv"

SEED = 20261016
CENSUS_SIZE = 100
MAX_CROSSINGS = 12
TWO_BRIDGE_MAX = 10


def knotinfo_rows() -> dict:
    import database_knotinfo

    path = Path(database_knotinfo.__file__).parent / "csv_data" / "knotinfo_data_complete.csv"
    csv.field_size_limit(1 << 30)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh, delimiter="|"))
    return {r["name"]: r for r in rows[1:]}  # the first row holds column descriptions


def pd_text(row) -> str:
    body = row["pd_notation"].strip()[2:-2]
    return " ".join(f"X({c})" for c in body.split("],["))


def complex_field(text: str) -> complex:
    re_, im = text.strip()[1:-1].split(",")
    return complex(float(re_), float(im))


def cusp_shape(row) -> complex:
    return complex_field(row["longitude_translation"]) / complex_field(row["meridian_translation"])


def poly_terms(text: str) -> dict[int, int]:
    """Parse KnotInfo's ``2-3*t+ 2*t^2`` / ``t^(-2)-t^(-1)+ 1`` notation."""
    out: dict[int, int] = {}
    for sign, coef, var, exp in re.findall(r"([+-]?)\s*(\d*)\s*\*?\s*(t?)(?:\^\(?(-?\d+)\)?)?", text.replace(" ", "")):
        if not coef and not var:
            continue
        c = int(coef) if coef else 1
        e = (int(exp) if exp else 1) if var else 0
        out[e] = out.get(e, 0) + (-c if sign == "-" else c)
    return {e: c for e, c in out.items() if c}


# -- solving --------------------------------------------------------------------


def find_geometric(d: KnotDiagram, tau_ref: complex, log=print):
    """(problem, parameters) of the parabolic representation with the given cusp shape, or None."""
    cands = [tau_ref, -tau_ref, tau_ref.conjugate(), -tau_ref.conjugate()]

    def near(t, tol):
        return any(abs(t - c) < tol * abs(c) for c in cands)

    base = ParabolicProblem(d)
    options = base.seed_options()[:12]
    rng = np.random.default_rng(SEED)
    for targeted in (False, True):
        for s2 in options[: (4 if targeted else None)]:
            prob = ParabolicProblem(d, s2)
            runs = [dict(tau=c) for c in cands] if targeted else [dict(scale=0.5), dict(scale=1.5)]
            for kw in runs:
                for z in prob.batch_solve(rng, batch=4096, **kw):
                    try:
                        t = prob.cusp_shape(prob.matrices(z))
                    except ValueError:
                        continue
                    if not near(t, 1e-4):
                        continue
                    zz, res = polish(prob, z)
                    if res < 1e-30 and near(complex(mp_cusp_shape(prob, zz)), 1e-8):
                        return prob, zz
    return None


def _mp_parabolic(v):
    p, q = v
    return [[1 - p * q, p * p], [-q * q, 1 + p * q]]


def _mp_vectors(prob: ParabolicProblem, z):
    v = {prob.seeds[0]: (mp.mpc(1), mp.mpc(0)), prob.seeds[1]: (mp.mpc(0), z[0])}
    for i, s in enumerate(prob.seeds[2:]):
        v[s] = (z[1 + 2 * i], z[2 + 2 * i])
    for k, direction in prob.steps:
        a, c, o, sign = prob.cross[k]
        vo = v[o]
        if direction > 0:
            va = v[a]
            om = vo[0] * va[1] - vo[1] * va[0]
            v[c] = (va[0] + sign * om * vo[0], va[1] + sign * om * vo[1])
        else:
            vc = v[c]
            om = vo[0] * vc[1] - vo[1] * vc[0]
            v[a] = (vc[0] - sign * om * vo[0], vc[1] - sign * om * vo[1])
    return v


def _mp_residual(prob, z):
    v = _mp_vectors(prob, z)
    out = []
    for k in prob.checks:
        a, c, o, sign = prob.cross[k]
        vo, va, vc = v[o], v[a], v[c]
        om = vo[0] * va[1] - vo[1] * va[0]
        w = (va[0] + sign * om * vo[0], va[1] + sign * om * vo[1])
        for p, q in ((0, 0), (0, 1), (1, 1)):
            out.append(vc[p] * vc[q] - w[p] * w[q])
    return out


def polish(prob: ParabolicProblem, z: np.ndarray, dps: int = 50):
    """Gauss-Newton refinement in ``dps``-digit arithmetic; returns mp parameters and residual."""
    with mp.workdps(dps):
        zz = [mp.mpc(x) if isinstance(x, mp.mpc) else mp.mpc(complex(x)) for x in z]
        h = mp.mpf(10) ** (-(dps // 2))
        for _ in range(60):
            r = mp.matrix(_mp_residual(prob, zz))
            res = max(abs(x) for x in r)
            if res < mp.mpf(10) ** (-(dps - 8)):
                break
            jac = mp.matrix(len(r), len(zz))
            for k in range(len(zz)):
                zk = list(zz)
                zk[k] += h
                rk = _mp_residual(prob, zk)
                for i in range(len(r)):
                    jac[i, k] = (rk[i] - r[i]) / h
            jh = jac.transpose_conj()
            step = mp.lu_solve(jh * jac, -(jh * r))
            zz = [zz[k] + step[k] for k in range(len(zz))]
        r = _mp_residual(prob, zz)
        return zz, max(abs(x) for x in r)


def mp_cusp_shape(prob: ParabolicProblem, zz):
    """Cusp shape in the gauge where the edge-1 meridian is [[1, 1], [0, 1]]."""
    d = prob.diagram
    with mp.workdps(50):
        v = _mp_vectors(prob, zz)
        under_at = {cr[0]: k for k, cr in enumerate(d.crossings)}
        w = mp.eye(2)
        total = 0
        for e in range(1, d.arc_count + 1):
            k = under_at.get(e)
            if k is None:
                continue
            _, _, o, sign = prob.cross[k]
            p, q = v[o]
            n = mp.matrix([[-p * q, p * p], [-q * q, p * q]])
            w = (mp.eye(2) + sign * n) * w
            total += sign
        lam = w * mp.matrix([[1, -total], [0, 1]])
        return lam[0, 1] / lam[0, 0]


def balancing_conjugator(vectors) -> tuple:
    """``(a, b)`` of ``P = [[a, a b], [0, 1/a]]`` minimizing the summed squared norms of the conjugated matrices.

    Conjugating the parabolic ``M(v)`` by ``P`` gives ``M(P v)``.  Unitary
    conjugation leaves Frobenius norms alone, so this upper triangular
    family covers every conjugacy up to norm.  Large entries cost digits in
    the twisted determinant; this keeps them as small as the conjugacy class
    allows.
    """
    from scipy.optimize import minimize

    v = np.array([[complex(x) for x in vec] for vec in vectors])

    def cost(x):
        a, b = np.exp(x[0]), x[1] + 1j * x[2]
        p = a * (v[:, 0] + b * v[:, 1])
        q = v[:, 1] / a
        m = np.stack([1 - p * q, p * p, -q * q, 1 + p * q], axis=1)
        return float(np.sum(np.abs(m) ** 2))

    best = minimize(cost, np.zeros(3), method="Nelder-Mead", options=dict(xatol=1e-10, fatol=1e-12, maxiter=20000))
    return mp.exp(mp.mpf(best.x[0])), mp.mpc(mp.mpf(best.x[1]), mp.mpf(best.x[2]))


BALANCE_ABOVE = 100.0


def edge_matrices_mp(prob: ParabolicProblem, zz) -> dict:
    """Edge matrices at 50 digits, conjugated to balanced form when some entry exceeds ``BALANCE_ABOVE``."""
    v = _mp_vectors(prob, zz)
    big = max(abs(x) for vec in v.values() for x in vec) ** 2
    if big > BALANCE_ABOVE:
        a, b = balancing_conjugator(list(v.values()))
        v = {k: (a * (p + b * q), q / a) for k, (p, q) in v.items()}
    return {e: _mp_parabolic(v[prob.arc_of[e]]) for e in range(1, prob.diagram.arc_count + 1)}


def write_rep_file(path: Path, name: str, mats: dict, digits: int = 25) -> None:
    with open(path, "w") as fh:
        fh.write(f"# discrete faithful representation of {name}, meridians parabolic with trace +2\n")
        fh.write(f"knot {name} arcs {len(mats)} tolerance 1e-8\n")
        for e in sorted(mats):
            m = mats[e]
            vals = []
            for z in (m[0][0], m[0][1], m[1][0], m[1][1]):
                vals += [mp.nstr(z.real, digits, min_fixed=-1, max_fixed=-1), mp.nstr(z.imag, digits, min_fixed=-1, max_fixed=-1)]
            fh.write(f"arc {e} " + " ".join(vals) + "\n")


def solve_knot(name: str, row, log=print) -> dict:
    cache = CACHE / f"{name}.json"
    if cache.exists():
        return json.loads(cache.read_text())
    d = parse_pd(pd_text(row))
    t0 = time.time()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with np.errstate(all="ignore"):
            found = find_geometric(d, cusp_shape(row), log)
    out = {"name": name, "seconds": round(time.time() - t0, 1), "found": found is not None}
    if found:
        prob, zz = found
        _, res = polish(prob, zz)
        out.update(
            second_seed=prob.seeds[1],
            params=[[mp.nstr(x.real, 45), mp.nstr(x.imag, 45)] for x in zz],
            residual=float(res),
            cusp=mp.nstr(mp_cusp_shape(prob, zz), 15),
        )
    CACHE.mkdir(parents=True, exist_ok=True)
    cache.write_text(json.dumps(out, indent=1))
    return out


# -- assembly -------------------------------------------------------------------


def figure_eight_volume() -> str:
    # two regular ideal tetrahedra: 2 * 3 * Cl2(pi / 3) / 2 = 3 * Cl2(2 pi / 3)
    with mp.workdps(30):
        return mp.nstr(3 * mp.clsin(2, 2 * mp.pi / 3), 13)


def census_sample(rows) -> list[str]:
    hyper = [
        n for n, r in rows.items()
        if r["crossing_number"].isdigit() and 3 <= int(r["crossing_number"]) <= MAX_CROSSINGS
        and r["geometric_type"] == "hyperbolic"
    ]
    hyper.sort(key=lambda n: (int(rows[n]["crossing_number"]), n))
    return random.Random(SEED).sample(hyper, len(hyper))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=CENSUS_SIZE)
    ap.add_argument("--solve-only", action="store_true")
    ap.add_argument("--partial", action="store_true", help="write outputs for the knots solved so far")
    args = ap.parse_args(argv)
    rows = knotinfo_rows()
    order = census_sample(rows)
    chosen = order[: args.size]
    if "4_1" not in chosen:
        chosen.append("4_1")
    if args.partial:
        write_outputs(rows, [n for n in chosen if (CACHE / f"{n}.json").exists()])
        return
    for i, name in enumerate(chosen):
        r = solve_knot(name, rows[name])
        print(f"[{i + 1}/{len(chosen)}] {name}: found={r['found']} ({r['seconds']} s)", flush=True)
    if args.solve_only:
        return
    write_outputs(rows, chosen)


def write_outputs(rows, chosen):
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "reps").mkdir(exist_ok=True)
    for old in (DATA / "reps").glob("*.rep"):
        old.unlink()
    chosen = sorted(chosen, key=lambda n: (int(rows[n]["crossing_number"]), n))
    records = []
    n_reps = 0
    for name in chosen:
        row = rows[name]
        d = parse_pd(pd_text(row))
        info = json.loads((CACHE / f"{name}.json").read_text())
        rep_path = ""
        if info["found"]:
            prob = ParabolicProblem(d, info["second_seed"])
            with mp.workdps(50):
                zz = [mp.mpc(mp.mpf(a), mp.mpf(b)) for a, b in info["params"]]
                mats = edge_matrices_mp(prob, zz)
            path = DATA / "reps" / f"{name}.rep"
            write_rep_file(path, name, mats)
            rep = Sl2Rep({e: np.array([[complex(x) for x in rw] for rw in m]) for e, m in mats.items()}, 1e-8, name)
            validate_rep(rep, d)
            twisted_alexander(d, rep)  # must divide cleanly
            rep_path = f"reps/{name}.rep"
            n_reps += 1
        volume = figure_eight_volume() if name == "4_1" else row["volume"]
        records.append(
            CensusRecord(name, int(row["crossing_number"]), row["alternating"] == "Y", float(volume), d, rep_path)
        )
    with open(DATA / "census.csv", "w", newline="") as fh:
        fh.write("# Hyperbolic knots with at most 12 crossings: a uniform random sample of the\n")
        fh.write("# KnotInfo table (PD codes, alternating flags and volumes as published there).\n")
        fh.write("# rep_path points at the discrete faithful representation where one was found.\n")
        write_census(records, fh)
    # braids
    with open(DATA / "braids.txt", "w") as fh:
        fh.write("# name: strands: letters (KnotInfo braid representatives)\n")
        for name in chosen:
            word = re.findall(r"-?\d+", rows[name]["braid_notation"].split(";")[0])
            strands = int(rows[name]["braid_index"])
            fh.write(f"{name}: {strands}: {' '.join(word)}\n")
    # 2-bridge knots
    two_bridge = sorted(
        (n for n, r in rows.items()
         if r["crossing_number"].isdigit() and 3 <= int(r["crossing_number"]) <= TWO_BRIDGE_MAX
         and r["two_bridge_notation"].strip()),
        key=lambda n: (int(rows[n]["crossing_number"]), int(n.split("_")[1])),
    )
    with open(DATA / "two_bridge.csv", "w", newline="") as fh:
        fh.write("# 2-bridge knots up to 10 crossings with their table fractions p/q (KnotInfo)\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "p", "q", "pd"])
        for n in two_bridge:
            p, q = re.findall(r"\d+", rows[n]["two_bridge_notation"])
            w.writerow([n, p, q, pd_text(rows[n])])
    # reference polynomials
    REFERENCE.parent.mkdir(parents=True, exist_ok=True)
    with open(REFERENCE, "w", newline="") as fh:
        fh.write("# Published invariants from KnotInfo; polynomials as 'exponent:coefficient' lists\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "determinant", "alexander", "jones"])
        for n in sorted(set(chosen) | set(two_bridge), key=lambda n: (int(rows[n]["crossing_number"]), n)):
            al = poly_terms(rows[n]["alexander_polynomial"])
            jo = poly_terms(rows[n]["jones_polynomial"])
            w.writerow([
                n, rows[n]["determinant"],
                " ".join(f"{e}:{c}" for e, c in sorted(al.items())),
                " ".join(f"{e}:{c}" for e, c in sorted(jo.items())),
            ])
    print(f"census {len(records)} knots, {n_reps} representations, {len(two_bridge)} 2-bridge knots")


if __name__ == "__main__":
    main()
