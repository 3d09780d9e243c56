"""Command line driver: census in, invariant tables and plot data out.

Subcommands
-----------
invariants   compute the per-knot invariants and write ``invariants.csv``
report       aggregate ``invariants.csv`` into the three statistics tables
figures      write the scatter data (invariant against volume) as TSV files
sw <knot>    Silver-Williams convergence table for one census knot
mahler <f>   Mahler measures of the polynomials listed in a file
twisted <k>  normalized twisted Alexander polynomial of one knot

Exit status is 0 on success, 1 when the census cannot be processed and 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .alexander import alexander_poly, silver_williams_sequence
from .errors import ConfigError, DegenerateSample, EmptyPopulation, KnotvolError, UnknownKnot
from .jones import jones_poly
from .mahler import log_mahler, mahler_quadrature, mahler_roots
from .notation import CensusRecord, KnotDiagram, parse_census, parse_pd
from .polyring import CxLaurentPoly
from .stats import report as stats_report
from .twisted import load_rep, twisted_alexander

log = logging.getLogger("knotvol")

INVARIANTS = (
    "ln_det",
    "ln_mahler_alex",
    "ln_T_minus1",
    "ln_T_plus1",
    "ln_mahler_T",
    "ln_mahler_jones",
)
TWISTED = frozenset({"ln_T_minus1", "ln_T_plus1", "ln_mahler_T"})
TABLES = (
    ("table_alternating.csv", "alternating"),
    ("table_nonalternating.csv", "non_alternating"),
    ("table_all.csv", "all"),
)
BUNDLED = "bundled"
DEGENERATE_MARK = "DegenerateSample"
EMPTY_MARK = "EmptyPopulation"


def fmt(x: float) -> str:
    """Fixed 10 significant digits."""
    return format(x, ".10g")


def natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


@dataclass
class RunConfig:
    census_path: str = BUNDLED
    rep_dir: str | None = None
    max_crossings: int = 15
    invariants: tuple = INVARIANTS
    output_dir: str = "."
    thread_count: int = 1
    sw_nmax: int = 100
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.max_crossings < 3:
            raise ConfigError("--max-crossings must be at least 3")
        if not self.invariants:
            raise ConfigError("no invariants selected")
        unknown = set(self.invariants) - set(INVARIANTS)
        if unknown:
            raise ConfigError(f"unknown invariants {sorted(unknown)}")
        if TWISTED & set(self.invariants) and not self.rep_dir:
            raise ConfigError("twisted invariants need --reps")
        if self.thread_count < 1:
            raise ConfigError("--threads must be positive")
        if self.sw_nmax < 2:
            raise ConfigError("--sw-nmax must be at least 2")


def data_path(name: str) -> Path:
    """Path of a file shipped in the package data directory."""
    return Path(str(resources.files("knotvol") / "data" / name))


def census_file(cfg: RunConfig) -> Path:
    return data_path("census.csv") if cfg.census_path == BUNDLED else Path(cfg.census_path)


def rep_directory(cfg: RunConfig) -> Path | None:
    if cfg.rep_dir is None:
        return None
    return data_path("reps") if cfg.rep_dir == BUNDLED else Path(cfg.rep_dir)


def load_census(cfg: RunConfig) -> list[CensusRecord]:
    path = census_file(cfg)
    with open(path, encoding="utf-8") as fh:
        records = parse_census(fh)
    return [r for r in records if r.crossings <= cfg.max_crossings]


def rep_file(rep_dir: Path, rec: CensusRecord) -> Path:
    """``rep_dir/<file name of rep_path>`` when the census names one, else ``rep_dir/<name>.rep``."""
    if rec.rep_path:
        return rep_dir / Path(rec.rep_path).name
    return rep_dir / f"{rec.name}.rep"


# -- invariants -----------------------------------------------------------------


def compute_knot(task: tuple) -> tuple[str, dict, list[str]]:
    """Worker: invariant values for one knot.

    Returns ``(name, values, notes)``.  Failures of the twisted part are
    reported in ``notes`` and leave those values out; anything else raises.
    """
    name, pd_text, selected, rep_path = task
    d = parse_pd(pd_text)
    values: dict[str, float] = {}
    notes: list[str] = []
    if {"ln_det", "ln_mahler_alex"} & set(selected):
        res = alexander_poly(d)
        if "ln_det" in selected:
            values["ln_det"] = math.log(res.determinant)
        if "ln_mahler_alex" in selected:
            values["ln_mahler_alex"] = log_mahler(res.delta)
    if "ln_mahler_jones" in selected:
        values["ln_mahler_jones"] = log_mahler(jones_poly(d).to_laurent())
    if TWISTED & set(selected):
        try:
            if rep_path is None or not Path(rep_path).exists():
                raise FileNotFoundError(f"no representation file {rep_path}")
            with open(rep_path, encoding="utf-8") as fh:
                rep = load_rep(fh, d)
            tw = twisted_alexander(d, rep)
        except (KnotvolError, OSError, ValueError) as exc:
            notes.append(f"{name}: representation skipped ({type(exc).__name__}: {exc})")
        else:
            if "ln_mahler_T" in selected:
                values["ln_mahler_T"] = tw.log_mahler
            # T(1) = 0 happens; only that column is left blank
            for key, val in (("ln_T_minus1", tw.eval_minus_one), ("ln_T_plus1", tw.eval_plus_one)):
                if key not in selected:
                    continue
                if val == 0:
                    notes.append(f"{name}: {key} left blank (twisted polynomial vanishes there)")
                else:
                    values[key] = math.log(abs(val))
    return name, values, notes


def run_invariants(cfg: RunConfig) -> Path:
    records = load_census(cfg)
    rep_dir = rep_directory(cfg)
    selected = tuple(i for i in INVARIANTS if i in cfg.invariants)
    tasks = []
    for rec in records:
        if rec.pd is None:
            raise KnotvolError(f"{rec.name}: census row has no PD code")
        rp = str(rep_file(rep_dir, rec)) if rep_dir is not None else None
        tasks.append((rec.name, str(rec.pd), selected, rp))
    if cfg.thread_count > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.thread_count) as pool:
            results = list(pool.map(compute_knot, tasks, chunksize=1))
    else:
        results = [compute_knot(t) for t in tasks]
    by_name = {name: (vals, notes) for name, vals, notes in results}
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "invariants.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "crossings", "alternating", "volume", *selected])
        for rec in sorted(records, key=lambda r: natural_key(r.name)):
            vals, notes = by_name[rec.name]
            for note in notes:
                log.warning(note)
            w.writerow(
                [rec.name, rec.crossings, int(rec.alternating), repr(rec.volume)]
                + [fmt(vals[k]) if k in vals else "" for k in selected]
            )
    log.info("wrote %s (%d knots)", path, len(records))
    return path


# -- report and figures ---------------------------------------------------------


def read_invariants(path: Path) -> tuple[list[str], list[dict]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        columns = [c for c in (reader.fieldnames or []) if c in INVARIANTS]
    return columns, rows


def _records(rows: list[dict]) -> list[CensusRecord]:
    return [
        CensusRecord(r["name"], int(r["crossings"]), r["alternating"] == "1", float(r["volume"]))
        for r in rows
    ]


def run_report(cfg: RunConfig) -> list[Path]:
    path = Path(cfg.output_dir) / "invariants.csv"
    if not path.exists():
        raise ConfigError(f"{path} not found; run 'invariants' first")
    columns, rows = read_invariants(path)
    rows = [r for r in rows if int(r["crossings"]) <= cfg.max_crossings]
    written = []
    for fname, population in TABLES:
        out = Path(cfg.output_dir) / fname
        with open(out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["invariant", "A_vol", "sigma_vol", "Sigma_vol", "r"])
            for inv in columns:
                have = [r for r in rows if r[inv] != ""]
                values = {r["name"]: float(r[inv]) for r in have}
                try:
                    rep = stats_report(_records(have), values, inv, population, cfg.max_crossings)
                except EmptyPopulation:
                    log.warning("%s: empty population for %s", fname, inv)
                    w.writerow([inv, EMPTY_MARK, "", "", ""])
                    continue
                r_text = fmt(rep.pearson_r) if rep.pearson_r is not None else DEGENERATE_MARK
                w.writerow([inv, fmt(rep.a_vol), fmt(rep.sigma_vol), fmt(rep.big_sigma_vol), r_text])
        written.append(out)
    return written


def run_figures(cfg: RunConfig) -> list[Path]:
    path = Path(cfg.output_dir) / "invariants.csv"
    if not path.exists():
        raise ConfigError(f"{path} not found; run 'invariants' first")
    columns, rows = read_invariants(path)
    rows = [r for r in rows if int(r["crossings"]) <= cfg.max_crossings]
    written = []
    for k, inv in enumerate(INVARIANTS, 1):
        for label, flag in (("alternating", "1"), ("nonalternating", "0")):
            out = Path(cfg.output_dir) / f"fig{k}_{label}.tsv"
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(f"name\t{inv}\tvolume\n")
                if inv in columns:
                    for r in rows:
                        if r["alternating"] == flag and r[inv] != "":
                            fh.write(f"{r['name']}\t{r[inv]}\t{r['volume']}\n")
            written.append(out)
    return written


# -- single-knot commands -------------------------------------------------------


def two_bridge_diagram(name: str) -> KnotDiagram | None:
    """PD diagram of ``name`` from the bundled 2-bridge table, if listed there."""
    with open(data_path("two_bridge.csv"), newline="", encoding="utf-8") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        for row in rows:
            if row["name"] == name:
                return parse_pd(row["pd"])
    return None


def find_knot(cfg: RunConfig, name: str) -> CensusRecord | None:
    """Census record of ``name``; ``None`` stands for the unknot (names 0_1, unknot)."""
    if name in ("0_1", "unknot"):
        return None
    for rec in load_census(cfg):
        if rec.name == name:
            return rec
    raise UnknownKnot(f"knot {name} is not in the census")


def find_diagram(cfg: RunConfig, name: str) -> KnotDiagram:
    """Diagram of a census knot, falling back to the bundled 2-bridge table."""
    try:
        rec = find_knot(cfg, name)
    except UnknownKnot:
        d = two_bridge_diagram(name)
        if d is None:
            raise
        return d
    return rec.pd if rec is not None else KnotDiagram.unknot()


def run_sw(cfg: RunConfig, name: str, stream) -> None:
    d = find_diagram(cfg, name)
    delta = alexander_poly(d).delta
    limit = log_mahler(delta)
    seq = silver_williams_sequence(delta, cfg.sw_nmax)
    vals = dict(seq.values)
    stream.write("n\tvalue\tln_mahler\tdifference\tstatus\n")
    for n in range(2, cfg.sw_nmax + 1):
        if n in vals:
            stream.write(f"{n}\t{fmt(vals[n])}\t{fmt(limit)}\t{fmt(vals[n] - limit)}\tok\n")
        else:
            stream.write(f"{n}\t\t{fmt(limit)}\t\tskipped\n")


def parse_poly_line(line: str) -> CxLaurentPoly:
    """Coefficients from the constant term upwards, optionally preceded by ``low=<k>``."""
    parts = line.split()
    low = 0
    if parts and parts[0].startswith("low="):
        low = int(parts[0][4:])
        parts = parts[1:]
    if not parts:
        raise ConfigError("empty coefficient list")
    return CxLaurentPoly.from_list([complex(p.replace("i", "j")) for p in parts], low)


def run_mahler(path: str, stream) -> None:
    stream.write("name\tmahler\tln_mahler\tln_mahler_quadrature\troot_margin\n")
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name = f"line{lineno}"
            if ":" in line:
                name, line = (s.strip() for s in line.split(":", 1))
            p = parse_poly_line(line)
            mv = mahler_roots(p)
            nodes = 4096
            if mv.root_margin > 0:
                while nodes < 60.0 / mv.root_margin and nodes < 1 << 20:
                    nodes *= 2
            q = mahler_quadrature(p, nodes)
            stream.write(
                f"{name}\t{fmt(mv.measure)}\t{fmt(mv.log_measure)}\t{fmt(q.log_measure)}\t{fmt(mv.root_margin)}\n"
            )


def run_twisted(cfg: RunConfig, name: str, stream) -> None:
    rec = find_knot(cfg, name)
    if rec is None:
        raise ConfigError("the unknot has no hyperbolic structure")
    rep_dir = rep_directory(cfg)
    if rep_dir is None:
        raise ConfigError("twisted needs --reps")
    with open(rep_file(rep_dir, rec), encoding="utf-8") as fh:
        rep = load_rep(fh, rec.pd)
    tw = twisted_alexander(rec.pd, rep)
    stream.write(f"knot\t{rec.name}\n")
    for e, c in tw.t_poly.items():
        stream.write(f"coeff\t{e}\t{fmt(c.real)}\t{fmt(c.imag)}\n")
    stream.write(f"T(-1)\t{fmt(tw.eval_minus_one.real)}\t{fmt(tw.eval_minus_one.imag)}\n")
    stream.write(f"T(+1)\t{fmt(tw.eval_plus_one.real)}\t{fmt(tw.eval_plus_one.imag)}\n")
    stream.write(f"ln_mahler_T\t{fmt(tw.log_mahler)}\n")
    stream.write(f"ln_mahler_T/vol\t{fmt(tw.log_mahler / rec.volume)}\n")


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--census", default=BUNDLED, help="census CSV (default: the bundled sample)")
    common.add_argument("--reps", default=None, help="directory of representation files, or 'bundled'")
    common.add_argument("--max-crossings", type=int, default=15)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--sw-nmax", type=int, default=100)
    common.add_argument(
        "--invariants",
        default=None,
        help="comma separated subset of " + ",".join(INVARIANTS) + " (default: all available)",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="knotvol", description="Knot invariants against hyperbolic volume.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common], help="write invariants.csv")
    sub.add_parser("report", parents=[common], help="write the three statistics tables")
    sub.add_parser("figures", parents=[common], help="write fig<k>_*.tsv scatter data")
    sw = sub.add_parser("sw", parents=[common], help="Silver-Williams convergence table")
    sw.add_argument("knot")
    mh = sub.add_parser("mahler", parents=[common], help="Mahler measures of listed polynomials")
    mh.add_argument("polyfile")
    tw = sub.add_parser("twisted", parents=[common], help="twisted Alexander polynomial of one knot")
    tw.add_argument("knot")
    return p


def config_from_args(args) -> RunConfig:
    if args.invariants:
        inv = tuple(s.strip() for s in args.invariants.split(",") if s.strip())
    else:
        inv = INVARIANTS if args.reps else tuple(i for i in INVARIANTS if i not in TWISTED)
    cfg = RunConfig(
        census_path=args.census,
        rep_dir=args.reps,
        max_crossings=args.max_crossings,
        invariants=inv,
        output_dir=args.out,
        thread_count=args.threads,
        sw_nmax=args.sw_nmax,
    )
    cfg.validate()
    return cfg


def _write_output(cfg: RunConfig, fname: str, fn, *a) -> None:
    if cfg.output_dir == ".":
        fn(*a, sys.stdout)
        return
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / fname, "w", encoding="utf-8") as fh:
        fn(*a, fh)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s"
    )
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return 2
    try:
        if args.command == "invariants":
            run_invariants(cfg)
        elif args.command == "report":
            run_report(cfg)
        elif args.command == "figures":
            run_figures(cfg)
        elif args.command == "sw":
            _write_output(cfg, f"sw_{args.knot}.tsv", lambda s: run_sw(cfg, args.knot, s))
        elif args.command == "mahler":
            _write_output(cfg, "mahler.tsv", lambda s: run_mahler(args.polyfile, s))
        elif args.command == "twisted":
            _write_output(cfg, f"twisted_{args.knot}.tsv", lambda s: run_twisted(cfg, args.knot, s))
    except ConfigError as exc:
        log.error("%s", exc)
        return 2
    except (KnotvolError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
