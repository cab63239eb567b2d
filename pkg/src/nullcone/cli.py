"""Batch command-line frontend: grids in, CSV out.

Subcommands: embed, metric, curvature, propagator, isometry, verify.
Options may come from flags or from a `key = value` config file
(`--config`); a flag always overrides the file.  Grid ranges use the
inclusive syntax start:stop:count.  Output is deterministic for a given
configuration and seed: rows follow row-major grid order regardless of
the worker pool, and floats are printed with 17 significant digits.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 domain error (the first offending grid point is reported).
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .acceptance import list_criteria, run_all
from .curvature import ambient_curvature, intrinsic_curvature_oracle
from .embedding import (ChartPoint, DefiningFunction, cone_c, embed_point,
                        induced_metric)
from .errors import ConfigError, NullconeError, ParseError
from .isometries import classify_special, isometry_algebra_dimension
from .propagators import (PAIR_INDEX, ambient_dot, field_strength_two_point,
                          field_strength_via_dd, photon_potential_ambient,
                          photon_potential_einstein, pure_gauge_term,
                          scalar_two_point)
from .scalefactor import PRESETS, resolve_scale
from .embedding import sample_chart_points


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_grid(spec: str, name: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{name}: expected start:stop:count, got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"{name}: malformed grid {spec!r}") from None
    if count < 1:
        raise ConfigError(f"{name}: count must be >= 1")
    return np.linspace(start, stop, count)


def _read_config(path: str) -> dict:
    out = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as e:
        raise ConfigError(f"cannot read config file: {e}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


@dataclass
class RunConfig:
    """Validated inputs of one CLI invocation."""

    k: int
    scale_src: str
    t: np.ndarray
    chi: np.ndarray
    theta: float
    phi: float
    seed: int
    jobs: int
    out: Optional[str]
    extras: dict = field(default_factory=dict)

    @property
    def scale(self):
        return resolve_scale(self.scale_src)


def _build_config(args, need_grid: bool = True) -> RunConfig:
    filecfg = _read_config(args.config) if getattr(args, "config", None) else {}

    def pick(flag_name, default=None):
        v = getattr(args, flag_name, None)
        if v is not None:
            return v
        return filecfg.get(flag_name, default)

    kraw = pick("k")
    if kraw is None:
        raise ConfigError("missing required option: k")
    try:
        k = int(kraw)
    except ValueError:
        raise ConfigError(f"k: expected -1, 0 or +1, got {kraw!r}") from None
    if k not in (-1, 0, 1):
        raise ConfigError(f"k: expected -1, 0 or +1, got {k}")
    scale_src = pick("scale", "1")
    try:
        resolve_scale(scale_src)
    except ParseError as e:
        raise ConfigError(f"scale: {e}") from None
    t = _parse_grid(str(pick("t", "0.5:1.5:3")), "t") if need_grid else np.array([])
    chi = _parse_grid(str(pick("chi", "0.2:1.0:3")), "chi") if need_grid else np.array([])
    return RunConfig(
        k=k, scale_src=scale_src, t=t, chi=chi,
        theta=float(pick("theta", math.pi / 3)),
        phi=float(pick("phi", math.pi / 4)),
        seed=int(pick("seed", 42)),
        jobs=max(1, int(pick("jobs", 1))),
        out=pick("out"),
    )


def _emit(rows: List[List[str]], header: List[str], out: Optional[str]):
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid_points(cfg: RunConfig):
    return [ChartPoint(cfg.k, float(t), float(c), (cfg.theta, cfg.phi))
            for t in cfg.t for c in cfg.chi]


def _map_ordered(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _cmd_embed(args) -> int:
    cfg = _build_config(args)
    a = cfg.scale
    f = DefiningFunction.flrw(cfg.k, a)
    pts = _grid_points(cfg)

    def row(p):
        y = embed_point(cfg.k, a, p)
        return ([_fmt(v) for v in (p.t, p.chi, *p.angles)]
                + [_fmt(v) for v in y]
                + [_fmt(cone_c(y)), _fmt(f.value(y))])

    rows = _map_ordered(row, pts, cfg.jobs)
    header = (["t", "chi", "theta", "phi"]
              + [f"y{i}" for i in range(6)] + ["cone_c", "f"])
    _emit(rows, header, cfg.out)
    return 0


def _cmd_metric(args) -> int:
    cfg = _build_config(args)
    a = cfg.scale
    pts = _grid_points(cfg)

    def row(p):
        g = induced_metric(cfg.k, a, p)
        entries = [g[i, j] for i in range(4) for j in range(i, 4)]
        return [_fmt(v) for v in (p.t, p.chi, *p.angles)] + [_fmt(v) for v in entries]

    rows = _map_ordered(row, pts, cfg.jobs)
    header = (["t", "chi", "theta", "phi"]
              + [f"g_{i}{j}" for i in range(4) for j in range(i, 4)])
    _emit(rows, header, cfg.out)
    return 0


def _cmd_curvature(args) -> int:
    cfg = _build_config(args)
    a = cfg.scale
    f = DefiningFunction.flrw(cfg.k, a)
    pts = _grid_points(cfg)

    def row(p):
        amb = ambient_curvature(f, cfg.k, a, p)
        orc = intrinsic_curvature_oracle(cfg.k, a, p)
        scale = max(1.0, float(np.max(np.abs(orc.riemann.data))))
        resid = float(np.max(np.abs(amb.riemann.data - orc.riemann.data))) / scale
        g = induced_metric(cfg.k, a, p)
        ev = np.linalg.eigvalsh(np.linalg.solve(g, amb.ricci))
        return ([_fmt(v) for v in (p.t, p.chi, *p.angles)]
                + [_fmt(amb.scalar)] + [_fmt(v) for v in sorted(ev)]
                + [_fmt(resid)])

    rows = _map_ordered(row, pts, cfg.jobs)
    header = (["t", "chi", "theta", "phi", "scalar_curvature"]
              + [f"ricci_ev{i}" for i in range(4)] + ["oracle_residual"])
    _emit(rows, header, cfg.out)
    return 0


def _cmd_propagator(args) -> int:
    cfg = _build_config(args)
    a = cfg.scale
    which = getattr(args, "which", None) or cfg.extras.get("which", "scalar")
    t2 = _parse_grid(args.t2, "t2") if args.t2 else cfg.t + 1.0
    chi2 = _parse_grid(args.chi2, "chi2") if args.chi2 else cfg.chi
    base = ChartPoint(cfg.k, 0.0, 0.1, (cfg.theta, cfg.phi))

    pairs = [(ChartPoint(cfg.k, float(ta), float(ca), base.angles),
              ChartPoint(cfg.k, float(tb), float(cb), base.angles))
             for ta in cfg.t for ca in cfg.chi
             for tb in t2 for cb in chi2]

    if which == "scalar":
        header_tail = ["scalar"]

        def values(x, xp):
            return [scalar_two_point(cfg.k, a, x, xp)]
    elif which == "potential":
        header_tail = [f"a_{i}{j}" for i in range(4) for j in range(4)]

        def values(x, xp):
            return list(photon_potential_ambient(cfg.k, a, x, xp).ravel())
    elif which == "einstein":
        header_tail = [f"a_{i}{j}" for i in range(4) for j in range(4)]

        def values(x, xp):
            return list(photon_potential_einstein(cfg.k, x, xp).ravel())
    elif which == "gauge":
        header_tail = [f"a_{i}{j}" for i in range(4) for j in range(4)]

        def values(x, xp):
            return list(pure_gauge_term(cfg.k, a, x, xp).ravel())
    elif which == "field-strength":
        header_tail = [f"f_{m}{n}_{r}{s}" for (m, n) in PAIR_INDEX
                       for (r, s) in PAIR_INDEX]

        def values(x, xp):
            return list(field_strength_two_point(cfg.k, x, xp).ravel())
    elif which == "field-strength-dd":
        header_tail = [f"f_{m}{n}_{r}{s}" for (m, n) in PAIR_INDEX
                       for (r, s) in PAIR_INDEX]

        def values(x, xp):
            return list(field_strength_via_dd(cfg.k, a, x, xp).ravel())
    else:
        raise ConfigError(f"unknown propagator kind {which!r}")

    def row(pair):
        x, xp = pair
        sep = ambient_dot(cfg.k, a, x, xp)
        return ([_fmt(v) for v in (x.t, x.chi, xp.t, xp.chi)]
                + [_fmt(sep.ydot), str(int(sep.singular))]
                + [_fmt(v) for v in values(x, xp)])

    rows = _map_ordered(row, pairs, cfg.jobs)
    header = ["t", "chi", "t2", "chi2", "ydot", "singular"] + header_tail
    _emit(rows, header, cfg.out)
    return 0


def _cmd_isometry(args) -> int:
    cfg = _build_config(args, need_grid=False)
    a = cfg.scale
    rep = classify_special(cfg.k, a, t_domain=(0.35, 1.2),
                           seeds=range(cfg.seed, cfg.seed + 10))
    print(f"dimension={rep.dimension} classification={rep.label}")
    if rep.matched_ode:
        print(f"matched_ode: {rep.matched_ode}")
    if rep.offset is not None and abs(rep.offset) > 1e-12:
        print(f"time_offset: {_fmt(rep.offset)}")
    rng = np.random.default_rng(cfg.seed)
    f = DefiningFunction.flrw(cfg.k, a)
    pts = sample_chart_points(rng, cfg.k, 40, t_domain=(0.35, 1.2))
    ys = [embed_point(cfg.k, a, p) for p in pts]
    _, basis = isometry_algebra_dimension(f, ys)
    print("null_space_basis:")
    for g in basis:
        print("  " + " ".join(_fmt(v) for v in g.parameters()))
    return 0


def _cmd_verify(args) -> int:
    if args.list:
        for cid, title in list_criteria():
            print(f"{cid}: {title}")
        return 0
    only = args.only.split(",") if args.only else None
    results = run_all(seed=args.seed, only=only)
    width = max(len(r.title) for r in results)
    all_ok = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(f"{r.cid:4s} {mark}  {r.title:{width}s}  ({r.seconds:6.2f}s)")
        print(f"     {r.detail}")
    print("verification: " + ("all criteria passed" if all_ok
                              else "FAILURES present"))
    return 0 if all_ok else 1


def _add_common(sp, grid: bool = True):
    sp.add_argument("--k", type=str, help="spatial curvature: -1, 0 or +1")
    sp.add_argument("--scale", type=str,
                    help="scale factor a(t): preset name or expression")
    sp.add_argument("--config", type=str, help="key = value config file")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=None,
                    help="worker threads (output order is deterministic)")
    sp.add_argument("--out", type=str, default=None, help="CSV output path")
    if grid:
        sp.add_argument("--t", type=str, help="grid start:stop:count")
        sp.add_argument("--chi", type=str, help="grid start:stop:count")
        sp.add_argument("--theta", type=float, default=None)
        sp.add_argument("--phi", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nullcone",
        description="FLRW sections of the null cone: embeddings, curvature, "
                    "two-point functions, isometries.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("embed", help="embed a chart grid; CSV of y, c(y), f(y)")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_embed)

    sp = sub.add_parser("metric", help="induced metric over a grid")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_metric)

    sp = sub.add_parser("curvature",
                        help="scalar curvature, Ricci eigenvalues, oracle residual")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_curvature)

    sp = sub.add_parser("propagator", help="two-point kernels over pair grids")
    _add_common(sp)
    sp.add_argument("--which", type=str, default=None,
                    choices=["scalar", "potential", "einstein", "gauge",
                             "field-strength", "field-strength-dd"])
    sp.add_argument("--t2", type=str, default=None)
    sp.add_argument("--chi2", type=str, default=None)
    sp.set_defaults(fn=_cmd_propagator)

    sp = sub.add_parser("isometry", help="isometry dimension and classification")
    _add_common(sp, grid=False)
    sp.set_defaults(fn=_cmd_isometry)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--list", action="store_true",
                    help="list criteria without running them")
    sp.add_argument("--only", type=str, default=None,
                    help="comma-separated criterion ids")
    sp.add_argument("--seed", type=int, default=42)
    sp.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except NullconeError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
