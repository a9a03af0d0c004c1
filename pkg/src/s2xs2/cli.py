"""Batch verification driver.

Three subcommands:

* ``verify`` runs the full residual suite on one family at random chart
  points and reports one record per check;
* ``sweep`` tabulates the extrinsic scalars and the focal radius over a
  family parameter range;
* ``flow`` tabulates the parallel flow of one family member over normal
  distances.

Reports can be emitted as text, CSV, or JSON (``schema: 1``).  JSON and
CSV output is byte-identical across runs with the same seed and flags;
wall-clock time appears only in the text format.  With ``--plot`` a PNG
figure is rendered next to the delimited output.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import flow as flowmod
from . import shape as shapemod
from .catalog import Family, make_family, random_interior_point
from .errors import DegenerateSpectrumError, FrameContinuityError, GeometryError
from .shape import shape_at

SCHEMA_VERSION = 1

BASE_TOLERANCES = {
    "spectrum_vs_oracle": 1e-6,
    "scalars_vs_oracle": 1e-6,
    "normal_alignment": 1e-9,
    "defining_equation": 1e-9,
    "gauss_kronecker_zero": 1e-8,
    "totally_geodesic": 1e-8,
    "char_poly": 1e-9,
    "structure_identities": 1e-4,
    "codazzi": 1e-4,
    "lambda_system": 1e-3,
    "gamma_antisymmetry": 1e-6,
    "detB_closed_form": 1e-8,
    "flow_H_spatial_std": 1e-5,
    "flow_log_derivative": 1e-5,
    "flow_taylor": 1e-5,
}

FLOW_CHECK_S = (0.1, 0.2, 0.4)


@dataclass
class CheckRecord:
    name: str
    n_points: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


@dataclass
class VerificationReport:
    family: str
    params: dict
    n_points: int
    seed: int
    tol_scale: float
    records: list[CheckRecord] = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


# ---------------------------------------------------------------------------
# serialization


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_value(x) -> str:
    """Minimal deterministic JSON with 17 significant digits for floats."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "NaN"
        return format(x, ".17g")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        out = x.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(x, dict):
        items = ", ".join(f"{_json_value(str(k))}: {_json_value(v)}" for k, v in x.items())
        return "{" + items + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x)}")


def report_to_json(rep: VerificationReport) -> str:
    obj = {
        "schema": SCHEMA_VERSION,
        "family": rep.family,
        "params": {k: float(v) for k, v in rep.params.items()},
        "n_points": rep.n_points,
        "seed": rep.seed,
        "tol_scale": rep.tol_scale,
        "checks": [
            {
                "name": r.name,
                "n_points": r.n_points,
                "max_residual": r.max_residual,
                "tolerance": r.tolerance,
                "passed": r.passed,
            }
            for r in rep.records
        ],
        "passed": rep.passed,
    }
    return _json_value(obj) + "\n"


def report_to_csv(rep: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "n_points", "max_residual", "tolerance", "passed"])
    for r in rep.records:
        w.writerow([r.name, r.n_points, _fmt(r.max_residual), _fmt(r.tolerance), int(r.passed)])
    return buf.getvalue()


def report_to_text(rep: VerificationReport) -> str:
    lines = [
        f"family {rep.family} params {rep.params} n {rep.n_points} seed {rep.seed} "
        f"tol-scale {rep.tol_scale:g}"
    ]
    for r in rep.records:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"  [{status}] {r.name:<24s} n={r.n_points:<4d} "
            f"max residual {r.max_residual:.3e}  (tol {r.tolerance:.1e})"
        )
    lines.append(f"overall: {'PASS' if rep.passed else 'FAIL'}  ({rep.runtime:.2f} s)")
    return "\n".join(lines) + "\n"


def table_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def table_to_json(header: list[str], rows: list[list]) -> str:
    obj = {
        "schema": SCHEMA_VERSION,
        "columns": header,
        "rows": [[v for v in row] for row in rows],
    }
    return _json_value(obj) + "\n"


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plot_report(rep: VerificationReport, png_path: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r.name for r in rep.records]
    res = [max(r.max_residual, 1e-18) for r in rep.records]
    tol = [r.tolerance for r in rep.records]
    fig, ax = plt.subplots(figsize=(8, 0.45 * len(names) + 1.5))
    y = np.arange(len(names))
    ax.barh(y, res, color=["tab:green" if r.passed else "tab:red" for r in rep.records])
    ax.plot(tol, y, "k|", markersize=12, label="tolerance")
    ax.set_yticks(y, names)
    ax.set_xscale("log")
    ax.set_xlabel("max residual")
    ax.set_title(f"{rep.family} {rep.params}")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def _plot_table(header, rows, xcol, ycols, png_path, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ix = header.index(xcol)
    xs = [row[ix] for row in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for col in ycols:
        iy = header.index(col)
        ax.plot(xs, [row[iy] for row in rows], label=col)
    ax.set_xlabel(xcol)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def _png_path(out_path: str) -> str:
    if out_path.endswith(".csv") or out_path.endswith(".json") or out_path.endswith(".txt"):
        return out_path.rsplit(".", 1)[0] + ".png"
    return out_path + ".png"


# ---------------------------------------------------------------------------
# verify


def _sample_points(family: Family, rng, n: int) -> list[np.ndarray]:
    return [random_interior_point(family, rng) for _ in range(n)]


def run_verify(family: Family, n: int, seed: int, tol_scale: float) -> VerificationReport:
    t0 = time.perf_counter()
    tol = {k: v * tol_scale for k, v in BASE_TOLERANCES.items()}
    rng = np.random.default_rng(seed)
    rep = VerificationReport(
        family=family.name, params=family.params, n_points=n, seed=seed, tol_scale=tol_scale
    )
    chart, hint = family.chart, family.normal_hint
    pts = _sample_points(family, rng, n)

    # -- pointwise closed-form oracles ------------------------------------
    spec_err = scal_err = c_err = def_err = k_err = sig_err = cp_err = 0.0
    oracle_geodesic = True
    sds = []
    for u in pts:
        sd = shape_at(chart, u, normal_hint=hint)
        sds.append(sd)
        o = family.oracle(sd.point)
        spec_err = max(spec_err, float(np.max(np.abs(sd.lambdas - o.lambdas))))
        scal_err = max(
            scal_err, abs(sd.H - o.H), abs(sd.rho - o.rho), abs(sd.K - o.K)
        )
        c_err = max(c_err, abs(sd.C - o.C))
        d = family.defining_residual(sd.point)
        if np.isfinite(d):
            def_err = max(def_err, d)
        if abs(o.K) < 1e-15:
            k_err = max(k_err, abs(sd.K))
        if np.max(np.abs(o.lambdas)) > 1e-15:
            oracle_geodesic = False
        sig_err = max(sig_err, float(np.max(np.abs(sd.sigma))))
        cp_err = max(cp_err, shapemod.char_poly_residual(sd))
    rep.records.append(CheckRecord("spectrum_vs_oracle", n, spec_err, tol["spectrum_vs_oracle"]))
    rep.records.append(CheckRecord("scalars_vs_oracle", n, scal_err, tol["scalars_vs_oracle"]))
    rep.records.append(CheckRecord("normal_alignment", n, c_err, tol["normal_alignment"]))
    rep.records.append(CheckRecord("defining_equation", n, def_err, tol["defining_equation"]))
    rep.records.append(
        CheckRecord("gauss_kronecker_zero", n, k_err, tol["gauss_kronecker_zero"])
    )
    if oracle_geodesic:
        rep.records.append(
            CheckRecord("totally_geodesic", n, sig_err, tol["totally_geodesic"])
        )
    rep.records.append(CheckRecord("char_poly", n, cp_err, tol["char_poly"]))

    # -- stencil identities ----------------------------------------------
    n_heavy = max(3, n // 5)
    struct_err = cod_err = 0.0
    lam_err = gam_err = detb_err = 0.0
    n_lam = 0
    for u in pts[:n_heavy]:
        F = shapemod.diff_fields(chart, u, normal_hint=hint)
        res = shapemod.lemma_residuals(chart, u, fields=F)
        struct_err = max(struct_err, res.max())
        trip = [rng.standard_normal(3) @ F.sd.frame for _ in range(3)]
        cod_err = max(cod_err, shapemod.codazzi_residual(chart, u, *trip, fields=F))
        try:
            FD = shapemod.lambda_system(chart, u, fields=F)
        except (DegenerateSpectrumError, FrameContinuityError):
            continue
        n_lam += 1
        lam_err = max(lam_err, float(np.max(np.abs(FD.residual))))
        gam_err = max(gam_err, FD.gamma_antisymmetry())
        detb_err = max(detb_err, abs(FD.detB - FD.detB_closed))
    rep.records.append(
        CheckRecord("structure_identities", n_heavy, struct_err, tol["structure_identities"])
    )
    rep.records.append(CheckRecord("codazzi", n_heavy, cod_err, tol["codazzi"]))
    if n_lam:
        rep.records.append(CheckRecord("lambda_system", n_lam, lam_err, tol["lambda_system"]))
        rep.records.append(
            CheckRecord("gamma_antisymmetry", n_lam, gam_err, tol["gamma_antisymmetry"])
        )
        rep.records.append(
            CheckRecord("detB_closed_form", n_lam, detb_err, tol["detB_closed_form"])
        )

    # -- parallel flow ----------------------------------------------------
    n_flow = min(len(sds), 10)
    std_err = 0.0
    logd_err = 0.0
    tay_err = 0.0
    for s in FLOW_CHECK_S:
        hs = [flowmod.q_matrix(sd, s).mean_curvature for sd in sds[:n_flow]]
        std_err = max(std_err, float(np.std(hs)))
    # log-derivative against an independent measurement on the flowed chart
    sd0 = sds[0]
    for s in FLOW_CHECK_S:
        qd = flowmod.q_matrix(sd0, s)
        ch_s, hint_s = flowmod.parallel_chart(chart, s, normal_hint=hint)
        sd_s = shape_at(ch_s, pts[0], normal_hint=hint_s)
        logd_err = max(logd_err, abs(3.0 * sd_s.H + qd.ddetQ / qd.detQ_closed))
    # Maclaurin coefficients against numerical differentiation of det Q
    E, se = flowmod.sigma_in_adapted_frame(sd0)
    coeffs = flowmod.taylor_detq(se, sd0.C)
    tay_err = _taylor_residual(se, sd0.C, coeffs)
    rep.records.append(
        CheckRecord("flow_H_spatial_std", n_flow * len(FLOW_CHECK_S), std_err, tol["flow_H_spatial_std"])
    )
    rep.records.append(
        CheckRecord("flow_log_derivative", len(FLOW_CHECK_S), logd_err, tol["flow_log_derivative"])
    )
    rep.records.append(CheckRecord("flow_taylor", 1, tay_err, tol["flow_taylor"]))

    rep.runtime = time.perf_counter() - t0
    return rep


def _taylor_residual(se, C, coeffs, s0: float = 0.05) -> float:
    """Max mismatch of the Maclaurin polynomial against det Q near s = 0."""
    worst = 0.0
    for s in np.linspace(-s0, s0, 11):
        poly = sum(c * s**k for k, c in enumerate(coeffs))
        worst = max(worst, abs(poly - flowmod.detq_closed(se, C, s)))
    return worst


# ---------------------------------------------------------------------------
# sweep / flow tables

SWEEP_HEADER = ["param", "lambda1", "lambda2", "lambda3", "H", "rho", "K", "C", "focal_radius"]
FLOW_HEADER = ["s", "H_flow", "detQ", "C", "H_spatial_std", "past_focal"]


def run_sweep(name: str, pmin: float, pmax: float, steps: int, seed: int):
    pname = {"s1rxs2": "r", "mt": "t"}.get(name)
    if pname is None:
        raise GeometryError(f"family {name!r} has no sweep parameter")
    values = [pmin] if steps <= 1 else list(np.linspace(pmin, pmax, steps))
    rng = np.random.default_rng(seed)
    rows = []
    for v in values:
        fam = make_family(name, **{pname: float(v)})
        u = random_interior_point(fam, rng)
        sd = shape_at(fam.chart, u, normal_hint=fam.normal_hint)
        fr = flowmod.focal_radius(sd)
        rows.append(
            [
                float(v),
                float(sd.lambdas[0]),
                float(sd.lambdas[1]),
                float(sd.lambdas[2]),
                sd.H,
                sd.rho,
                sd.K,
                sd.C,
                fr.root if fr.root is not None else float("nan"),
            ]
        )
    return SWEEP_HEADER, rows


def run_flow(family: Family, s_max: float, s_steps: int, n: int, seed: int):
    rng = np.random.default_rng(seed)
    pts = _sample_points(family, rng, n)
    sds = [
        shape_at(family.chart, u, normal_hint=family.normal_hint) for u in pts
    ]
    sd0 = sds[0]
    fr = flowmod.focal_radius(sd0)
    svals = [0.0] if s_max == 0.0 or s_steps <= 0 else list(np.linspace(0.0, s_max, s_steps + 1))
    rows = []
    for s in svals:
        qds = [flowmod.q_matrix(sd, s) for sd in sds]
        hs = [qd.mean_curvature for qd in qds]
        n0 = flowmod.flow_normal(sd0.point, sd0.N6, s)
        from .ambient import apply_P6

        c_s = float(apply_P6(n0) @ n0)
        past = fr.root is not None and s >= fr.root
        rows.append(
            [
                float(s),
                float(np.mean(hs)),
                float(np.mean([qd.detQ_closed for qd in qds])),
                c_s,
                float(np.std(hs)),
                int(past),
            ]
        )
    return FLOW_HEADER, rows, fr


# ---------------------------------------------------------------------------
# argument handling


def _add_common(p):
    p.add_argument("--n", type=int, default=20, help="number of random chart points")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--tol-scale", type=float, default=1.0, help="scale all tolerances")
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--out", default=None, help="write the report to this path")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the output")


def _add_family_params(p):
    p.add_argument("family", choices=["s1rxs2", "mt", "mab", "mhat"])
    p.add_argument("--r", type=float, default=0.6, help="radius for s1rxs2")
    p.add_argument("--t", type=float, default=0.5, help="level for mt")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="s2xs2", description="Verification driver for hypersurfaces of S^2 x S^2"
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    pv = sub.add_parser("verify", help="run the residual suite on one family")
    _add_family_params(pv)
    _add_common(pv)

    ps = sub.add_parser("sweep", help="tabulate scalars over a parameter range")
    ps.add_argument("family", choices=["s1rxs2", "mt"])
    ps.add_argument("--min", type=float, required=True, dest="pmin")
    ps.add_argument("--max", type=float, required=True, dest="pmax")
    ps.add_argument("--steps", type=int, default=10)
    _add_common(ps)

    pf = sub.add_parser("flow", help="tabulate the parallel flow of one member")
    _add_family_params(pf)
    pf.add_argument("--s-max", type=float, default=1.0)
    pf.add_argument("--s-steps", type=int, default=10)
    _add_common(pf)

    return ap


def _family_from_args(args) -> Family:
    kw = {}
    if args.family == "s1rxs2":
        kw["r"] = args.r
    elif args.family == "mt":
        kw["t"] = args.t
    return make_family(args.family, **kw)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.cmd == "verify":
            fam = _family_from_args(args)
            rep = run_verify(fam, args.n, args.seed, args.tol_scale)
            if args.format == "json":
                _emit(report_to_json(rep), args.out)
            elif args.format == "csv":
                _emit(report_to_csv(rep), args.out)
            else:
                _emit(report_to_text(rep), args.out)
            if args.plot and args.out:
                _plot_report(rep, _png_path(args.out))
            return 0 if rep.passed else 1

        if args.cmd == "sweep":
            header, rows = run_sweep(args.family, args.pmin, args.pmax, args.steps, args.seed)
            text = (
                table_to_json(header, rows) if args.format == "json" else table_to_csv(header, rows)
            )
            _emit(text, args.out)
            if args.plot and args.out:
                _plot_table(
                    header,
                    rows,
                    "param",
                    ["lambda1", "lambda2", "lambda3", "H"],
                    _png_path(args.out),
                    f"sweep {args.family}",
                )
            return 0

        if args.cmd == "flow":
            fam = _family_from_args(args)
            header, rows, fr = run_flow(fam, args.s_max, args.s_steps, args.n, args.seed)
            text = (
                table_to_json(header, rows) if args.format == "json" else table_to_csv(header, rows)
            )
            _emit(text, args.out)
            if args.format == "text" and fr.root is not None:
                sys.stdout.write(f"# first focal s: {fr.root:.6f}\n")
            if args.plot and args.out:
                _plot_table(
                    header,
                    rows,
                    "s",
                    ["H_flow", "detQ", "C"],
                    _png_path(args.out),
                    f"flow {fam.chart.label}",
                )
            return 0
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
