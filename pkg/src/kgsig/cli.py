"""Command-line front end: runs experiments, writes JSON + CSV results.

Every command writes <command>_summary.json (config echo plus scalar
results) and one <command>_*.csv table into the output directory, with all
floating-point values serialized to 17 significant digits in a fixed order,
so reruns with the same config and seed are byte-identical. Wall-clock
runtime goes to a separate run_meta.json sidecar, which is the one file
excluded from that guarantee.

Exit codes: 0 success, 2 configuration error, 3 non-convergence.
"""

from __future__ import annotations

import os

_THREADS = os.environ.get("KGSIG_THREADS")
if _THREADS:
    for _var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ.setdefault(_var, _THREADS)

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, apply_overrides, load_config, validate_config
from .dynamics import kg_residual, propagate, time_window
from .lattice import dirichlet_basis
from .massfamily import (
    ConvergenceError,
    MassInterval,
    interval_weight,
    make_family,
    spacetime_gram,
)
from .minkowski import cauchy_signature_blocks, cross_check_lattice
from .random_fields import random_datum, random_test_function
from .signature import (
    mass_decomposition_pairing,
    scalar_product,
    signature_analytic,
    signature_reconstruct,
    signature_spectrum,
    massless_limit,
)
from .state import build_state, pair_matchings, state_positivity_suite, two_point, wick_n_point
from .symplectic import gm_form, symplectic
from .dynamics import advanced_green, causal_fundamental, retarded_green


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {_render_json(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ",\n".join(f"{inner}{_render_json(v, indent + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(_render_json(payload) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [
                    _fmt(cell) if isinstance(cell, (float, np.floating)) else cell
                    for cell in row
                ]
            )


def _emit(
    command: str,
    config: ExperimentConfig,
    results: dict,
    tables: dict[str, tuple[list[str], list[list]]],
    out_dir: Path,
    quiet: bool,
    started: float,
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"command": command, "config": config.as_dict(), "results": results}
    summary_path = out_dir / f"{command}_summary.json"
    _write_json(summary_path, summary)
    paths = [summary_path]
    for name, (header, rows) in tables.items():
        table_path = out_dir / f"{command}_{name}.csv"
        _write_csv(table_path, header, rows)
        paths.append(table_path)
    _write_json(
        out_dir / "run_meta.json",
        {"command": command, "runtime_seconds": time.monotonic() - started},
    )
    if not quiet:
        for key, value in results.items():
            if isinstance(value, (int, float, bool, np.integer, np.floating)):
                print(f"{key}: {value}")
        for path in paths:
            print(f"wrote {path}")


def cmd_spectrum(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    om = np.sqrt(basis.eigenvalues + config.m**2)
    rows = [
        [k, float(basis.eigenvalues[k]), float(om[k])] for k in range(basis.size)
    ]
    results = {
        "num_modes": basis.size,
        "min_eigenvalue": float(basis.eigenvalues[0]),
        "max_eigenvalue": float(basis.eigenvalues[-1]),
        "all_positive": bool(basis.eigenvalues[0] > 0.0),
    }
    return results, {"modes": (["mode", "eigenvalue", "frequency"], rows)}


def cmd_evolve(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    sig = signature_analytic(config.m, basis)
    rng = np.random.default_rng(config.seed)
    a, b = random_datum(rng, basis), random_datum(rng, basis)
    ref_sym = symplectic(a, b, basis.grid)
    ref_norm = scalar_product(sig, a, a)
    rows = []
    worst_sym = worst_norm = 0.0
    for t in np.linspace(0.0, config.time, config.samples):
        at = propagate(a, float(t), config.m, basis)
        bt = propagate(b, float(t), config.m, basis)
        sym_drift = abs(symplectic(at, bt, basis.grid) - ref_sym) / abs(ref_sym)
        norm_drift = abs(scalar_product(sig, at, at) - ref_norm) / abs(ref_norm)
        worst_sym = max(worst_sym, sym_drift)
        worst_norm = max(worst_norm, norm_drift)
        rows.append([float(t), sym_drift, norm_drift])
    results = {
        "time_span": config.time,
        "max_symplectic_drift": worst_sym,
        "max_norm_drift": worst_norm,
    }
    return results, {"drift": (["t", "symplectic_drift", "norm_drift"], rows)}


def cmd_green(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    rows = []
    for refine in (1, 2):
        dt = config.dt / refine
        rng = np.random.default_rng(config.seed)
        times = time_window(-config.window / 2, config.window / 2, dt)
        f = random_test_function(rng, basis, times)
        rows.append(
            [
                dt,
                kg_residual(retarded_green(f, config.m), f, config.m),
                kg_residual(advanced_green(f, config.m), f, config.m),
            ]
        )
    results = {
        "retarded_refinement_ratio": rows[0][1] / rows[1][1],
        "advanced_refinement_ratio": rows[0][2] / rows[1][2],
    }
    return results, {
        "residuals": (["dt", "retarded_residual", "advanced_residual"], rows)
    }


def cmd_signature(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    sig = signature_analytic(config.m, basis)
    vals, _ = signature_spectrum(sig)
    rows = []
    for k in range(basis.size):
        lo, hi = sorted(vals[2 * k : 2 * k + 2])
        rows.append(
            [k, float(basis.eigenvalues[k]), float(sig.frequencies[k]), lo, hi]
        )
    results = {
        "mass": config.m,
        "max_deviation_from_pi": float(np.abs(np.abs(vals) - np.pi).max()),
        "negative_count": int((vals < 0).sum()),
        "positive_count": int((vals > 0).sum()),
    }
    return results, {
        "spectrum": (
            ["mode", "eigenvalue", "frequency", "eig_minus", "eig_plus"],
            rows,
        )
    }


def cmd_massdecomp(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    interval = MassInterval(config.m_lo, config.m_hi)
    weight = interval_weight(interval, config.mass_nodes)
    rng = np.random.default_rng(config.seed)
    families = [
        make_family(random_datum(rng, basis), basis, weight, interval)
        for _ in range(config.families)
    ]
    gram, report = spacetime_gram(
        families,
        dt=config.dt,
        t_max=config.t_max,
        tol=config.tol,
        t_ceiling=config.t_ceiling,
    )
    rows = []
    worst = 0.0
    pair_count = 0
    for i in range(config.families):
        for j in range(i, config.families):
            lhs, rhs = gram[i, j], mass_decomposition_pairing(families[i], families[j])
            rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
            worst = max(worst, rel)
            if j > i:
                pair_count += 1
            rows.append([i, j, lhs.real, lhs.imag, rhs.real, rhs.imag, rel])
    results = {
        "family_count": config.families,
        "pair_count": pair_count,
        "max_relative_error": worst,
        "converged": report.converged,
        "final_t": report.final_t,
        "stages": report.stages,
        "last_increment": report.last_increment,
    }
    return results, {
        "pairs": (
            ["i", "j", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "relative_error"],
            rows,
        )
    }


def cmd_reconstruct(config: ExperimentConfig, block_tol: float):
    basis = dirichlet_basis(config.n, config.l)
    interval = MassInterval(config.m_lo, config.m_hi)
    analytic = signature_analytic(config.m, basis)
    rows = []
    deviations = []
    for hw in (config.half_width, config.half_width / 2):
        rec, report = signature_reconstruct(
            config.m,
            basis,
            hw,
            tol=block_tol,
            interval=interval,
            num_nodes=config.mass_nodes,
            dt=config.dt,
            t_max=config.t_max,
            t_ceiling=config.t_ceiling,
        )
        dev = float(np.abs(rec.blocks - analytic.blocks).max())
        deviations.append(dev)
        rows.append(
            [
                hw,
                dev,
                report.hermiticity_defect,
                report.convergence.final_t,
                report.convergence.stages,
            ]
        )
    results = {
        "block_tolerance": block_tol,
        "deviation_at_half_width": deviations[0],
        "deviation_at_halved": deviations[1],
        "improvement_ratio": deviations[0] / deviations[1],
        "within_tolerance": bool(deviations[0] <= block_tol),
    }
    return results, {
        "convergence": (
            ["half_width", "max_deviation", "hermiticity_defect", "final_t", "stages"],
            rows,
        )
    }


def cmd_state(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    state = build_state(config.m, basis)
    suite = state_positivity_suite(
        state,
        seed=config.seed,
        trials=config.trials,
        t_span=config.window,
        dt=config.dt,
    )
    eigs = np.linalg.eigvalsh(0.5 * (suite.gram + suite.gram.conj().T))
    rows = [[k, float(val)] for k, val in enumerate(eigs)]
    rng = np.random.default_rng(config.seed + 1)
    times = time_window(-config.window / 2, config.window / 2, config.dt)
    im_worst = ccr_worst = 0.0
    for _ in range(3):
        f = random_test_function(rng, basis, times, real=True)
        g = random_test_function(rng, basis, times, real=True)
        w_fg = two_point(state, f, g)
        gf = causal_fundamental(f, config.m)
        gg = causal_fundamental(g, config.m)
        im_worst = max(
            im_worst, abs(w_fg.imag - 0.5 * symplectic(gf, gg, basis.grid).real)
        )
        anti = w_fg - two_point(state, g, f)
        ccr_worst = max(ccr_worst, abs(anti - 1j * gm_form(f, g, config.m)))
    results = {
        "trials": config.trials,
        "min_gram_eigenvalue": suite.min_eigenvalue,
        "hermiticity_defect": suite.hermiticity_defect,
        "diag_imag_max": suite.diag_imag_max,
        "im_identity_worst": im_worst,
        "ccr_identity_worst": ccr_worst,
    }
    return results, {"gram": (["index", "eigenvalue"], rows)}


def cmd_masslimit(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    _, table = massless_limit(basis)
    rows = [
        [float(m), float(nrm), float(bnd), float(nrm / bnd)]
        for m, nrm, bnd in zip(table.masses, table.norms, table.bounds)
    ]
    results = {
        "monotone_decrease": bool(np.all(np.diff(table.norms) < 0)),
        "max_mode_ratio": float((table.mode_norms / table.mode_bounds).max()),
    }
    return results, {
        "norms": (["mass", "norm_difference", "bound", "ratio"], rows)
    }


def cmd_crosscheck(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    sig = signature_analytic(config.m, basis)
    mink_blocks = cauchy_signature_blocks(sig.frequencies)
    rows = [
        [
            k,
            float(basis.eigenvalues[k]),
            float(sig.frequencies[k]),
            float(np.abs(mink_blocks[k] - sig.blocks[k]).max()),
        ]
        for k in range(basis.size)
    ]
    report = cross_check_lattice(config.m, basis)
    results = {
        "max_block_deviation": report.max_block_deviation,
        "max_eigenvalue_deviation": report.max_eigenvalue_deviation,
    }
    return results, {
        "blocks": (["mode", "eigenvalue", "frequency", "block_deviation"], rows)
    }


def cmd_wick(config: ExperimentConfig):
    basis = dirichlet_basis(config.n, config.l)
    state = build_state(config.m, basis)
    rng = np.random.default_rng(config.seed)
    times = time_window(-config.window / 2, config.window / 2, config.dt)
    count = 2 * config.wick_order
    fs = [random_test_function(rng, basis, times) for _ in range(count)]
    value = wick_n_point(state, fs)
    odd_value = wick_n_point(state, fs[: count - 1])
    matchings = pair_matchings(count)
    rows = []
    for idx, matching in enumerate(matchings):
        term = 1 + 0j
        for i, j in matching:
            term *= two_point(state, fs[i], fs[j])
        label = "|".join(f"{i}-{j}" for i, j in matching)
        rows.append([idx, label, term.real, term.imag])
    results = {
        "order": config.wick_order,
        "pairing_count": len(matchings),
        "value_re": value.real,
        "value_im": value.imag,
        "odd_case_re": odd_value.real,
        "odd_case_im": odd_value.imag,
    }
    return results, {
        "matchings": (["index", "pairs", "product_re", "product_im"], rows)
    }


_COMMANDS = {
    "spectrum": "lattice eigenvalues and frequencies",
    "evolve": "propagation with conservation drift report",
    "green": "Green operator residuals under time refinement",
    "signature": "analytic signature operator and its spectrum",
    "massdecomp": "spacetime pairing vs mass-decomposition identity",
    "reconstruct": "signature blocks from narrow-weight pairings",
    "state": "two-point positivity and commutation identities",
    "masslimit": "operator-norm convergence to the massless limit",
    "crosscheck": "lattice blocks vs closed-form mode blocks",
    "wick": "quasi-free n-point function over pair matchings",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--out", metavar="DIR", default="results", help="output directory")
    common.add_argument("--seed", type=int, help="override the run seed")
    common.add_argument("--tol", type=float, help="override the tolerance")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser = argparse.ArgumentParser(
        prog="kgsig",
        description="signature-operator experiments on lattice Klein-Gordon fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in _COMMANDS.items():
        sub.add_parser(name, help=text, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        config = apply_overrides(load_config(args.config), seed=args.seed, tol=args.tol)
        validate_config(config, args.command)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "reconstruct":
            block_tol = args.tol if args.tol is not None else 1e-3
            results, tables = cmd_reconstruct(config, block_tol)
        else:
            results, tables = globals()[f"cmd_{args.command}"](config)
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3
    _emit(args.command, config, results, tables, Path(args.out), args.quiet, started)
    return 0


if __name__ == "__main__":
    sys.exit(main())
