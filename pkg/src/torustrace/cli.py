"""Command-line interface and deterministic report emission.

Every run is fully specified by its command line (no configuration files).
Reports carry {header, body, diagnostics}; floats are serialized with 17
significant digits, complex values as [re, im] pairs, lines end with LF, and
field order is fixed, so identical inputs produce byte-identical output.  The
header timestamp honours SOURCE_DATE_EPOCH and is null otherwise.

Exit codes: 0 success, 2 validation error, 3 numerical failure (eigensolver
breakdown, or a divergence flag under --require-convergent).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .besov import BLOCK_WEIGHTS, BesovParams, besov_norm, block_norm_table
from .criteria import check_t1, check_t2, check_tt1, nuclear_quasinorm_bound
from .groups import (
    DivergenceWarning,
    bessel_terms,
    bessel_trace,
    enumerate_dual,
    heat_terms,
    heat_trace,
    partial_sum_convergence,
    series_diagnostics,
)
from .harmonic import (
    FourierCoefficients,
    FrequencyLattice,
    PeriodicFunction,
    inverse_transform,
    min_grid_size,
)
from .io import load_periodic_function, load_sampled_symbol
from .quantize import EigensolverError, eigen_residuals, eigenvalues, operator_matrix
from .symbols import (
    BracketPower,
    GaussianDecay,
    Symbol,
    bessel_symbol,
    character_symbol,
    estimate_order,
    fourier_decay_constant,
    heat_symbol,
    modulated_symbol,
)
from .traces import lidskii_compare, nuclear_trace, spectral_trace, tail_estimate

SCHEMA_VERSION = 1
NORMALIZATION_NOTE = (
    "period-1 torus characters exp(i 2 pi <x, xi>); torus lambda = |xi|^2; "
    "su2 lambda = l(l+1), d = 2l+1"
)


class ValidationError(Exception):
    """Bad flags or files; the message carries a one-line remedy."""


class NumericalFailure(Exception):
    pass


# ---------------------------------------------------------------------------
# Deterministic rendering
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_fmt_float(obj.real)}, {_fmt_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{inner}"{k}": {render_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        simple = all(
            isinstance(v, (int, float, complex, np.integer, np.floating, np.complexfloating, str))
            for v in items
        )
        if simple:
            return "[" + ", ".join(render_json(v, indent + 1) for v in items) + "]"
        rows = [f"{inner}{render_json(v, indent + 1)}" for v in items]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_csv(header: str, rows: list[list]) -> str:
    lines = [header]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append(_fmt_float(float(cell)).strip('"'))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def make_header(block_weight: str | None = None) -> dict:
    stamp = None
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        stamp = datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()
    return {
        "tool": "torustrace",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "normalization": NORMALIZATION_NOTE,
        "block_weight": block_weight,
        "timestamp": stamp,
    }


def emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {output}: {exc}; pick a writable path") from exc


# ---------------------------------------------------------------------------
# Flag plumbing
# ---------------------------------------------------------------------------


def _add_symbol_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--symbol",
        choices=["bessel", "heat", "modulated", "character"],
        help="catalog family: bessel(<xi>^m), heat(e^{-t|xi|^2}), "
        "modulated((c+cos 2 pi x1) g(xi)), character(e^{i 2 pi x1})",
    )
    sub.add_argument("--symbol-file", help="sampled-symbol JSON file")
    sub.add_argument("--m", type=float, help="bracket-power exponent (signed: -4 decays)")
    sub.add_argument("--t", type=float, help="heat/gaussian time parameter")
    sub.add_argument("--c", type=float, default=2.0, help="modulation offset (default 2)")
    sub.add_argument(
        "--g",
        choices=["bracket", "gaussian"],
        default="bracket",
        help="frequency factor of the modulated family",
    )
    sub.add_argument("--dim", type=int, default=1, choices=[1, 2])


def build_symbol(args) -> Symbol:
    if args.symbol_file:
        if args.symbol:
            raise ValidationError("give either --symbol or --symbol-file, not both")
        return load_sampled_symbol(args.symbol_file)
    if not args.symbol:
        raise ValidationError("missing symbol: pass --symbol FAMILY or --symbol-file PATH")
    if args.symbol == "bessel":
        if args.m is None:
            raise ValidationError("bessel symbol needs --m EXPONENT")
        return bessel_symbol(args.m, args.dim)
    if args.symbol == "heat":
        if args.t is None:
            raise ValidationError("heat symbol needs --t TIME > 0")
        return heat_symbol(args.t, args.dim)
    if args.symbol == "modulated":
        if args.g == "bracket":
            if args.m is None:
                raise ValidationError("modulated bracket symbol needs --m EXPONENT")
            g = BracketPower(args.m)
        else:
            if args.t is None:
                raise ValidationError("modulated gaussian symbol needs --t TIME > 0")
            g = GaussianDecay(args.t)
        return modulated_symbol(args.c, g, args.dim)
    return character_symbol(args.dim)


def _stock_function(k_max: int, grid_size: int) -> PeriodicFunction:
    """sum_{|xi| <= K} <xi>^{-2} e^{i 2 pi x xi} on a margin-safe grid."""
    lattice = FrequencyLattice(1, k_max)
    coeffs = lattice.brackets() ** -2.0
    return inverse_transform(FourierCoefficients(lattice, coeffs), grid_size)


def _character_function(k: int, grid_size: int) -> PeriodicFunction:
    lattice = FrequencyLattice(1, abs(k) if k != 0 else 1)
    coeffs = np.zeros(len(lattice), dtype=np.complex128)
    coeffs[lattice.index_of((k,))] = 1.0
    return inverse_transform(FourierCoefficients(lattice, coeffs), grid_size)


def build_function(args, analysis_radius: int | None = None) -> PeriodicFunction:
    sources = [args.input is not None, args.character is not None, args.stock is not None]
    if sum(sources) != 1:
        raise ValidationError(
            "give exactly one input: --input FILE, --character K, or --stock K"
        )
    if args.input is not None:
        try:
            return load_periodic_function(args.input)
        except (OSError, ValueError) as exc:
            raise ValidationError(f"malformed function file: {exc}") from exc
    content = abs(args.character) if args.character is not None else args.stock
    needed = min_grid_size(max(content, 1, analysis_radius or 0))
    grid = getattr(args, "grid", None) or needed
    if grid < needed:
        raise ValidationError(
            f"--grid {grid} is below the anti-aliasing margin {needed}; raise it"
        )
    if args.character is not None:
        return _character_function(args.character, grid)
    return _stock_function(args.stock, grid)


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"{flag} wants a comma-separated integer list, got {text!r}") from exc


def _parse_multi_index(text: str, dim: int, flag: str) -> tuple[int, ...]:
    vals = _parse_int_list(text, flag)
    if len(vals) == 1 and dim == 2:
        vals = vals + [0]
    if len(vals) != dim or any(v < 0 for v in vals):
        raise ValidationError(
            f"{flag} must be {dim} nonnegative integers for dim={dim}, got {text!r}"
        )
    return tuple(vals)


def _require(condition: bool, remedy: str) -> None:
    if not condition:
        raise ValidationError(remedy)


def _verdict_payload(verdict) -> dict:
    witness = None
    if verdict.witness is not None:
        witness = {
            "series": verdict.witness.series,
            "labels": [float(x) for x in verdict.witness.labels],
            "partial_sums": [float(x) for x in verdict.witness.partial_sums],
            "tail_estimate": verdict.witness.tail_estimate,
            "certified": verdict.witness.certified,
            "rule": verdict.witness.rule,
            "note": verdict.witness.note,
        }
    return {
        "satisfied": verdict.satisfied,
        "derived_params": dict(verdict.derived_params),
        "violated_clauses": [
            {"description": c.description, "lhs": c.lhs, "relation": c.op, "rhs": c.rhs}
            for c in verdict.violated_clauses
        ],
        "witness": witness,
    }


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def _run_trace(args) -> tuple[dict, dict, str | None]:
    a = build_symbol(args)
    _require(args.radius >= 0, "--radius must be >= 0")
    lattice = FrequencyLattice(a.dim, args.radius)
    nuc = nuclear_trace(a, lattice)
    spec, eigs = spectral_trace(a, lattice)
    body = {
        "radius": args.radius,
        "nuclear_trace": nuc,
        "spectral_trace": spec,
        "abs_difference": abs(nuc - spec),
        "eigenvalue_count": int(eigs.size),
    }
    diagnostics: dict = {"trace_identity_tolerance": 1e-9}
    if args.order_hint is not None:
        diagnostics["tail_estimate"] = tail_estimate(a, lattice, args.order_hint)
    if args.certify_w is not None:
        bound = nuclear_quasinorm_bound(
            a, 1.0, BesovParams(args.certify_w, 2.0, 2.0), lattice, args.block_weight
        )
        diagnostics["quasinorm_certificate"] = {
            "w": args.certify_w,
            "p": 2.0,
            "q": 2.0,
            "r": 1.0,
            "bound": bound,
        }
    return body, diagnostics, None


def _run_lidskii(args) -> tuple[dict, dict, str | None]:
    a = build_symbol(args)
    radii = _parse_int_list(args.radii, "--radii")
    _require(bool(radii), "--radii needs at least one radius, e.g. --radii 4,8,16")
    report = lidskii_compare(a, radii)
    history = [
        {
            "radius": rec.radius,
            "nuclear": rec.nuclear,
            "spectral": rec.spectral,
            "abs_diff": rec.abs_diff,
        }
        for rec in report.history
    ]
    body = {
        "radii": radii,
        "history": history,
        "nuclear_trace": report.nuclear_trace,
        "spectral_trace": report.spectral_trace,
        "tail_estimate": report.tail_estimate,
        "history_converged": report.history_converged,
    }
    if args.require_convergent and report.history_converged is False:
        raise NumericalFailure(
            "nuclear-trace increments do not shrink geometrically across the radii"
        )
    csv_text = render_csv(
        "N,nuclear_re,nuclear_im,spectral_re,spectral_im,abs_diff",
        [
            [rec.radius, rec.nuclear.real, rec.nuclear.imag, rec.spectral.real,
             rec.spectral.imag, rec.abs_diff]
            for rec in report.history
        ],
    )
    diagnostics = {
        "increment_rule": "converged when each increment <= 0.9 x previous",
        "note": "nuclear/spectral agreement at every radius is a property of the "
        "finite compression; summability of the full operator is what the "
        "nuclearity checkers certify",
    }
    return body, diagnostics, csv_text


def _run_besov_norm(args) -> tuple[dict, dict, str | None]:
    _require(args.radius is not None, "pass --radius N for the analysis lattice")
    f = build_function(args, analysis_radius=args.radius)
    lattice = FrequencyLattice(f.dim, args.radius)
    params = BesovParams(args.w, args.p, args.q)
    value = besov_norm(f, params, lattice, args.block_weight)
    blocks = block_norm_table(f, args.p, lattice, args.block_weight)
    body = {
        "w": args.w,
        "p": args.p,
        "q": args.q,
        "norm": value,
        "blocks": [{"m": m, "lp_norm": v} for m, v in blocks],
    }
    csv_text = render_csv("m,block_lp_norm", [[m, v] for m, v in blocks])
    return body, {}, csv_text


def _run_check_class(args) -> tuple[dict, dict, str | None]:
    a = build_symbol(args)
    _require(args.radius is not None and args.radius >= 8, "--radius must be >= 8 for the fit")
    lattice = FrequencyLattice(a.dim, args.radius)
    alpha = _parse_multi_index(args.alpha_idx, a.dim, "--alpha-idx")
    beta = _parse_multi_index(args.beta_idx, a.dim, "--beta-idx")
    m_hat, c_hat = estimate_order(a, alpha, beta, lattice)
    body: dict = {
        "alpha": list(alpha),
        "beta": list(beta),
        "m_hat": m_hat,
        "C_hat": c_hat,
        "claimed_order": a.claimed_order,
    }
    if a.claimed_order is not None and math.isfinite(a.claimed_order):
        body["expected_slope"] = (
            a.claimed_order - a.claimed_rho * sum(alpha) + a.claimed_delta * sum(beta)
        )
    diagnostics: dict = {"fit": "shell-sup log-log least squares, brackets < 2 excluded"}
    if args.decay_k is not None:
        _require(args.decay_m is not None, "--decay-k also needs --decay-m ORDER")
        delta = args.decay_delta if args.decay_delta is not None else 0.0
        c_est = fourier_decay_constant(a, args.decay_k, args.decay_m, delta, lattice)
        body["decay_constant"] = {
            "k": args.decay_k,
            "m": args.decay_m,
            "delta": delta,
            "C_est": c_est,
        }
        if a.x_bandwidth() is None:
            diagnostics["decay_note"] = (
                "sampled symbol: smoothness in x not verifiable, conclusion-only run"
            )
    return body, diagnostics, None


def _run_nuclearity(args) -> tuple[dict, dict, str | None]:
    if args.theorem in ("t1", "t2"):
        for flag in ("n", "r", "alpha", "p1", "k", "delta", "m", "w2"):
            _require(getattr(args, flag) is not None, f"--theorem {args.theorem} needs --{flag}")
        checker = check_t1 if args.theorem == "t1" else check_t2
        verdict = checker(
            n=args.n, r=args.r, alpha=args.alpha, p1=args.p1, k=args.k,
            delta=args.delta, m=args.m, w2=args.w2, p2=args.p2, q2=args.q2,
        )
    else:
        _require(args.case is not None, "--theorem tt1 needs --case 1|2|3|4")
        for flag in ("r", "p", "q", "cutoff"):
            _require(getattr(args, flag) is not None, f"--theorem tt1 needs --{flag}")
        dual = enumerate_dual(args.group, args.cutoff, dim=args.dim)
        if args.symbol == "heat":
            _require(args.t is not None, "tt1 heat multiplier needs --t TIME")
            t = args.t
            symbol_fn = lambda p: math.exp(-t * p.lam)  # noqa: E731
        else:
            _require(args.m is not None, "tt1 bracket multiplier needs --m EXPONENT")
            m = args.m
            symbol_fn = lambda p: p.bracket**m  # noqa: E731
        try:
            verdict = check_tt1(dual, symbol_fn, args.r, args.p, args.q, args.case)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    body = _verdict_payload(verdict)
    return body, {"strictness": "strict inequalities checked strictly"}, None


def _run_heat_trace(args) -> tuple[dict, dict, str | None]:
    _require(args.t is not None and args.t > 0, "--t must be > 0")
    _require(args.cutoff is not None and args.cutoff >= 0, "--cutoff must be >= 0")
    dual = enumerate_dual(args.group, args.cutoff, dim=args.dim,
                          half_integers=not args.integer_spins)
    value = heat_trace(dual, args.t)
    diag = series_diagnostics(dual, heat_terms(dual, args.t))
    body = {"group": args.group, "dim": args.dim, "t": args.t, "cutoff": args.cutoff,
            "value": value}
    return body, diag, None


def _run_bessel_trace(args) -> tuple[dict, dict, str | None]:
    _require(args.alpha is not None, "pass --alpha EXPONENT")
    _require(args.cutoff is not None and args.cutoff >= 0, "--cutoff must be >= 0")
    dual = enumerate_dual(args.group, args.cutoff, dim=args.dim,
                          half_integers=not args.integer_spins)
    divergent = args.alpha <= dual.group_dimension
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DivergenceWarning)
        try:
            value = bessel_trace(dual, args.alpha, tail_correction=args.tail_correct)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    diag = series_diagnostics(dual, bessel_terms(dual, args.alpha))
    diag["divergent"] = divergent
    body = {
        "group": args.group,
        "dim": args.dim,
        "alpha": args.alpha,
        "cutoff": args.cutoff,
        "tail_corrected": bool(args.tail_correct),
        "value": value,
    }
    if divergent and args.require_convergent:
        raise NumericalFailure(
            f"alpha = {args.alpha} diverges on a dual of dimension {dual.group_dimension}"
        )
    return body, diag, None


def _run_approx_demo(args) -> tuple[dict, dict, str | None]:
    f = build_function(args, analysis_radius=args.radius)
    n_values = [float(tok) for tok in args.n_values.split(",") if tok.strip()]
    _require(bool(n_values), "--n-values needs a comma-separated list, e.g. 1,2,4,8")
    lattice = None
    if args.radius is not None:
        lattice = FrequencyLattice(f.dim, args.radius)
    params = BesovParams(args.w, args.p, args.q)
    rows = partial_sum_convergence(f, params, n_values, lattice, args.block_weight)
    body = {
        "w": args.w,
        "p": args.p,
        "q": args.q,
        "table": [{"N": n, "besov_error": e} for n, e in rows],
    }
    csv_text = render_csv("N,besov_error", [[n, e] for n, e in rows])
    return body, {"cutoff": "frequencies with bracket <= N are kept"}, csv_text


def _run_spectrum(args) -> tuple[dict, dict, str | None]:
    a = build_symbol(args)
    _require(args.radius is not None and args.radius >= 0, "pass --radius N >= 0")
    lattice = FrequencyLattice(a.dim, args.radius)
    matrix = operator_matrix(a, lattice)
    eigs = eigenvalues(matrix)
    residual_max = float(eigen_residuals(matrix).max()) if eigs.size else 0.0
    if args.matrix_csv:
        rows = []
        for i in range(matrix.side):
            for j in range(matrix.side):
                entry = matrix.entries[i, j]
                rows.append([i, j, entry.real, entry.imag])
        emit(render_csv("eta_index,xi_index,re,im", rows), args.matrix_csv)
    body = {
        "radius": args.radius,
        "eigenvalues": [complex(v) for v in eigs],
        "trace": matrix.trace(),
    }
    csv_text = render_csv(
        "index,re,im", [[i, v.real, v.imag] for i, v in enumerate(eigs)]
    )
    return body, {"max_residual": residual_max, "order": "descending |lambda|, ties by argument"}, csv_text


HANDLERS = {
    "trace": _run_trace,
    "lidskii": _run_lidskii,
    "besov-norm": _run_besov_norm,
    "check-class": _run_check_class,
    "nuclearity": _run_nuclearity,
    "heat-trace": _run_heat_trace,
    "bessel-trace": _run_bessel_trace,
    "approx-demo": _run_approx_demo,
    "spectrum": _run_spectrum,
}

CSV_CAPABLE = {"lidskii", "besov-norm", "approx-demo", "spectrum"}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torustrace",
        description="Toroidal operator calculus: traces, dyadic norms, nuclearity checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--block-weight", choices=list(BLOCK_WEIGHTS), default="abs",
                        dest="block_weight")

    p = sub.add_parser("trace", help="nuclear and spectral trace at one radius")
    _add_symbol_flags(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--order-hint", type=float, dest="order_hint",
                   help="power-law order for the truncation tail bound")
    p.add_argument("--certify-w", type=float, dest="certify_w",
                   help="also report the quasi-norm certificate at this weight")
    common(p)

    p = sub.add_parser("lidskii", help="trace identity across increasing radii")
    _add_symbol_flags(p)
    p.add_argument("--radii", required=True, help="comma-separated increasing radii")
    p.add_argument("--require-convergent", action="store_true", dest="require_convergent")
    common(p)

    p = sub.add_parser("besov-norm", help="dyadic-block norm of a sampled function")
    p.add_argument("--input", help="periodic-function JSON file")
    p.add_argument("--character", type=int, help="use e^{i 2 pi K x} instead of a file")
    p.add_argument("--stock", type=int, help="use the stock family truncated at K")
    p.add_argument("--grid", type=int, help="grid size override")
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--radius", type=int, required=True)
    common(p)

    p = sub.add_parser("check-class", help="empirical symbol order and Fourier decay")
    _add_symbol_flags(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--alpha-idx", default="0", dest="alpha_idx",
                   help="difference multi-index, comma separated")
    p.add_argument("--beta-idx", default="0", dest="beta_idx",
                   help="x-derivative multi-index, comma separated")
    p.add_argument("--decay-k", type=int, dest="decay_k")
    p.add_argument("--decay-m", type=float, dest="decay_m")
    p.add_argument("--decay-delta", type=float, dest="decay_delta")
    common(p)

    p = sub.add_parser("nuclearity", help="run a sufficient-condition checker")
    p.add_argument("--theorem", choices=["t1", "t2", "tt1"], required=True)
    p.add_argument("--case", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--p1", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--p2", type=float, default=2.0)
    p.add_argument("--q2", type=float, default=2.0)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--group", choices=["torus", "su2"], default="torus")
    p.add_argument("--dim", type=int, default=1, choices=[1, 2])
    p.add_argument("--cutoff", type=float)
    p.add_argument("--symbol", choices=["bessel", "heat"], default="bessel")
    p.add_argument("--t", type=float)
    common(p)

    p = sub.add_parser("heat-trace", help="sum d^2 exp(-t lambda) over a dual")
    p.add_argument("--group", choices=["torus", "su2"], required=True)
    p.add_argument("--dim", type=int, default=1, choices=[1, 2])
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--cutoff", type=float, required=True)
    p.add_argument("--integer-spins", action="store_true", dest="integer_spins")
    common(p)

    p = sub.add_parser("bessel-trace", help="sum d^2 bracket^(-alpha) over a dual")
    p.add_argument("--group", choices=["torus", "su2"], required=True)
    p.add_argument("--dim", type=int, default=1, choices=[1, 2])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--cutoff", type=float, required=True)
    p.add_argument("--tail-correct", action="store_true", dest="tail_correct")
    p.add_argument("--require-convergent", action="store_true", dest="require_convergent")
    p.add_argument("--integer-spins", action="store_true", dest="integer_spins")
    common(p)

    p = sub.add_parser("approx-demo", help="partial-sum convergence in a dyadic norm")
    p.add_argument("--input")
    p.add_argument("--character", type=int)
    p.add_argument("--stock", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--n-values", required=True, dest="n_values")
    p.add_argument("--radius", type=int)
    common(p)

    p = sub.add_parser("spectrum", help="eigenvalues of the compressed operator")
    _add_symbol_flags(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--matrix-csv", dest="matrix_csv",
                   help="also export the matrix as eta,xi,re,im CSV")
    common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    handler = HANDLERS[args.command]
    try:
        body, diagnostics, csv_text = handler(args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except EigensolverError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    except NumericalFailure as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    if args.format == "csv":
        if args.command not in CSV_CAPABLE or csv_text is None:
            sys.stderr.write(
                f"error: {args.command} has no CSV schema; use --format json\n"
            )
            return 2
        try:
            emit(csv_text, args.output)
        except ValidationError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
        return 0
    report = {
        "header": make_header(getattr(args, "block_weight", None)),
        "body": body,
        "diagnostics": diagnostics,
    }
    try:
        emit(render_json(report) + "\n", args.output)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
