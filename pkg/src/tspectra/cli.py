"""Command-line front end: symbol in, CSV reports and plot scripts out.

Commands compose the library pipeline (symbol -> Toeplitz spectra ->
expansion -> Fourier recovery -> grids / root curves) and write one run
manifest next to every output, so any run can be replayed bitwise from
its manifest.  Exit codes: 0 success, 2 input error, 3 numerical failure,
4 resource cap exceeded (rerun with --expensive).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .expansion import (
    compute_expansion,
    expansion_sizes,
    interp_extrap_eigs,
    make_grid,
    read_expansion_csv,
    symbol_eig_source,
    write_expansion_csv,
)
from .linalg import SingularMatrix
from .eigensolver import NoConvergence, eigenvalues
from .ordering import (
    CHAIN_FROM_ORIGIN,
    IMAG_ASC,
    IMAG_DESC,
    REAL_ASC,
    OrderingStrategy,
    nearest_to_symbol,
    order,
)
from .precision import PrecisionContext
from .reconstruction import (
    NoBracket,
    evaluate_g_tilde,
    gamma_curves,
    perfect_grid,
    read_fourier_csv,
    recover_spectral_function,
    write_fourier_csv,
    write_gamma_csv,
)
from .symbols import PRESET_NAMES, evaluate, format_symbol, parse_symbol, preset
from .toeplitz import build_toeplitz

ORDER_FLAGS = {
    "real-asc": "real_asc",
    "imag-asc": "imag_asc",
    "imag-desc": "imag_desc",
    "chain": "chain_from_origin",
    "nearest-symbol": "nearest_to_symbol",
}

_EXPENSIVE_SECONDS = 900.0  # refuse longer runs unless --expensive


def _resolve_symbol(source: str):
    if source in PRESET_NAMES:
        return preset(source)
    if os.path.exists(source):
        text = Path(source).read_text(encoding="utf-8")
        return parse_symbol(text)
    return parse_symbol(source)


def _strategy(flag: str, sym) -> OrderingStrategy:
    kind = ORDER_FLAGS[flag]
    if kind == "nearest_to_symbol":
        return nearest_to_symbol(sym)
    return {
        "real_asc": REAL_ASC,
        "imag_asc": IMAG_ASC,
        "imag_desc": IMAG_DESC,
        "chain_from_origin": CHAIN_FROM_ORIGIN,
    }[kind]


def _estimate_seconds(max_n: int, bits: int) -> float:
    """Very rough single-machine cost model for the largest eigensolve."""
    if bits <= 53:
        return 4.1 * (max_n / 407.0) ** 3
    return 4.3 * (max_n / 100.0) ** 3 * (bits / 256.0) ** 1.5


def _gate_expensive(max_n: int, bits: int, expensive: bool) -> None:
    est = _estimate_seconds(max_n, bits)
    if est > _EXPENSIVE_SECONDS and not expensive:
        raise ResourceCap(
            f"estimated ~{est / 60.0:.0f} min for the largest eigensolve "
            f"(n = {max_n}, {bits} bits); rerun with --expensive to proceed"
        )
    if expensive and est > _EXPENSIVE_SECONDS:
        print(f"expensive run accepted: estimated ~{est / 60.0:.0f} min", file=sys.stderr)


class ResourceCap(Exception):
    pass


def _write_manifest(out_dir: Path, command: str, argv, **fields) -> None:
    manifest = {
        "command": command,
        "argv": list(argv),
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "out_dir": str(out_dir),
    }
    manifest.update(fields)
    path = out_dir / f"{command}_manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _threads() -> int:
    raw = os.environ.get("TSPECTRA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_eig(args, argv) -> int:
    sym = _resolve_symbol(args.symbol)
    ctx = PrecisionContext(args.prec)
    _gate_expensive(args.n, args.prec, args.expensive)
    strategy = _strategy(args.order, sym)
    A = build_toeplitz(sym, args.n, ctx)
    result = eigenvalues(A, ctx, balance=not args.no_balance)
    spectrum = order(result.values, strategy, ctx)
    grid = make_grid(args.n, ctx)
    out = _out_dir(args)
    with open(out / "spectrum.csv", "w", encoding="utf-8") as fh:
        fh.write("j,theta,lambda_re,lambda_im\n")
        for j in range(1, args.n + 1):
            lam = spectrum.values[j - 1]
            fh.write(
                f"{j},{ctx.format_real(grid.thetas[j - 1])},"
                f"{ctx.format_real(lam.real)},{ctx.format_real(lam.imag)}\n"
            )
    _write_manifest(
        out, "eig", argv,
        symbol_source=format_symbol(sym), n=args.n, precision_bits=args.prec,
        ordering=spectrum.strategy, balance=not args.no_balance,
        iterations=result.iterations,
    )
    print(f"wrote {out / 'spectrum.csv'} ({args.n} eigenvalues, {args.prec} bits)")
    return 0


def cmd_expand(args, argv) -> int:
    sym = _resolve_symbol(args.symbol)
    ctx = PrecisionContext(args.prec)
    if args.n0 < args.alpha + 1:
        print(f"error: --n0 must be >= alpha+1 = {args.alpha + 1}", file=sys.stderr)
        return 2
    sizes = expansion_sizes(args.n0, args.alpha)
    _gate_expensive(sizes[-1], args.prec, args.expensive)
    strategy = _strategy(args.order, sym)
    source = symbol_eig_source(sym, strategy, balance=not args.no_balance)
    table = compute_expansion(args.n0, args.alpha, source, ctx, max_workers=min(_threads(), args.alpha + 1))
    out = _out_dir(args)
    with open(out / "expansion.csv", "w", encoding="utf-8") as fh:
        write_expansion_csv(table, fh)
    _write_manifest(
        out, "expand", argv,
        symbol_source=format_symbol(sym), n0=args.n0, alpha=args.alpha,
        precision_bits=args.prec, ordering=strategy.describe(),
        balance=not args.no_balance, sizes_used=table.sizes_used,
    )
    print(f"wrote {out / 'expansion.csv'} (n0={args.n0}, alpha={args.alpha}, {args.prec} bits)")
    return 0


def _infer_bits(csv_path: Path, explicit, producer: str) -> int:
    if explicit:
        return explicit
    manifest = csv_path.parent / f"{producer}_manifest.json"
    if manifest.exists():
        with open(manifest, encoding="utf-8") as fh:
            return int(json.load(fh).get("precision_bits", 53))
    return 53


def cmd_fourier(args, argv) -> int:
    path = Path(args.expansion_csv)
    bits = _infer_bits(path, args.prec, "expand")
    ctx = PrecisionContext(bits)
    with open(path, encoding="utf-8") as fh:
        table = read_expansion_csv(fh, bits)
    rec = recover_spectral_function(list(table.c[0, :]), ctx)
    out = _out_dir(args)
    with open(out / "fourier.csv", "w", encoding="utf-8") as fh:
        write_fourier_csv(rec, fh)
    _write_manifest(
        out, "fourier", argv,
        expansion_csv=str(path), n0=table.n0, precision_bits=bits,
        noise_floor=None if rec.noise_floor is None else ctx.format_real(rec.noise_floor),
    )
    print(f"wrote {out / 'fourier.csv'} ({table.n0} coefficients, {bits} bits)")
    return 0


def cmd_gamma(args, argv) -> int:
    sym = _resolve_symbol(args.symbol)
    path = Path(args.expansion_csv)
    bits = _infer_bits(path, args.prec, "expand")
    ctx = PrecisionContext(bits)
    with open(path, encoding="utf-8") as fh:
        table = read_expansion_csv(fh, bits)
    curves = gamma_curves(sym, list(table.c[0, :]), ctx)
    out = _out_dir(args)
    with open(out / "gamma.csv", "w", encoding="utf-8") as fh:
        write_gamma_csv(curves, fh, ctx)
    _write_manifest(
        out, "gamma", argv,
        symbol_source=format_symbol(sym), expansion_csv=str(path),
        n0=table.n0, precision_bits=bits, branches=curves.branches.shape[0],
    )
    print(f"wrote {out / 'gamma.csv'} ({curves.branches.shape[0]} branches)")
    return 0


def cmd_grid(args, argv) -> int:
    path = Path(args.spectrum_csv)
    bits = args.prec or 53
    ctx = PrecisionContext(bits)
    lam_re, lam_im = [], []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header != ["j", "theta", "lambda_re", "lambda_im"]:
            print("error: not a spectrum CSV", file=sys.stderr)
            return 2
        for line in fh:
            if not line.strip():
                continue
            cells = line.strip().split(",")
            lam_re.append(ctx.parse_real(cells[2]))
            lam_im.append(ctx.parse_real(cells[3]))
    targets = lam_re if args.component == "re" else lam_im

    source = args.source
    if source not in PRESET_NAMES and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            head = fh.readline()
        if head.startswith("k,ghat_re"):
            with open(source, encoding="utf-8") as fh:
                rec = read_fourier_csv(fh, bits)

            def g_component(t):
                z = evaluate_g_tilde(rec, t, ctx)
                return z.real if args.component == "re" else z.imag

        else:
            sym = _resolve_symbol(source)

            def g_component(t):
                z = evaluate(sym, t, ctx)
                return z.real if args.component == "re" else z.imag

    else:
        sym = _resolve_symbol(source)

        def g_component(t):
            z = evaluate(sym, t, ctx)
            return z.real if args.component == "re" else z.imag

    xi = perfect_grid(g_component, targets, ctx)
    out = _out_dir(args)
    with open(out / "grid.csv", "w", encoding="utf-8") as fh:
        fh.write("j,xi\n")
        for j, x in enumerate(xi, start=1):
            fh.write(f"{j},{ctx.format_real(x)}\n")
    _write_manifest(
        out, "grid", argv,
        source=source, spectrum_csv=str(path), component=args.component,
        precision_bits=bits,
    )
    print(f"wrote {out / 'grid.csv'} ({len(xi)} angles, component {args.component})")
    return 0


_PLOT_RECIPES = {
    "spectrum": (
        "j,theta,lambda_re,lambda_im",
        "plot DATA using 3:4 with points pt 7 ps 0.6 title 'eigenvalues'\n",
        "set xlabel 'Re'\nset ylabel 'Im'\n",
    ),
    "expansion": (
        "theta,c0_re,c0_im",
        None,  # built dynamically from the header
        "set xlabel 'theta'\nset ylabel 'c_k'\n",
    ),
    "fourier": (
        "k,ghat_re,ghat_im",
        "plot DATA using 1:(abs($2)) with points pt 7 title '|ghat re|', "
        "DATA using 1:(abs($3)) with points pt 9 title '|ghat im|'\n",
        "set logscale y\nset xlabel 'k'\nset ylabel '|ghat_k|'\n",
    ),
    "gamma": (
        "branch,theta,z_re,z_im",
        "plot for [b=0:31] DATA using ($1==b?$3:1/0):4 with points pt 7 ps 0.4 title sprintf('branch %d', b)\n",
        "set xlabel 'Re z'\nset ylabel 'Im z'\n",
    ),
}


def cmd_plot(args, argv) -> int:
    path = Path(args.csv)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
    kind = None
    for name, (prefix, _, _) in _PLOT_RECIPES.items():
        if header.startswith(prefix):
            kind = name
            break
    if kind is None:
        print(f"error: unrecognized CSV header {header!r}", file=sys.stderr)
        return 2
    out = _out_dir(args)
    script = out / f"plot_{kind}.gp"
    prefix, body, axes = _PLOT_RECIPES[kind]
    if kind == "expansion":
        cols = header.split(",")
        series = []
        for c in range(1, len(cols)):
            series.append(f"DATA using 1:{c + 1} with lines title '{cols[c]}'")
        body = "plot " + ", ".join(series) + "\n"
    png = out / f"plot_{kind}.png"
    with open(script, "w", encoding="utf-8") as fh:
        fh.write("set datafile separator ','\n")
        fh.write("set terminal png size 900,640\n")
        fh.write(f"set output '{png}'\n")
        fh.write("set key outside\n")
        fh.write(axes)
        fh.write(body.replace("DATA", f"'{path}'"))
    _write_manifest(out, "plot", argv, csv=str(path), kind=kind, script=str(script))
    print(f"wrote {script}")
    return 0


def cmd_preset(args, argv) -> int:
    if args.action == "list":
        for name in PRESET_NAMES:
            print(f"{name}: {format_symbol(preset(name))}")
        return 0
    print("error: unknown preset action", file=sys.stderr)
    return 2


def cmd_replay(args, argv) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        manifest = json.load(fh)
    recorded = list(manifest["argv"])
    # strip any recorded output directory and substitute the new one
    cleaned = []
    skip = False
    for token in recorded:
        if skip:
            skip = False
            continue
        if token == "--out":
            skip = True
            continue
        if token.startswith("--out="):
            continue
        cleaned.append(token)
    cleaned += ["--out", args.out]
    return main(cleaned)


def _add_common(p: argparse.ArgumentParser, order_flag: bool = True) -> None:
    p.add_argument("--prec", type=int, default=53, metavar="BITS", help="working precision in bits (default 53)")
    if order_flag:
        p.add_argument("--order", choices=sorted(ORDER_FLAGS), default="real-asc", help="eigenvalue ordering strategy")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory")
    p.add_argument("--expensive", action="store_true", help="allow paper-scale runs (hours)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tspectra",
        description="Approximate complex Toeplitz spectra and spectral functions at configurable precision",
    )
    parser.add_argument("--version", action="version", version=f"tspectra {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="ordered spectrum of T_n(f)")
    p.add_argument("symbol", help="preset name, symbol text, or symbol file")
    p.add_argument("--n", type=int, required=True, help="matrix dimension")
    p.add_argument("--no-balance", action="store_true", help="disable diagonal balancing")
    _add_common(p)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("expand", help="fit expansion functions from sizes 2^k(n0+1)-1")
    p.add_argument("symbol")
    p.add_argument("--n0", type=int, required=True, help="base grid size")
    p.add_argument("--alpha", type=int, required=True, help="expansion order")
    p.add_argument("--no-balance", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("fourier", help="recover cosine Fourier coefficients from an expansion CSV")
    p.add_argument("expansion_csv")
    p.add_argument("--prec", type=int, default=0, metavar="BITS", help="override the precision recorded in the run manifest")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("gamma", help="root curves of b(z) = g(theta) from an expansion CSV")
    p.add_argument("symbol")
    p.add_argument("expansion_csv")
    p.add_argument("--prec", type=int, default=0, metavar="BITS")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("grid", help="perfect sampling grid xi for one spectrum component")
    p.add_argument("source", help="symbol (preset/text/file) or a fourier.csv recovery")
    p.add_argument("spectrum_csv")
    p.add_argument("--component", choices=["re", "im"], required=True)
    p.add_argument("--prec", type=int, default=0, metavar="BITS")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("plot", help="gnuplot script for any tspectra CSV")
    p.add_argument("csv")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("preset", help="built-in example symbols")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("replay", help="re-run a recorded manifest into a new directory")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, argv)
    except ResourceCap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrix, NoConvergence, NoBracket) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
