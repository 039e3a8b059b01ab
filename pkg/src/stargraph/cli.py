"""``stargraph`` command line: one experiment per run, one CSV per experiment.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .birman_schwinger import DEFAULT_NODES, bs_spectrum, count_bound
from .config import Config, parse_config
from .errors import ConfigError, NumericalError
from .fd_oracle import count_below, build_matrix, lowest_eigenvalues, MAX_EIGENVALUES
from .secular import default_window, find_eigenvalues
from .squeeze import DEFAULT_EPSILONS, squeeze_experiment
from .weak_coupling import DEFAULT_LAMBDA_MAX, weak_scan

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

DEFAULT_LAMBDAS = (0.02, 0.01, 0.005, 0.0025)
DEFAULT_BS_KAPPA = 0.1
DEFAULT_FD_H = 1e-3
TRUNCATION_DECAY = 1e-8
MAX_FD_L = 200.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors share the configuration exit code instead of argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stargraph", description="Spectral experiments on star graphs with delta coupling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("eigen", "negative eigenvalues from the secular equation"),
        ("weak-scan", "weak-coupling bound state against its two-term expansion"),
        ("bs", "eigenvalues of the Birman-Schwinger kernel"),
        ("bound", "upper bound on the number of negative eigenvalues"),
        ("squeeze", "squeezed potentials against the delta-coupled limit"),
        ("oracle", "secular eigenvalues against the finite-difference oracle"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("--tol-root", type=float)
        p.add_argument("--kappa-max", type=float)
        p.add_argument("--nodes-per-edge", type=int)
        p.add_argument("--fd-h", type=float)
        p.add_argument("--fd-L", dest="fd_L", type=float)
        p.add_argument("--samples", type=int)
        if name == "weak-scan":
            p.add_argument("--lambdas", type=_float_list)
        if name == "bs":
            p.add_argument("--kappa", type=float)
        if name == "squeeze":
            p.add_argument("--epsilons", type=_float_list)
    return parser


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    value = float(value)
    return "" if math.isnan(value) else repr(value)


def _overrides(args) -> dict:
    skip = {"command", "config", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _pick(flag, configured, default):
    if flag is not None:
        return flag
    if configured is not None:
        return configured
    return default


def _manifest(args, config_bytes: bytes) -> list[str]:
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return [
        "# stargraph run manifest",
        f"# config: {args.config}",
        f"# subcommand: {args.command}",
        f"# overrides: {json.dumps(_overrides(args), sort_keys=True)}",
        f"# out: {args.out}",
        f"# version: {__version__}",
        f"# config_sha256: {hashlib.sha256(config_bytes).hexdigest()}",
        f"# timestamp: {stamp}",
    ]


def _write_csv(path: Path, header: list[str], columns: list[str], rows, notes=()) -> None:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    for note in notes:
        buf.write(f"# note: {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def _window(cfg: Config, args):
    lo, hi = default_window(cfg.graph)
    lo = _pick(None, cfg.experiment.kappa_min, lo)
    hi = _pick(args.kappa_max, cfg.experiment.kappa_max, hi)
    return lo, hi


def _solver_kwargs(cfg: Config, args) -> dict:
    kw = {}
    tol = _pick(args.tol_root, cfg.experiment.tol_root, None)
    if tol is not None:
        kw["xtol"] = tol
    samples = _pick(args.samples, cfg.experiment.samples, None)
    if samples is not None:
        kw["samples"] = samples
    return kw


def _require_infinite(cfg: Config, command: str) -> None:
    if not cfg.graph.all_infinite:
        raise ConfigError(f"{command} needs semi-infinite edges only")


def _cmd_eigen(cfg, args):
    result = find_eigenvalues(cfg.graph, _window(cfg, args), **_solver_kwargs(cfg, args))
    rows = [(e.kappa, e.energy, e.multiplicity) for e in result.eigenvalues]
    return "eigen.csv", ["kappa", "energy", "multiplicity"], rows, result.notes


def _cmd_weak_scan(cfg, args):
    _require_infinite(cfg, "weak-scan")
    if cfg.graph.decoupled or cfg.graph.alpha != 0.0:
        raise ConfigError("weak-scan needs alpha = 0")
    lambdas = _pick(args.lambdas, cfg.experiment.lambdas, list(DEFAULT_LAMBDAS))
    kw = _solver_kwargs(cfg, args)
    rows = weak_scan(
        cfg.graph.potentials,
        lambdas,
        lambda_max=_pick(None, cfg.experiment.lambda_max, DEFAULT_LAMBDA_MAX),
        samples=kw.get("samples"),
        kappa_max=_pick(args.kappa_max, cfg.experiment.kappa_max, None),
        xtol=kw.get("xtol"),
    )
    body = [
        (r.lam, r.kappa_numeric, r.kappa_asym1, r.kappa_asym2, r.residual, r.residual_over_lambda3, ";".join(r.flags))
        for r in rows
    ]
    columns = ["lambda", "kappa_numeric", "kappa_asym1", "kappa_asym2", "residual", "residual_over_lambda3", "flags"]
    return "weak.csv", columns, body, ()


def _nodes(cfg, args) -> int:
    return _pick(args.nodes_per_edge, cfg.experiment.nodes_per_edge, DEFAULT_NODES)


def _cmd_bs(cfg, args):
    _require_infinite(cfg, "bs")
    kappa = _pick(args.kappa, cfg.experiment.kappa, DEFAULT_BS_KAPPA)
    if not kappa > 0:
        raise ConfigError("kappa must be positive")
    vals = bs_spectrum(cfg.graph.potentials, kappa, _nodes(cfg, args))
    return "bs.csv", ["eigenvalue"], [(v,) for v in vals], (f"kappa = {kappa!r}",)


def _cmd_bound(cfg, args):
    _require_infinite(cfg, "bound")
    b = count_bound(cfg.graph.potentials)
    result = find_eigenvalues(cfg.graph.with_alpha(0.0), **_solver_kwargs(cfg, args))
    actual = sum(e.multiplicity for e in result.eigenvalues)
    row = (b.mean_negative, b.diag_term, b.cross_term, b.bound, actual)
    return "bound.csv", ["mean_negative", "diag_term", "cross_term", "bound", "actual_count"], [row], ()


def _cmd_squeeze(cfg, args):
    _require_infinite(cfg, "squeeze")
    if cfg.squeeze is None:
        raise ConfigError("squeeze needs a [squeeze] section")
    if cfg.graph.decoupled or cfg.graph.alpha != 0.0:
        raise ConfigError("squeeze needs alpha = 0 in [graph]")
    eps = _pick(args.epsilons, cfg.squeeze.epsilons, list(DEFAULT_EPSILONS))
    if not eps or any(not e > 0 for e in eps):
        raise ConfigError("epsilons must be positive")
    report = squeeze_experiment(
        cfg.graph.potentials,
        cfg.squeeze.w,
        eps,
        kappa0=cfg.squeeze.kappa0,
        samples=_solver_kwargs(cfg, args).get("samples"),
    )
    rows = [(r.epsilon, r.eigen_error, r.max_kernel_error) for r in report.rows]
    notes = [report.verification, f"alpha = {report.alpha!r}", f"kappa0 = {report.kappa0!r}"]
    notes += [f"flag {f}" for f in report.flags]
    return "squeeze.csv", ["epsilon", "eigen_error", "max_kernel_probe_error"], rows, notes


def _truncation(graph, kappas) -> float:
    support = max(e.potential.support_end for e in graph.edges if e.is_infinite)
    k = min(kappas) if kappas else 1.0
    return min(MAX_FD_L, support + math.ceil(-math.log(TRUNCATION_DECAY) / k))


def _cmd_oracle(cfg, args):
    graph = cfg.graph
    result = find_eigenvalues(graph, _window(cfg, args), **_solver_kwargs(cfg, args))
    secular = sorted(e.energy for e in result.eigenvalues for _ in range(e.multiplicity))
    h = _pick(args.fd_h, cfg.experiment.fd_h, DEFAULT_FD_H)
    L = _pick(args.fd_L, cfg.experiment.fd_L, None)
    if L is None:
        L = _truncation(graph, result.kappas) if any(e.is_infinite for e in graph.edges) else 1.0
    grid = build_matrix(graph, h, L)
    k = min(count_below(grid, 0.0), MAX_EIGENVALUES)
    fd = [e for e in lowest_eigenvalues(grid, k) if e < 0.0] if k else []
    rows = []
    for i in range(max(len(fd), len(secular))):
        ef = fd[i] if i < len(fd) else math.nan
        es = secular[i] if i < len(secular) else math.nan
        rows.append((i, ef, es, abs(ef - es)))
    notes = [f"h = {h!r}", f"L = {L!r}"]
    return "oracle.csv", ["index", "energy_fd", "energy_secular", "abs_diff"], rows, notes


COMMANDS = {
    "eigen": _cmd_eigen,
    "weak-scan": _cmd_weak_scan,
    "bs": _cmd_bs,
    "bound": _cmd_bound,
    "squeeze": _cmd_squeeze,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"stargraph: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        raw = args.config.read_bytes()
        cfg = parse_config(raw.decode("utf-8"))
        name, columns, rows, notes = COMMANDS[args.command](cfg, args)
        args.out.mkdir(parents=True, exist_ok=True)
        _write_csv(args.out / name, _manifest(args, raw), columns, rows, notes)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"stargraph: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"stargraph: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
