"""Line-oriented ``key = value`` configuration files with ``[section]`` headers.

Example::

    [graph]
    alpha = -1.5            # real, or "infinity"
    edges = 3
    defaults = free_infinite
    [edge.1]
    length = "inf"
    potential = "well(-1.0, 0.0, 1.0) + poly(1, 2; 0.5, -0.25)"
    [experiment]
    lambdas = "0.02, 0.01, 0.005"
    [squeeze]
    w = "well(-1.0, 0.0, 1.0)"
    epsilons = "0.2, 0.1, 0.05"

Potential expressions are ``zero``, ``well(depth, start, end)`` or
``poly(a, b; c0, c1, ...)``, joined by ``+``.  The joined pieces must not
overlap.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .graph import INFINITY, Edge, StarGraph
from .potential import EdgePotential

_SECTION = re.compile(r"^\[\s*([A-Za-z_][A-Za-z0-9_]*)(?:\.(\d+))?\s*\]$")
_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(?:\.\d+)?$")

GRAPH_KEYS = {"alpha", "edges", "defaults"}
EDGE_KEYS = {"length", "omega", "potential"}
EXPERIMENT_FLOATS = {"kappa", "kappa_min", "kappa_max", "tol_root", "fd_h", "fd_L", "lambda_max"}
EXPERIMENT_INTS = {"nodes_per_edge", "samples", "count"}
EXPERIMENT_LISTS = {"lambdas", "kappas"}
SQUEEZE_FLOATS = {"kappa0"}
SQUEEZE_LISTS = {"epsilons"}


@dataclass
class Experiment:
    """Optional run parameters; ``None`` means "use the library default"."""

    lambdas: list[float] | None = None
    kappas: list[float] | None = None
    kappa: float | None = None
    kappa_min: float | None = None
    kappa_max: float | None = None
    tol_root: float | None = None
    fd_h: float | None = None
    fd_L: float | None = None
    lambda_max: float | None = None
    nodes_per_edge: int | None = None
    samples: int | None = None
    count: int | None = None


@dataclass
class SqueezeSpec:
    w: tuple[EdgePotential, ...]
    epsilons: list[float] | None = None
    kappa0: float | None = None


@dataclass
class Config:
    graph: StarGraph
    experiment: Experiment = field(default_factory=Experiment)
    squeeze: SqueezeSpec | None = None


# value parsing ---------------------------------------------------------------


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def _unquote(raw: str, lineno: int, col: int) -> str:
    raw = raw.strip()
    if raw.startswith('"'):
        if len(raw) < 2 or not raw.endswith('"') or '"' in raw[1:-1]:
            raise ConfigError("unterminated or malformed string", lineno, col)
        return raw[1:-1]
    if '"' in raw:
        raise ConfigError("stray quote in value", lineno, col)
    return raw


def _number(text: str, lineno: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", lineno, col) from None
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {text!r}", lineno, col)
    return value


def _integer(text: str, lineno: int, col: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}", lineno, col) from None


def _number_list(text: str, lineno: int, col: int) -> list[float]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise ConfigError("empty entry in number list", lineno, col)
    return [_number(p, lineno, col) for p in parts]


def _split_top_level(text: str, sep: str) -> list[str]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return out


_TERM = re.compile(r"^\s*([a-z]+)\s*(?:\((.*)\))?\s*$", re.S)


def parse_potential(text: str, lineno: int | None = None, col: int | None = None) -> EdgePotential:
    """Parse a potential expression such as ``"well(-1, 0, 1) + poly(1, 2; 0, 1)"``."""
    segments = []
    for term in _split_top_level(text, "+"):
        m = _TERM.match(term)
        if not m:
            raise ConfigError(f"cannot parse potential term {term.strip()!r}", lineno, col)
        name, args = m.group(1), m.group(2)
        if name == "zero" and args is None:
            continue
        if args is None:
            raise ConfigError(f"potential term {name!r} needs arguments", lineno, col)
        if name == "well":
            vals = _number_list(args, lineno, col)
            if len(vals) != 3:
                raise ConfigError("well(depth, start, end) takes 3 numbers", lineno, col)
            depth, a, b = vals
            segments.append((a, b, (depth,)))
        elif name == "poly":
            head, sep, tail = args.partition(";")
            if not sep:
                raise ConfigError("poly(a, b; c0, c1, ...) needs ';'", lineno, col)
            ab = _number_list(head, lineno, col)
            if len(ab) != 2:
                raise ConfigError("poly needs exactly two interval endpoints", lineno, col)
            segments.append((ab[0], ab[1], tuple(_number_list(tail, lineno, col))))
        else:
            raise ConfigError(f"unknown potential term {name!r}", lineno, col)
    segments.sort(key=lambda s: s[0])
    try:
        return EdgePotential(tuple(segments))
    except ValueError as exc:
        raise ConfigError(str(exc), lineno, col) from None


def format_potential(V: EdgePotential) -> str:
    if not V.segments:
        return "zero"
    terms = []
    for a, b, c in V.segments:
        terms.append(f"poly({a!r}, {b!r}; {', '.join(repr(v) for v in c)})")
    return " + ".join(terms)


# file parsing ----------------------------------------------------------------


def _read_sections(text: str):
    sections: dict[tuple[str, int | None], dict[str, tuple[str, int, int]]] = {}
    current = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        if line.startswith("["):
            m = _SECTION.match(line)
            if not m:
                raise ConfigError(f"malformed section header {line!r}", lineno, 1)
            name, idx = m.group(1), m.group(2)
            current = (name, int(idx) if idx is not None else None)
            if current in sections:
                raise ConfigError(f"duplicate section [{line[1:-1].strip()}]", lineno, 1)
            sections[current] = {}
            continue
        key, eq, value = raw_line.partition("=")
        if not eq:
            raise ConfigError("expected 'key = value'", lineno, 1)
        if current is None:
            raise ConfigError("key outside of any section", lineno, 1)
        key = key.strip()
        if not _KEY.match(key):
            raise ConfigError(f"invalid key {key!r}", lineno, 1)
        col = len(raw_line) - len(raw_line[raw_line.index("=") + 1 :].lstrip()) + 1
        value = _strip_comment(value)
        if not value.strip():
            raise ConfigError(f"missing value for {key!r}", lineno, col)
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r}", lineno, 1)
        sections[current][key] = (_unquote(value, lineno, col), lineno, col)
    return sections


def parse_config(text: str) -> Config:
    sections = _read_sections(text)
    if ("graph", None) not in sections:
        raise ConfigError("missing [graph] section")
    graph_sec = sections.pop(("graph", None))
    for key, (_, ln, _c) in graph_sec.items():
        if key not in GRAPH_KEYS:
            raise ConfigError(f"unknown key {key!r} in [graph]", ln, 1)
    if "edges" not in graph_sec:
        raise ConfigError("[graph] needs 'edges'")
    n = _integer(*graph_sec["edges"])
    if n < 2:
        raise ConfigError(f"a star graph needs at least 2 edges, got {n}", *graph_sec["edges"][1:])

    alpha = 0.0
    if "alpha" in graph_sec:
        raw, ln, col = graph_sec["alpha"]
        alpha = INFINITY if raw.lower() in ("infinity", "inf") else _number(raw, ln, col)

    free_defaults = False
    if "defaults" in graph_sec:
        raw, ln, col = graph_sec["defaults"]
        if raw != "free_infinite":
            raise ConfigError(f"unknown defaults policy {raw!r}", ln, col)
        free_defaults = True

    edges: list[Edge | None] = [None] * n
    experiment = Experiment()
    squeeze_sec = None
    for (name, idx), entries in sections.items():
        if name == "edge":
            if idx is None or not 1 <= idx <= n:
                raise ConfigError(f"edge section index must be in 1..{n}, got {idx}")
            edges[idx - 1] = _parse_edge(entries, idx)
        elif name == "experiment" and idx is None:
            _parse_experiment(entries, experiment)
        elif name == "squeeze" and idx is None:
            squeeze_sec = entries
        else:
            suffix = f".{idx}" if idx is not None else ""
            raise ConfigError(f"unknown section [{name}{suffix}]")

    for j, e in enumerate(edges):
        if e is None:
            if not free_defaults:
                raise ConfigError(
                    f"missing [edge.{j + 1}] (set 'defaults = free_infinite' to allow omission)"
                )
            edges[j] = Edge()

    try:
        graph = StarGraph(tuple(edges), alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    squeeze = _parse_squeeze(squeeze_sec, n) if squeeze_sec is not None else None
    return Config(graph, experiment, squeeze)


def _parse_edge(entries, idx: int) -> Edge:
    for key, (_, ln, _c) in entries.items():
        if key not in EDGE_KEYS:
            raise ConfigError(f"unknown key {key!r} in [edge.{idx}]", ln, 1)
    length = math.inf
    if "length" in entries:
        raw, ln, col = entries["length"]
        length = math.inf if raw.lower() in ("inf", "infinity") else _number(raw, ln, col)
        if not length > 0:
            raise ConfigError("edge length must be positive", ln, col)
    omega = None
    if "omega" in entries:
        omega = _number(*entries["omega"])
    if math.isinf(length) and omega is not None:
        raise ConfigError(f"[edge.{idx}] is infinite; omega is not allowed", entries["omega"][1], 1)
    if not math.isinf(length) and omega is None:
        raise ConfigError(f"[edge.{idx}] is finite and needs 'omega'")
    potential = EdgePotential()
    if "potential" in entries:
        potential = parse_potential(*entries["potential"])
    try:
        return Edge(potential, length, omega)
    except ValueError as exc:
        raise ConfigError(f"[edge.{idx}]: {exc}") from None


def _parse_experiment(entries, experiment: Experiment) -> None:
    for key, (raw, ln, col) in entries.items():
        if key in EXPERIMENT_FLOATS:
            setattr(experiment, key, _number(raw, ln, col))
        elif key in EXPERIMENT_INTS:
            setattr(experiment, key, _integer(raw, ln, col))
        elif key in EXPERIMENT_LISTS:
            setattr(experiment, key, _number_list(raw, ln, col))
        else:
            raise ConfigError(f"unknown key {key!r} in [experiment]", ln, 1)


def _parse_squeeze(entries, n: int) -> SqueezeSpec:
    shared = None
    per_edge: dict[int, EdgePotential] = {}
    epsilons = kappa0 = None
    for key, (raw, ln, col) in entries.items():
        if key == "w":
            shared = parse_potential(raw, ln, col)
        elif key.startswith("w."):
            j = int(key[2:])
            if not 1 <= j <= n:
                raise ConfigError(f"squeeze edge index must be in 1..{n}", ln, 1)
            per_edge[j - 1] = parse_potential(raw, ln, col)
        elif key in SQUEEZE_LISTS:
            epsilons = _number_list(raw, ln, col)
        elif key in SQUEEZE_FLOATS:
            kappa0 = _number(raw, ln, col)
        else:
            raise ConfigError(f"unknown key {key!r} in [squeeze]", ln, 1)
    base = shared if shared is not None else EdgePotential()
    w = tuple(per_edge.get(j, base) for j in range(n))
    return SqueezeSpec(w, epsilons, kappa0)


def serialize_config(config: Config | StarGraph) -> str:
    """Inverse of :func:`parse_config` (floats written with ``repr``)."""
    if isinstance(config, StarGraph):
        config = Config(config)
    g = config.graph
    alpha = '"infinity"' if g.decoupled else repr(g.alpha)
    lines = ["[graph]", f"alpha = {alpha}", f"edges = {g.n}"]
    for j, e in enumerate(g.edges, start=1):
        lines.append(f"[edge.{j}]")
        lines.append('length = "inf"' if e.is_infinite else f"length = {e.length!r}")
        if e.omega is not None:
            lines.append(f"omega = {e.omega!r}")
        lines.append(f'potential = "{format_potential(e.potential)}"')
    exp_lines = []
    for key, value in vars(config.experiment).items():
        if value is None:
            continue
        if isinstance(value, list):
            exp_lines.append(f'{key} = "{", ".join(repr(v) for v in value)}"')
        else:
            exp_lines.append(f"{key} = {value!r}")
    if exp_lines:
        lines += ["[experiment]"] + exp_lines
    if config.squeeze is not None:
        sq = config.squeeze
        lines.append("[squeeze]")
        for j, w in enumerate(sq.w, start=1):
            lines.append(f'w.{j} = "{format_potential(w)}"')
        if sq.epsilons is not None:
            lines.append(f'epsilons = "{", ".join(repr(v) for v in sq.epsilons)}"')
        if sq.kappa0 is not None:
            lines.append(f"kappa0 = {sq.kappa0!r}")
    return "\n".join(lines) + "\n"
