"""Command-line entry point: experiments, schedule export, verification.

Three subcommands:

  run       one GA experiment (one function, one selection scheme) averaged
            over repeated runs; writes ``<function>_<scheme>.csv``
  schedule  inverse-temperature sequence of a Cauchy schedule as CSV
  verify    randomized verification suites; exit 1 on any violation

Flags override an optional flat ``key = value`` config file (``#`` starts
a comment); every effective value is echoed into the CSV metadata so a
result file is self-describing. Exit codes: 0 success, 1 verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import engine
from .annealing import calibrate_g0, cauchy_schedule, constant_schedule, gamma_at
from .benchmarks import FUNCTION_NAMES, make_objective
from .engine import GENERATOR_NAME, GaConfig, multi_run
from .verify import run_verify

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2

SERIES_COLUMNS = (
    "generation",
    "gamma_n",
    "best_raw_mean",
    "best_raw_std",
    "mean_raw_mean",
    "mean_raw_std",
    "strength_mean",
)

# CLI spellings of the selection schemes
_SCHEME_FLAGS = {
    "proportionate": engine.PROPORTIONATE,
    "boltzmann-const": engine.BOLTZMANN_CONST,
    "cauchy-boltzmann": engine.CAUCHY_BOLTZMANN,
}


@dataclass
class CliConfig:
    """Effective experiment configuration after flag/file merging."""

    function: str
    selection: str
    alpha: float = 2.0
    g0: float | None = None
    gamma: float = 300.0
    gamma_target: float = 300.0
    generations: int = 100
    pop_size: int = 150
    runs: int = 17
    seed: int = 42
    bits_per_var: int = 5
    dims: int = 15
    crossover_prob: float = 0.8
    mutation_prob: float = 0.01
    elitism: bool = False
    output: str = "results"


def fmt(value) -> str:
    """Serialize one CSV cell: floats at 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` comments, blank lines ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


_FIELD_PARSERS = {
    "function": str,
    "selection": str,
    "alpha": float,
    "g0": float,
    "gamma": float,
    "gamma_target": float,
    "generations": int,
    "pop_size": int,
    "runs": int,
    "seed": int,
    "bits_per_var": int,
    "dims": int,
    "crossover_prob": float,
    "mutation_prob": float,
    "elitism": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "output": str,
}


def merge_config(cli_values: dict, file_values: dict[str, str]) -> CliConfig:
    """Apply precedence: explicit flags beat file values beat defaults.

    Raises:
        ValueError: On unknown config-file keys or missing required values.
    """
    unknown = set(file_values) - set(_FIELD_PARSERS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    merged: dict = {}
    for name, parser in _FIELD_PARSERS.items():
        if cli_values.get(name) is not None:
            merged[name] = cli_values[name]
        elif name in file_values:
            merged[name] = parser(file_values[name])
    for required in ("function", "selection"):
        if required not in merged:
            raise ValueError(f"missing required setting: {required}")
    if merged["function"] not in FUNCTION_NAMES:
        raise ValueError(f"unknown function: {merged['function']!r}")
    if merged["selection"] in _SCHEME_FLAGS:
        merged["selection"] = _SCHEME_FLAGS[merged["selection"]]
    if merged["selection"] not in engine.SELECTION_SCHEMES:
        raise ValueError(f"unknown selection scheme: {merged['selection']!r}")
    if "g0" in file_values and "gamma_target" in file_values:
        raise ValueError("g0 and gamma_target are mutually exclusive")
    # an explicit flag on one side of the pair retires the file's other side
    if cli_values.get("gamma_target") is not None and cli_values.get("g0") is None:
        merged.pop("g0", None)
    defaults = {f.name: f.default for f in fields(CliConfig)}
    known = {name: merged.get(name, defaults[name]) for name in _FIELD_PARSERS}
    return CliConfig(**known)


def build_ga_config(cfg: CliConfig) -> tuple[GaConfig, float | None]:
    """Translate CLI settings into an engine config plus the effective g0."""
    objective = make_objective(cfg.function, cfg.dims)
    g0_effective: float | None = None
    if cfg.selection == engine.CAUCHY_BOLTZMANN:
        g0_effective = (
            cfg.g0
            if cfg.g0 is not None
            else calibrate_g0(cfg.alpha, cfg.generations, cfg.gamma_target)
        )
        schedule = cauchy_schedule(g0_effective, cfg.alpha)
    elif cfg.selection == engine.BOLTZMANN_CONST:
        schedule = constant_schedule(cfg.gamma)
    else:
        schedule = constant_schedule(0.0)
    ga = GaConfig(
        objective=objective,
        selection=cfg.selection,
        schedule=schedule,
        pop_size=cfg.pop_size,
        generations=cfg.generations,
        crossover_prob=cfg.crossover_prob,
        mutation_prob_per_bit=cfg.mutation_prob,
        runs=cfg.runs,
        master_seed=cfg.seed,
        elitism=cfg.elitism,
        bits_per_var=cfg.bits_per_var,
    )
    return ga, g0_effective


def _metadata(cfg: CliConfig, g0_effective: float | None) -> dict[str, str]:
    meta = {
        "function": cfg.function,
        "selection": cfg.selection,
        "alpha": fmt(cfg.alpha),
        "g0": "auto" if cfg.g0 is None else fmt(cfg.g0),
        "g0_effective": "n/a" if g0_effective is None else fmt(g0_effective),
        "gamma": fmt(cfg.gamma),
        "gamma_target": fmt(cfg.gamma_target),
        "generations": fmt(cfg.generations),
        "pop_size": fmt(cfg.pop_size),
        "runs": fmt(cfg.runs),
        "master_seed": fmt(cfg.seed),
        "bits_per_var": fmt(cfg.bits_per_var),
        "dims": fmt(cfg.dims),
        "crossover_prob": fmt(cfg.crossover_prob),
        "mutation_prob_per_bit": fmt(cfg.mutation_prob),
        "elitism": fmt(cfg.elitism),
        "generator": f"{GENERATOR_NAME} (numpy {np.__version__})",
    }
    return meta


def write_series_csv(path: Path, metadata: dict[str, str], agg) -> None:
    """Write one experiment CSV: '#' metadata lines, header, data rows."""
    with open(path, "w", newline="") as fh:
        for key, val in metadata.items():
            fh.write(f"# {key} = {val}\n")
        writer = csv.writer(fh)
        writer.writerow(SERIES_COLUMNS)
        for i in range(len(agg.generations)):
            writer.writerow(
                [
                    int(agg.generations[i]),
                    fmt(float(agg.gamma[i])),
                    fmt(float(agg.best_mean[i])),
                    fmt(float(agg.best_std[i])),
                    fmt(float(agg.mean_mean[i])),
                    fmt(float(agg.mean_std[i])),
                    fmt(float(agg.strength_mean[i])),
                ]
            )


def read_series_csv(path: Path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Read back an experiment CSV without reparsing numbers."""
    metadata: dict[str, str] = {}
    rows: list[list[str]] = []
    header: list[str] = []
    with open(path, newline="") as fh:
        data_lines = []
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition(" = ")
                metadata[key] = val
            else:
                data_lines.append(line)
        reader = csv.reader(data_lines)
        header = next(reader)
        rows = [row for row in reader]
    return metadata, header, rows


def write_combined_csv(output_dir: Path, function: str) -> Path | None:
    """Join per-scheme CSVs of one function on generation, if two or more exist.

    Emitted columns carry a scheme prefix; schemes appear in the fixed
    order proportionate, boltzmann_const, cauchy_boltzmann.
    """
    present = []
    for scheme in engine.SELECTION_SCHEMES:
        path = output_dir / f"{function}_{scheme}.csv"
        if path.exists():
            present.append((scheme, path))
    if len(present) < 2:
        return None

    parsed = {scheme: read_series_csv(path) for scheme, path in present}
    lengths = {len(rows) for _, (_, _, rows) in parsed.items()}
    if len(lengths) != 1:
        return None  # differing horizons cannot be joined

    out = output_dir / f"{function}_combined.csv"
    with open(out, "w", newline="") as fh:
        fh.write(f"# function = {function}\n")
        for scheme, path in present:
            fh.write(f"# source_{scheme} = {path.name}\n")
        writer = csv.writer(fh)
        header = ["generation"]
        for scheme, _ in present:
            header.extend(f"{scheme}_{col}" for col in SERIES_COLUMNS[1:])
        writer.writerow(header)
        n_rows = lengths.pop()
        for i in range(n_rows):
            row = [parsed[present[0][0]][2][i][0]]
            for scheme, _ in present:
                row.extend(parsed[scheme][2][i][1:])
            writer.writerow(row)
    return out


def run_experiment(cfg: CliConfig) -> list[Path]:
    """Run one (function, scheme) experiment and write its CSV.

    Also refreshes ``<function>_combined.csv`` whenever results for other
    schemes of the same function already sit in the output directory.

    Returns the list of paths written.
    """
    ga, g0_effective = build_ga_config(cfg)
    agg = multi_run(ga)
    out_dir = Path(cfg.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{cfg.function}_{cfg.selection}.csv"
    write_series_csv(path, _metadata(cfg, g0_effective), agg)
    written = [path]
    combined = write_combined_csv(out_dir, cfg.function)
    if combined is not None:
        written.append(combined)
    return written


def emit_schedule(
    alpha: float,
    horizon: int,
    output_dir: str | Path,
    g0: float | None = None,
    gamma_target: float | None = None,
) -> Path:
    """Write the (n, gamma_n) rows of a Cauchy schedule to CSV.

    Exactly one of g0 and gamma_target must be given; a target calibrates
    g0 so the schedule ends at the target after ``horizon`` generations.

    Raises:
        ValueError: If alpha <= 1, horizon < 1, or the g0/gamma_target
            choice is not exactly one.
    """
    if (g0 is None) == (gamma_target is None):
        raise ValueError("exactly one of g0 and gamma_target must be given")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    g0_effective = g0 if g0 is not None else calibrate_g0(alpha, horizon, gamma_target)
    schedule = cauchy_schedule(g0_effective, alpha)
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"schedule_alpha{alpha:g}.csv"
    with open(path, "w", newline="") as fh:
        fh.write(f"# alpha = {fmt(alpha)}\n")
        fh.write(f"# g0 = {fmt(g0_effective)}\n")
        if gamma_target is not None:
            fh.write(f"# gamma_target = {fmt(gamma_target)}\n")
        fh.write(f"# horizon = {horizon}\n")
        writer = csv.writer(fh)
        writer.writerow(["n", "gamma_n"])
        for n in range(1, horizon + 1):
            writer.writerow([n, fmt(gamma_at(schedule, n))])
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cauchyga",
        description="GA experiments with Boltzmann selection under a Cauchy "
        "annealing schedule",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment, write CSV series")
    p_run.add_argument("--config", help="flat key = value config file")
    p_run.add_argument("--function", choices=FUNCTION_NAMES)
    p_run.add_argument("--selection", choices=sorted(_SCHEME_FLAGS))
    p_run.add_argument("--alpha", type=float)
    p_run.add_argument("--g0", type=float)
    p_run.add_argument("--gamma", type=float)
    p_run.add_argument("--gamma-target", type=float, dest="gamma_target")
    p_run.add_argument("--generations", type=int)
    p_run.add_argument("--pop-size", type=int, dest="pop_size")
    p_run.add_argument("--runs", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--bits-per-var", type=int, dest="bits_per_var")
    p_run.add_argument("--dims", type=int)
    p_run.add_argument("--crossover-prob", type=float, dest="crossover_prob")
    p_run.add_argument("--mutation-prob", type=float, dest="mutation_prob")
    p_run.add_argument(
        "--elitism", action=argparse.BooleanOptionalAction, default=None
    )
    p_run.add_argument("--output")

    p_ver = sub.add_parser("verify", help="run the verification suites")
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument("--cases", type=int, default=1000)
    p_ver.add_argument("--output", default="results")

    p_sch = sub.add_parser("schedule", help="emit (n, gamma_n) schedule CSV")
    p_sch.add_argument("--alpha", type=float, required=True)
    p_sch.add_argument("--g0", type=float)
    p_sch.add_argument("--gamma-target", type=float, dest="gamma_target")
    p_sch.add_argument("--horizon", type=int, default=100)
    p_sch.add_argument("--output", default="results")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            if args.g0 is not None and args.gamma_target is not None:
                parser.error("--g0 and --gamma-target are mutually exclusive")
            file_values = load_config_file(args.config) if args.config else {}
            cli_values = {
                name: getattr(args, name, None) for name in _FIELD_PARSERS
            }
            cfg = merge_config(cli_values, file_values)
            written = run_experiment(cfg)
            for path in written:
                print(path)
            return EXIT_OK

        if args.command == "verify":
            result = run_verify(args.seed, args.cases, args.output)
            for line in result.suite_lines:
                print(line)
            if not result.ok:
                first = result.first_failure
                print(
                    f"first failure: {first.case_id} lhs={first.lhs!r} "
                    f"rhs={first.rhs!r} {first.detail}",
                    file=sys.stderr,
                )
                return EXIT_VERIFY_FAIL
            return EXIT_OK

        if args.command == "schedule":
            path = emit_schedule(
                args.alpha,
                args.horizon,
                args.output,
                g0=args.g0,
                gamma_target=args.gamma_target,
            )
            print(path)
            return EXIT_OK
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
