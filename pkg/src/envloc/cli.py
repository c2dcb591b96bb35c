"""Command-line frontend.

Subcommands: fidelity, bounds, advantage, region, mle, simulate, figure.
Each run resolves its configuration from built-in defaults, an optional
JSON config file (--config), and command-line flags, in that order of
precedence; the fully resolved configuration is echoed into every output
so a run can be reproduced from its own header.

Exit codes: 0 success, 2 usage or validation failure, 3 numerical-domain
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import advantage as adv
from . import bounds as bnd
from . import mle as mle_mod
from . import scenarios as scn
from . import simulate as sim
from .errors import DomainError, EnvlocError, NumericalInstabilityError
from .gaussian import ChannelKind, PhaseInsensitiveChannel

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "ENVLOC_OUTPUT_DIR"

_TWO_PI = 2.0 * math.pi

#: Presentation settings shared by every command.
_COMMON_DEFAULTS = {"format": "json", "out": None}

_DEFAULTS: dict[str, dict] = {
    "fidelity": {"kind": "additive", "tau": None, "nu_t": None, "nu_b": None,
                 "eps_t": None, "eps_b": None, "a": None},
    "bounds": {"kind": "additive", "tau": None, "nu_t": None, "nu_b": None,
               "eps_t": None, "eps_b": None, "m": 2, "M": 1},
    "advantage": {"kind": "additive", "tau": None, "nu_t": None, "nu_b": None,
                  "eps_t": None, "eps_b": None, "m": 2, "mle_limit": None},
    "region": {"tau": 0.9, "dif_min": 0.0, "dif_max": 4.0, "av_min": 0.5,
               "av_max": 5.0, "grid": 200},
    "mle": {"nbar_t": None, "nbar_b": None, "kind": None, "tau": None,
            "nu_t": None, "nu_b": None, "eps_t": None, "eps_b": None,
            "benchmark": "quantum", "m": 2, "M": 1,
            "mass_tol": mle_mod.MASS_TOL, "term_tol": mle_mod.TERM_TOL},
    "simulate": {"nbar_t": None, "nbar_b": None, "m": 2, "M": 1,
                 "trials": 100000, "seed": 12345,
                 "mass_tol": mle_mod.MASS_TOL, "term_tol": mle_mod.TERM_TOL},
    "figure": {"scenario": None, "M": "1..50",
               "m": None, "kind": None, "tau": None, "nu_t": None, "nu_b": None,
               "eps_t": None, "eps_b": None,
               "area": 4e-9, "solid_angle": _TWO_PI, "pulse": 1e-7,
               "wavelength": 1e-3, "bandwidth": None,
               "t_target": 247.56, "t_background": 272.76,
               "excess_t": 0.1, "excess_b": 0.01,
               "mass_tol": mle_mod.MASS_TOL, "term_tol": mle_mod.TERM_TOL,
               "quad_rtol": scn.QUAD_RTOL},
}


class UsageError(DomainError):
    """Bad flags or config; maps to exit code 2."""


def parse_probe_range(text: str) -> list[int]:
    """Parse 'N', 'A..B', or 'A..B..STEP' into a list of probe counts."""
    parts = str(text).split("..")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            return list(range(lo, hi + 1))
        if len(parts) == 3:
            lo, hi, step = int(parts[0]), int(parts[1]), int(parts[2])
            if step <= 0:
                raise ValueError
            return list(range(lo, hi + 1, step))
    except ValueError:
        pass
    raise UsageError(f"bad probe range {text!r}; expected N, A..B, or A..B..STEP")


def _add_pair_flags(p: argparse.ArgumentParser, with_kind: bool = True) -> None:
    if with_kind:
        p.add_argument("--kind", choices=["loss", "amplifier", "additive"])
    p.add_argument("--tau", type=float, help="shared transmissivity")
    p.add_argument("--nu-t", dest="nu_t", type=float, help="target induced noise")
    p.add_argument("--nu-b", dest="nu_b", type=float, help="background induced noise")
    p.add_argument("--eps-t", dest="eps_t", type=float,
                   help="target environment variance (loss/amplifier)")
    p.add_argument("--eps-b", dest="eps_b", type=float,
                   help="background environment variance (loss/amplifier)")


def _add_output_flags(p: argparse.ArgumentParser, plot: bool = False) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--format", choices=["json", "csv"], help="output format (default json)")
    p.add_argument("--out", help=f"output path (relative paths resolve under ${OUTPUT_DIR_ENV})")
    if plot:
        p.add_argument("--plot", action="store_true", default=None,
                       help="render a PNG next to the output file (default when --out is set)")
        p.add_argument("--no-plot", action="store_true", default=None,
                       help="suppress PNG rendering")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="envloc",
        description="Error bounds and receiver benchmarks for locating an "
                    "anomalous-noise Gaussian channel.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="output-state fidelities of a channel pair")
    _add_pair_flags(p)
    p.add_argument("--a", type=float, help="probe variance for the finite-squeezing fidelity")
    _add_output_flags(p)

    p = sub.add_parser("bounds", help="error bounds for one scenario")
    _add_pair_flags(p)
    p.add_argument("--m", type=int, help="number of channel positions")
    p.add_argument("--M", type=int, help="probes per channel")
    _add_output_flags(p)

    p = sub.add_parser("advantage", help="advantage condition and probe thresholds")
    _add_pair_flags(p)
    p.add_argument("--m", type=int, help="number of channel positions")
    p.add_argument("--mle-limit", dest="mle_limit", type=int,
                   help="also search the counting-receiver crossing up to this probe count")
    _add_output_flags(p)

    p = sub.add_parser("region", help="advantage scan over the noise plane")
    p.add_argument("--tau", type=float)
    p.add_argument("--dif-min", dest="dif_min", type=float)
    p.add_argument("--dif-max", dest="dif_max", type=float)
    p.add_argument("--av-min", dest="av_min", type=float)
    p.add_argument("--av-max", dest="av_max", type=float)
    p.add_argument("--grid", type=int, help="points per axis")
    _add_output_flags(p, plot=True)

    p = sub.add_parser("mle", help="analytic counting-receiver error")
    p.add_argument("--nbar-t", dest="nbar_t", type=float, help="target occupation per probe")
    p.add_argument("--nbar-b", dest="nbar_b", type=float, help="background occupation per probe")
    _add_pair_flags(p)
    p.add_argument("--benchmark", choices=["quantum", "classical"],
                   help="derive occupations from the channel pair")
    p.add_argument("--m", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--mass-tol", dest="mass_tol", type=float)
    p.add_argument("--term-tol", dest="term_tol", type=float)
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo check of the counting receiver")
    p.add_argument("--nbar-t", dest="nbar_t", type=float)
    p.add_argument("--nbar-b", dest="nbar_b", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mass-tol", dest="mass_tol", type=float)
    p.add_argument("--term-tol", dest="term_tol", type=float)
    _add_output_flags(p)

    p = sub.add_parser("figure", help="bounds and benchmarks over a probe sweep")
    p.add_argument("--scenario", choices=["imaging", "eavesdropper", "additive", "custom"])
    p.add_argument("--M", help="probe range: N, A..B, or A..B..STEP")
    p.add_argument("--m", type=int, help="number of channel positions")
    _add_pair_flags(p, with_kind=True)
    p.add_argument("--area", type=float, help="pixel area [m^2]")
    p.add_argument("--solid-angle", dest="solid_angle", type=float, help="[sr]")
    p.add_argument("--pulse", type=float, help="pulse duration [s]")
    p.add_argument("--wavelength", type=float, help="carrier wavelength [m]")
    p.add_argument("--bandwidth", type=float,
                   help="detection bandwidth [Hz]; default transform limit 1/(4 pulse)")
    p.add_argument("--t-target", dest="t_target", type=float, help="[K]")
    p.add_argument("--t-background", dest="t_background", type=float, help="[K]")
    p.add_argument("--excess-t", dest="excess_t", type=float)
    p.add_argument("--excess-b", dest="excess_b", type=float)
    p.add_argument("--mass-tol", dest="mass_tol", type=float)
    p.add_argument("--term-tol", dest="term_tol", type=float)
    p.add_argument("--quad-rtol", dest="quad_rtol", type=float)
    _add_output_flags(p, plot=True)

    return ap


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    cfg = {**_COMMON_DEFAULTS, **_DEFAULTS[command]}
    if command in ("region", "figure"):
        cfg["plot"] = None
    allowed = set(cfg)
    raw = vars(args)

    if raw.get("config"):
        path = Path(raw["config"])
        try:
            loaded = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        # a config may carry its own provenance fields from an echoed header
        loaded.pop("schema_version", None)
        if loaded.pop("command", command) != command:
            raise UsageError("config file was written for a different command")
        unknown = set(loaded) - allowed
        if unknown:
            raise UsageError(f"unknown config keys for {command}: {sorted(unknown)}")
        cfg.update(loaded)

    for key, value in raw.items():
        if key in ("command", "config", "no_plot"):
            continue
        if value is not None and key in allowed:
            cfg[key] = value

    if cfg.get("format") not in ("json", "csv"):
        raise UsageError(f"format must be json or csv, got {cfg.get('format')!r}")

    # integer-typed values may arrive as JSON floats
    for key in ("m", "M", "grid", "trials", "seed", "mle_limit"):
        if key in cfg and cfg[key] is not None and not isinstance(cfg[key], (bool, str)):
            as_float = float(cfg[key])
            if as_float != int(as_float):
                raise UsageError(f"{key} must be an integer, got {cfg[key]}")
            cfg[key] = int(as_float)
    return cfg


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError(f"missing required parameter(s): {', '.join(missing)}")


def _channel_pair(cfg: dict) -> tuple[PhaseInsensitiveChannel, PhaseInsensitiveChannel]:
    """(background, target) from kind/tau plus nu or eps values."""
    kind = cfg.get("kind")
    _require(cfg, "kind")
    if kind == "additive":
        tau = cfg.get("tau")
        if tau is not None and tau != 1.0:
            raise UsageError(f"additive channels have tau = 1, got {tau}")
        _require(cfg, "nu_t", "nu_b")
        return (PhaseInsensitiveChannel.additive(cfg["nu_b"]),
                PhaseInsensitiveChannel.additive(cfg["nu_t"]))
    _require(cfg, "tau")
    tau = cfg["tau"]
    kind_enum = ChannelKind.LOSS if kind == "loss" else ChannelKind.AMPLIFIER

    def one(nu_key: str, eps_key: str) -> PhaseInsensitiveChannel:
        if cfg.get(nu_key) is not None:
            return PhaseInsensitiveChannel(kind_enum, tau, cfg[nu_key])
        if cfg.get(eps_key) is not None:
            ch = PhaseInsensitiveChannel.from_thermal(tau, cfg[eps_key])
            if ch.kind is not kind_enum:
                raise UsageError(f"tau={tau} is not a {kind} channel")
            return ch
        raise UsageError(f"need --{nu_key.replace('_', '-')} or --{eps_key.replace('_', '-')}")

    return one("nu_b", "eps_b"), one("nu_t", "eps_t")


def _finite(x):
    """Non-finite floats serialize as null/empty."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


# ---------------------------------------------------------------------------
# command implementations: each returns (config, columns, rows, plot_fn)

def cmd_fidelity(cfg: dict):
    background, target = _channel_pair(cfg)
    finite_a = None
    if cfg.get("a") is not None:
        a = cfg["a"]
        if background.kind is ChannelKind.ADDITIVE:
            finite_a = bnd.fid_additive(target.nu, background.nu, a)
        else:
            finite_a = bnd.fid_thermal(background.tau, target.eps, background.eps, a)
    columns = ["finite_a", "choi", "classical"]
    row = [finite_a, bnd.fid_choi(background, target), bnd.fid_classical(background, target)]
    return columns, [row], None


def _scenario_from_cfg(cfg: dict, probes: int = 0) -> bnd.CpfScenario:
    background, target = _channel_pair(cfg)
    _require(cfg, "m")
    return bnd.CpfScenario(cfg["m"], probes, background, target)


def cmd_bounds(cfg: dict):
    _require(cfg, "M")
    scen = _scenario_from_cfg(cfg, cfg["M"])
    b = bnd.error_bounds(scen)
    columns = [
        "quantum_lower", "quantum_lower_db", "quantum_upper", "quantum_upper_db",
        "classical_lower", "classical_lower_db", "classical_upper", "classical_upper_db",
    ]
    row = [
        b.quantum_lower, _finite(b.quantum_lower_db),
        b.quantum_upper, _finite(b.quantum_upper_db),
        b.classical_lower, _finite(b.classical_lower_db),
        b.classical_upper, _finite(b.classical_upper_db),
    ]
    return columns, [row], None


def cmd_advantage(cfg: dict):
    scen = _scenario_from_cfg(cfg)
    report = adv.advantage_report(scen, cfg.get("mle_limit"))
    columns = ["condition_holds", "fidelity_m_star", "mle_m_star"]
    return columns, [[report.condition_holds, report.fidelity_m_star, report.mle_m_star]], None


def cmd_region(cfg: dict):
    _require(cfg, "tau", "dif_min", "dif_max", "av_min", "av_max", "grid")
    n = cfg["grid"]
    if n < 2:
        raise UsageError(f"grid must be >= 2, got {n}")
    difs = np.linspace(cfg["dif_min"], cfg["dif_max"], n)
    avs = np.linspace(cfg["av_min"], cfg["av_max"], n)
    mask = adv.advantage_region(cfg["tau"], difs, avs)
    columns = ["eps_dif", "eps_av", "flag"]
    rows = [
        [float(difs[i]), float(avs[j]), int(mask[i, j])]
        for i in range(n)
        for j in range(n)
    ]

    def plot(path: str) -> None:
        from .plots import render_region

        render_region(difs, avs, mask, cfg["tau"], path)

    return columns, rows, plot


def _mle_spec_from_cfg(cfg: dict) -> mle_mod.MleSpec:
    _require(cfg, "m", "M")
    if cfg.get("nbar_t") is not None or cfg.get("nbar_b") is not None:
        _require(cfg, "nbar_t", "nbar_b")
        return mle_mod.MleSpec(cfg["nbar_t"], cfg["nbar_b"], cfg["m"], cfg["M"])
    scen = _scenario_from_cfg(cfg, cfg["M"])
    if cfg.get("benchmark") == "classical":
        nb_t, nb_b = mle_mod._classical_occupations(scen)
    else:
        nb_t, nb_b = mle_mod._quantum_occupations(scen)
    return mle_mod.MleSpec(nb_t, nb_b, cfg["m"], cfg["M"])


def cmd_mle(cfg: dict):
    spec = _mle_spec_from_cfg(cfg)
    info = mle_mod.mle_error_info(spec, cfg["mass_tol"], cfg["term_tol"])
    columns = [
        "nbar_t", "nbar_b", "m", "M", "ordering",
        "error", "error_db", "success", "truncation_bound",
        "count_lo", "count_hi",
    ]
    row = [
        spec.nbar_target, spec.nbar_background, spec.positions, spec.probes,
        spec.ordering.value,
        info.error, _finite(10.0 * math.log10(info.error)) if info.error > 0 else None,
        info.success, info.truncation_bound,
        info.count_window[0], info.count_window[1],
    ]
    return columns, [row], None


def cmd_simulate(cfg: dict):
    _require(cfg, "nbar_t", "nbar_b", "m", "M", "trials", "seed")
    if cfg["trials"] < 1:
        raise UsageError(f"trials must be >= 1, got {cfg['trials']}")
    spec = mle_mod.MleSpec(cfg["nbar_t"], cfg["nbar_b"], cfg["m"], cfg["M"])
    result = sim.run_mle_trials(spec, cfg["trials"], cfg["seed"])
    analytic = mle_mod.mle_error(spec, cfg["mass_tol"], cfg["term_tol"])
    if result.standard_error > 0.0:
        z = (result.error_estimate - analytic) / result.standard_error
    else:
        z = 0.0 if result.error_estimate == analytic else math.inf
    columns = [
        "trials", "successes", "error_estimate", "standard_error", "seed",
        "analytic_error", "z_score",
    ]
    row = [
        result.trials, result.successes, result.error_estimate,
        result.standard_error, result.seed, analytic, _finite(z),
    ]
    return columns, [row], None


def _build_figure_scenario(cfg: dict) -> bnd.CpfScenario:
    name = cfg.get("scenario")
    _require(cfg, "scenario")
    if name == "imaging":
        _require(cfg, "area", "solid_angle", "pulse", "wavelength",
                 "t_target", "t_background", "tau", "m")
        pixel = scn.BlackbodyPixel.at_wavelength(
            cfg["area"], cfg["solid_angle"], cfg["pulse"], cfg["wavelength"],
            temperature=cfg["t_target"], bandwidth=cfg.get("bandwidth"),
        )
        return scn.imaging_scenario(
            pixel, cfg["t_target"], cfg["t_background"], cfg["tau"], cfg["m"],
            quad_rtol=cfg["quad_rtol"],
        )
    if name == "eavesdropper":
        _require(cfg, "tau", "excess_b", "excess_t", "m")
        return scn.eavesdropper_scenario(cfg["tau"], cfg["excess_b"], cfg["excess_t"], cfg["m"])
    if name == "additive":
        _require(cfg, "nu_t", "nu_b", "m")
        return scn.additive_scenario(cfg["nu_t"], cfg["nu_b"], cfg["m"])
    if name == "custom":
        return _scenario_from_cfg(cfg)
    raise UsageError(f"unknown scenario {name!r}")


def cmd_figure(cfg: dict):
    scen = _build_figure_scenario(cfg)
    probe_counts = parse_probe_range(cfg["M"])
    if not probe_counts:
        raise UsageError("empty probe range")
    curve = scn.figure_curve(
        scen, probe_counts, mass_tol=cfg["mass_tol"], term_tol=cfg["term_tol"]
    )
    if scen.background.kind is ChannelKind.ADDITIVE:
        print(
            "warning: no entangled counting receiver for additive noise; "
            "quantum_mle columns left empty",
            file=sys.stderr,
        )
    columns = [
        "M",
        "quantum_lower", "quantum_lower_db",
        "quantum_upper", "quantum_upper_db",
        "classical_lower", "classical_lower_db",
        "quantum_mle", "quantum_mle_db",
        "classical_mle", "classical_mle_db",
    ]
    rows = [
        [
            r.probes,
            r.quantum_lower, _finite(r.quantum_lower_db),
            r.quantum_upper, _finite(r.quantum_upper_db),
            r.classical_lower, _finite(r.classical_lower_db),
            r.quantum_mle, _finite(r.quantum_mle_db),
            r.classical_mle, _finite(r.classical_mle_db),
        ]
        for r in curve.rows
    ]

    def plot(path: str) -> None:
        from .plots import render_figure_curve

        render_figure_curve(curve, path)

    return columns, rows, plot


_COMMANDS = {
    "fidelity": cmd_fidelity,
    "bounds": cmd_bounds,
    "advantage": cmd_advantage,
    "region": cmd_region,
    "mle": cmd_mle,
    "simulate": cmd_simulate,
    "figure": cmd_figure,
}


# ---------------------------------------------------------------------------
# output plumbing

def _resolve_out_path(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(command: str, cfg: dict, columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version = {SCHEMA_VERSION}\n")
    buf.write(f"# command = {command}\n")
    for key in sorted(cfg):
        buf.write(f"# {key} = {_cell(cfg[key])}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _render_json(command: str, cfg: dict, columns: list[str], rows: list[list]) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": cfg,
        "columns": columns,
        "rows": rows,
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        cfg = resolve_config(command, args)
        columns, rows, plot_fn = _COMMANDS[command](cfg)

        out_path = _resolve_out_path(cfg.get("out"))
        text = (
            _render_csv(command, cfg, columns, rows)
            if cfg["format"] == "csv"
            else _render_json(command, cfg, columns, rows)
        )
        if out_path is None:
            sys.stdout.write(text)
        else:
            out_path.parent.mkdir(parents=True, exist_ok=True)
            out_path.write_text(text)
            print(f"wrote {out_path}", file=sys.stderr)

        no_plot = getattr(args, "no_plot", None)
        if plot_fn is not None and not no_plot and (cfg.get("plot") or out_path is not None):
            if out_path is None:
                raise UsageError("--plot requires --out to name the image file")
            png = out_path.with_suffix(".png")
            plot_fn(str(png))
            print(f"wrote {png}", file=sys.stderr)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except NumericalInstabilityError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (DomainError, EnvlocError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
