"""Command-line front end: sweeps and figure datasets as CSV or JSON."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, fock_oracle
from .channels import LossModel, LossScenario
from .economical import GRID_POINTS
from .errors import ConfigError, EcsError, NumericalError
from .entanglement import negativity
from .figures import FIGURES, Table, eco_table, qfi_table, span
from .qfi import cfi_pnrd, compare_at_fixed_energy, qfi_ecs
from .sld_cfi import verify_sld_identities
from .states import ProbeSpec, Sign, degree_of_entanglement

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


# --------------------------------------------------------------------------
# option parsing


def parse_grid(text, *, unit_interval: bool = False) -> list[float]:
    """Comma list ``a,b,c`` or inclusive range ``start:stop:step``."""
    if isinstance(text, (list, tuple)):
        values = [float(v) for v in text]
    else:
        text = str(text).strip()
        try:
            if ":" in text:
                parts = [float(v) for v in text.split(":")]
                if len(parts) != 3 or parts[2] <= 0:
                    raise ConfigError(f"range {text!r} must be start:stop:step with step > 0")
                values = span(*parts)
            else:
                values = [float(v) for v in text.split(",") if v.strip()]
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"cannot parse grid {text!r}") from None
    if not values:
        raise ConfigError("grid is empty")
    if any(b < a for a, b in zip(values, values[1:])):
        raise ConfigError(f"grid {values} is not sorted ascending")
    if unit_interval and any(not 0.0 <= v <= 1.0 for v in values):
        raise ConfigError("loss rates must lie in [0, 1]")
    return values


def _rates(text):
    return parse_grid(text, unit_interval=True)


def _model(text):
    try:
        return LossModel.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _sign(text):
    try:
        return Sign.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _bool(text):
    if isinstance(text, bool):
        return text
    key = str(text).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


def _int(text):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ConfigError(f"expected an integer, got {text!r}") from None


def _format(text):
    if text not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    return text


CONVERTERS = {
    "alpha": parse_grid, "beta": parse_grid, "rate": _rates, "gamma": parse_grid,
    "n_av": parse_grid, "phi": parse_grid, "distance": parse_grid,
    "model": _model, "sign": _sign, "oracle": _bool, "truncation": _int,
    "grid_points": _int, "format": _format, "output": str,
}

COMMON = {"format": "csv", "output": None, "oracle": False, "truncation": None}

DEFAULTS = {
    "doe": {"alpha": "1", "beta": "0", "sign": "plus"},
    "qfi": {"alpha": "1", "beta": "0", "rate": "0", "model": "both_arms", "sign": "plus"},
    "eco": {"alpha": "1", "rate": "0", "model": "both_arms", "grid_points": GRID_POINTS},
    "eco-surface": {"alpha": "0.2:3:0.1", "rate": "0:0.9:0.1", "model": "both_arms",
                    "grid_points": GRID_POINTS},
    "compare": {"n_av": "1", "gamma": "0", "rate": "0", "model": "both_arms", "sign": "plus"},
    "negativity": {"alpha": "1", "beta": "0", "rate": "0", "model": "both_arms"},
    "sld-check": {"alpha": "1", "beta": "0", "rate": "0.2", "model": "both_arms", "phi": "0.3"},
    "cfi": {"alpha": "1", "beta": "0", "rate": "0.2", "model": "both_arms", "phi": "0.1:1.5:0.1"},
    "fig": {"alpha": None, "rate": None, "n_av": None, "distance": None},
}

HELP = {
    "alpha": "alpha grid: a,b,c or start:stop:step",
    "beta": "beta grid",
    "rate": "loss-rate grid in [0, 1]",
    "gamma": "beta/alpha ratio grid",
    "n_av": "mean photon number grid",
    "phi": "phase grid",
    "distance": "|alpha - beta| grid",
    "model": "both_arms or one_arm_a",
    "sign": "plus or minus",
    "grid_points": "number of beta grid points before refinement",
}


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys map to underscores."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecsmetro", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, keys in DEFAULTS.items():
        p = sub.add_parser(name)
        if name == "fig":
            p.add_argument("number", type=int, choices=sorted(FIGURES))
        for key in keys:
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=HELP.get(key))
        p.add_argument("--format", default=None, choices=["csv", "json"])
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        p.add_argument("--config", default=None, help="flat key = value file")
        p.add_argument("--oracle", action="store_const", const=True, default=None,
                       help="append brute-force Fock-space columns and residuals")
        p.add_argument("--truncation", default=None, help="Fock cutoff per mode")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over defaults and convert every value."""
    defaults = dict(COMMON, **DEFAULTS[args.command])
    file_values = read_config(args.config) if args.config else {}
    unknown = sorted(set(file_values) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    config = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        raw = flag if flag is not None else file_values.get(key, default)
        config[key] = None if raw is None else CONVERTERS[key](raw)
    return config


# --------------------------------------------------------------------------
# subcommands


def _doe(cfg) -> Table:
    cols = ["alpha", "beta", "sign", "doe"]
    if cfg["oracle"]:
        cols += ["oracle_doe", "residual"]
    table = Table(cols)
    for a in cfg["alpha"]:
        for b in cfg["beta"]:
            probe = ProbeSpec(a, b, cfg["sign"])
            value = degree_of_entanglement(probe)
            row = [a, b, cfg["sign"].label, value]
            if cfg["oracle"]:
                ref = fock_oracle.oracle_entropy_of_reduction(fock_oracle.ecs_fock(probe, cfg["truncation"]))
                row += [ref, abs(ref - value)]
            table.add(*row)
    return table


def _qfi(cfg) -> Table:
    return qfi_table(cfg["alpha"], cfg["beta"], cfg["rate"], cfg["model"], cfg["sign"], cfg["oracle"])


def _eco(cfg) -> Table:
    return eco_table(cfg["alpha"], cfg["rate"], cfg["model"], cfg["oracle"], cfg["grid_points"])


def _compare(cfg) -> Table:
    table = Table(["n_av", "gamma", "rate", "alpha", "beta", "qfi_ecs", "qfi_coherent", "ratio"])
    for r in cfg["rate"]:
        s = LossScenario(cfg["model"], r)
        for g in cfg["gamma"]:
            for n in cfg["n_av"]:
                c = compare_at_fixed_energy(n, g, cfg["sign"], s)
                ratio = c.qfi_ecs / c.qfi_coherent if c.qfi_coherent > 0 else float("nan")
                table.add(n, g, r, c.alpha, c.beta, c.qfi_ecs, c.qfi_coherent, ratio)
    return table


def _negativity(cfg) -> Table:
    table = Table(["alpha", "beta", "rate", "negativity"] + (["oracle_negativity", "residual"] if cfg["oracle"] else []))
    for a in cfg["alpha"]:
        for b in cfg["beta"]:
            probe = ProbeSpec(a, b)
            for r in cfg["rate"]:
                value = negativity(probe, LossScenario(cfg["model"], r)).value
                row = [a, b, r, value]
                if cfg["oracle"]:
                    rho = fock_oracle.output_state(probe, cfg["model"], r, truncation=cfg["truncation"])
                    ref = fock_oracle.oracle_negativity(rho)
                    row += [ref, abs(ref - value)]
                table.add(*row)
    return table


def _sld_check(cfg) -> Table:
    table = None
    for a in cfg["alpha"]:
        for b in cfg["beta"]:
            for r in cfg["rate"]:
                for phi in cfg["phi"]:
                    rep = verify_sld_identities(ProbeSpec(a, b), LossScenario(cfg["model"], r),
                                                cfg["truncation"], phi)
                    rec = rep.as_dict()
                    if table is None:
                        table = Table(["alpha", "beta", "rate", "phi"] + list(rec))
                    table.add(a, b, r, phi, *(int(v) if isinstance(v, bool) else v for v in rec.values()))
    return table


def _cfi(cfg) -> Table:
    table = Table(["alpha", "beta", "rate", "phi", "cfi", "qfi", "captured_probability", "truncation"])
    for a in cfg["alpha"]:
        for b in cfg["beta"]:
            probe = ProbeSpec(a, b)
            for r in cfg["rate"]:
                s = LossScenario(cfg["model"], r)
                q = qfi_ecs(probe, s).value
                for phi in cfg["phi"]:
                    res = cfi_pnrd(probe, s, phi, cfg["truncation"])
                    table.add(a, b, r, phi, res.value, q, res.captured_probability, res.truncation)
    return table


def _fig(cfg, number: int) -> Table:
    fn = FIGURES[number]
    kwargs = {}
    if number == 2:
        kwargs["distances"] = cfg["distance"]
    elif number in (5, 7, 11, 12):
        kwargs["n_grid"] = cfg["n_av"]
    elif number == 3:
        kwargs["alphas"] = cfg["alpha"]
    else:
        kwargs["alphas"], kwargs["rates"] = cfg["alpha"], cfg["rate"]
    if number != 2:
        kwargs["oracle"] = cfg["oracle"]
    return fn(**kwargs)


def run(command: str, cfg: dict, number: int | None = None) -> Table:
    handlers = {"doe": _doe, "qfi": _qfi, "eco": _eco, "eco-surface": _eco, "compare": _compare,
                "negativity": _negativity, "sld-check": _sld_check, "cfi": _cfi}
    if command == "fig":
        return _fig(cfg, number)
    return handlers[command](cfg)


# --------------------------------------------------------------------------
# output


def _cell(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return format(value, ".12g")
    return value


def _json_value(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        text = format(value, ".12g")
        return float(text) if text not in ("nan", "inf", "-inf") else text
    return value


def _config_record(cfg: dict, command: str, number) -> dict:
    rec = {"command": command}
    if number is not None:
        rec["figure"] = number
    for key, value in cfg.items():
        if isinstance(value, (LossModel, Sign)):
            value = value.value if isinstance(value, LossModel) else value.label
        elif isinstance(value, list):
            value = [_json_value(v) for v in value]
        rec[key] = value
    return rec


def render(table: Table, fmt: str, meta: dict) -> str:
    if fmt == "json":
        rows = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
        return json.dumps({"meta": meta, "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _fail(exc: Exception, code: int) -> int:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    details = getattr(exc, "details", None)
    if details:
        record["details"] = {k: _json_value(v) for k, v in details.items()}
    sys.stderr.write(json.dumps(record) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    number = getattr(args, "number", None)
    try:
        cfg = resolve(args)
        table = run(args.command, cfg, number)
        meta = {"version": __version__, "config": _config_record(cfg, args.command, number)}
        text = render(table, cfg["format"], meta)
        if cfg["output"]:
            with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except NumericalError as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except (ValueError, EcsError, OSError) as exc:
        return _fail(exc, EXIT_CONFIG)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
