"""Batch jobs: configuration loading, per-map pipelines and report rendering.

A job file is TOML (or JSON with the same keys)::

    n_iterates = 10
    commands = ["classify", "degrees", "crosscheck"]
    seed = 0

    [[maps]]
    name = "fibonacci"
    alpha = ["0", "0", "1"]
    beta = ["0", "1", "0"]
    gamma = ["0", "0", "1"]

Scalars are always strings in the exact text grammar ("1+2i", "-3/7").
"""

from __future__ import annotations

import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from birmap import __version__
from birmap.errors import BirmapError, ConfigError, InconclusiveFitError, ParseError
from birmap.exact.gaussian import parse_scalar

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "COMMANDS",
    "MapEntry",
    "JobConfig",
    "JobReport",
    "load_config",
    "config_from_dict",
    "run",
    "run_map",
    "render_report",
    "report_from_json",
    "exit_code",
]

COMMANDS = (
    "classify",
    "degrees",
    "fit",
    "crosscheck",
    "loci",
    "as-check",
    "normal-form",
    "verify-fibrations",
    "period",
)
# "report" expands to every command that applies to the map
ALL = "report"


@dataclass(frozen=True)
class MapEntry:
    name: str
    alpha: tuple
    beta: tuple
    gamma: tuple
    n_iterates: int | None = None

    def params(self):
        from birmap.maps import ParameterTuple

        return ParameterTuple.from_strings(self.alpha, self.beta, self.gamma)

    def to_dict(self) -> dict:
        out = {"name": self.name, "alpha": list(self.alpha), "beta": list(self.beta), "gamma": list(self.gamma)}
        if self.n_iterates is not None:
            out["n"] = self.n_iterates
        return out


@dataclass(frozen=True)
class JobConfig:
    maps: tuple = ()
    commands: tuple = (ALL,)
    n_iterates: int = 10
    horizon: int = 64
    period_bound: int = 24
    seed: int = 0
    output_path: str | None = None
    workers: int = 1

    def settings(self) -> dict:
        return {
            "commands": list(self.commands),
            "n_iterates": self.n_iterates,
            "horizon": self.horizon,
            "period_bound": self.period_bound,
            "seed": self.seed,
        }


def _block_lines(text: str) -> list:
    """Line numbers (1-based) of each [[maps]] header in a TOML document."""
    return [i + 1 for i, line in enumerate(text.splitlines()) if re.match(r"\s*\[\[\s*maps\s*\]\]", line)]


def _where(source: str, lines: list, index: int) -> str:
    if index < len(lines):
        return f"{source}:{lines[index]}"
    return source


def _field_where(source: str, text_lines: list, blocks: list, index: int, key: str) -> str:
    """Location of ``key = ...`` inside the index-th [[maps]] block, else the block header."""
    if index >= len(blocks):
        return source
    end = blocks[index + 1] - 1 if index + 1 < len(blocks) else len(text_lines)
    for n in range(blocks[index], end):
        if re.match(rf"\s*{key}\s*=", text_lines[n]):
            return f"{source}:{n + 1}"
    return f"{source}:{blocks[index]}"


def _scalar_triple(raw, where: str, field_name: str) -> tuple:
    if not isinstance(raw, list) or len(raw) != 3:
        raise ConfigError(f"{where}: field '{field_name}' must be a list of three scalar strings")
    out = []
    for j, item in enumerate(raw):
        if not isinstance(item, str):
            raise ConfigError(
                f"{where}: {field_name}[{j}] must be a string (got {type(item).__name__}); "
                "write scalars as strings to keep them exact"
            )
        try:
            parse_scalar(item)
        except ParseError as exc:
            raise ConfigError(f"{where}: {field_name}[{j}] malformed scalar {item!r}: {exc}") from None
        out.append(item.strip())
    return tuple(out)


def _positive_int(data: dict, key: str, default: int, source: str) -> int:
    value = data.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"{source}: '{key}' must be a positive integer")
    return value


def config_from_dict(
    data: dict, source: str = "<config>", block_lines: list | None = None, text_lines: list | None = None
) -> JobConfig:
    block_lines = block_lines or []
    text_lines = text_lines or []
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a table")
    raw_maps = data.get("maps", [])
    if not isinstance(raw_maps, list):
        raise ConfigError(f"{source}: 'maps' must be an array of tables")
    entries = []
    seen = set()
    for i, raw in enumerate(raw_maps):
        where = _where(source, block_lines, i)
        if not isinstance(raw, dict):
            raise ConfigError(f"{where}: maps[{i}] must be a table")
        name = raw.get("name", f"map{i}")
        if not isinstance(name, str) or not name:
            raise ConfigError(f"{where}: maps[{i}].name must be a non-empty string")
        if name in seen:
            raise ConfigError(f"{where}: duplicate map name {name!r}")
        seen.add(name)
        label = f"maps[{i}] ({name})"
        where = f"{where}: {label}"

        def at(key):
            return f"{_field_where(source, text_lines, block_lines, i, key)}: {label}"

        triples = {}
        for key in ("alpha", "beta", "gamma"):
            if key not in raw:
                raise ConfigError(f"{where}: missing field '{key}'")
            triples[key] = _scalar_triple(raw[key], at(key), key)
        n = raw.get("n")
        if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
            raise ConfigError(f"{at('n')}: 'n' must be a positive integer")
        entry = MapEntry(name, triples["alpha"], triples["beta"], triples["gamma"], n)
        try:
            entry.params()
        except BirmapError as exc:
            raise ConfigError(f"{at('gamma')}: field 'gamma': {exc}") from None
        entries.append(entry)
    commands = data.get("commands", [ALL])
    if isinstance(commands, str):
        commands = [commands]
    bad = [c for c in commands if c not in COMMANDS and c != ALL]
    if bad:
        raise ConfigError(f"{source}: unknown command(s) {bad}; choose from {list(COMMANDS) + [ALL]}")
    out = data.get("output")
    return JobConfig(
        maps=tuple(entries),
        commands=tuple(commands),
        n_iterates=_positive_int(data, "n_iterates", 10, source),
        horizon=_positive_int(data, "horizon", 64, source),
        period_bound=_positive_int(data, "period_bound", 24, source),
        seed=int(data.get("seed", 0)),
        output_path=out if isinstance(out, str) else None,
        workers=_positive_int(data, "workers", 1, source),
    )


def load_config(path) -> JobConfig:
    """Read a TOML or JSON job file; problems raise :class:`ConfigError` with a location."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
        return config_from_dict(data, str(path))
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from None
    return config_from_dict(data, str(path), _block_lines(text), text.splitlines())


# -- per-map pipeline ---------------------------------------------------------

def _zero_entropy(subcase: str) -> bool:
    return subcase in ("CD2-iii", "CD3-iii", "G2-b1", "G2-b2") or subcase.startswith("G1-")


def _expand(commands, degenerate: bool, subcase: str | None) -> list:
    if ALL not in commands:
        return list(commands)
    out = ["degrees", "fit", "loci", "as-check", "period"]
    if degenerate:
        out[1:1] = ["classify", "crosscheck"]
        if subcase and _zero_entropy(subcase):
            out += ["normal-form", "verify-fibrations"]
    return out


def run_map(entry: MapEntry, settings: dict, timing: bool = False) -> dict:
    """Run the requested pipelines on one map; errors are recorded, not raised."""
    from birmap.classifier import classify, cross_check
    from birmap.degrees import degree_sequence, fit_recurrence, growth_class
    from birmap.fibrations import detect_periodicity, normal_form, verify_catalog
    from birmap.geometry import as_diagnostic, special_loci
    from birmap.maps import birationality_check

    record: dict = {"name": entry.name, "params": entry.to_dict(), "errors": [], "failures": []}
    clock: dict = {}
    params = entry.params()
    bir = birationality_check(params)
    record["birationality"] = bir.to_dict()
    N = entry.n_iterates or settings["n_iterates"]

    case = None
    if bir.is_birational and bir.is_degenerate:
        try:
            case = classify(params)
        except BirmapError:
            case = None
    commands = _expand(settings["commands"], bir.is_birational and bir.is_degenerate, case.subcase if case else None)

    cache: dict = {}

    def seq():
        if "seq" not in cache:
            cache["seq"] = degree_sequence(params, N)
        return cache["seq"]

    for cmd in commands:
        t0 = time.perf_counter()
        try:
            if not bir.is_birational:
                from birmap.errors import NotBirationalError

                raise NotBirationalError(bir.violated_conditions)
            if cmd == "classify":
                record["case"] = classify(params).to_dict()
            elif cmd == "degrees":
                record["degrees"] = seq().to_dict()
            elif cmd == "fit":
                used = seq()
                try:
                    fit = fit_recurrence(used)
                except InconclusiveFitError:
                    # periodic sequences need 2 * period terms; retry once on a doubled run
                    used = degree_sequence(params, 2 * N)
                    fit = fit_recurrence(used)
                record["fit"] = {**fit.to_dict(), "terms_used": len(used)}
                record["growth"] = growth_class(fit, used).to_dict()
            elif cmd == "crosscheck":
                rep = cross_check(params, N, cache.get("seq"))
                record["crosscheck"] = rep.to_dict()
                if not rep.passed:
                    record["failures"].append("crosscheck")
            elif cmd == "loci":
                record["loci"] = special_loci(params).to_dict()
            elif cmd == "as-check":
                record["as_check"] = as_diagnostic(params, settings["horizon"]).to_dict()
            elif cmd == "normal-form":
                record["normal_form"] = normal_form(params).to_dict()
            elif cmd == "verify-fibrations":
                form = normal_form(params)
                verdicts = verify_catalog(form, seed=settings["seed"])
                record["fibrations"] = [v.to_dict() for v in verdicts]
                record["failures"] += [f"fibration {v.label}" for v in verdicts if not v.passed]
            elif cmd == "period":
                record["periodicity"] = detect_periodicity(params, settings["period_bound"], seed=settings["seed"]).to_dict()
            else:
                raise ConfigError(f"unknown command {cmd!r}")
        except BirmapError as exc:
            record["errors"].append({"command": cmd, "type": type(exc).__name__, "message": str(exc)})
        clock[cmd] = round(time.perf_counter() - t0, 6)
    if "seq" in cache:
        record["degrees"] = cache["seq"].to_dict()
    if "fit" in record:
        record["char_poly"] = record["fit"]["char_poly"]
    if timing:
        record["timing"] = clock
    return record


# -- reports ------------------------------------------------------------------

@dataclass
class JobReport:
    version: str
    settings: dict
    records: list = field(default_factory=list)
    timing: dict | None = None

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if r["failures"])

    @property
    def errors(self) -> int:
        return sum(1 for r in self.records if r["errors"])

    def to_dict(self) -> dict:
        out = {
            "version": self.version,
            "settings": self.settings,
            "maps": self.records,
            "summary": {"maps": len(self.records), "failed": self.failures, "errored": self.errors},
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "JobReport":
        return cls(data["version"], data["settings"], list(data["maps"]), data.get("timing"))


def exit_code(report: JobReport) -> int:
    """0 when no record holds a failure or an error, else 1."""
    return 0 if not (report.failures or report.errors) else 1


def run(config: JobConfig, *, timing: bool = False) -> tuple:
    """Execute the job; returns (JobReport, exit code).  Records are ordered by map name."""
    settings = config.settings()
    t0 = time.perf_counter()
    entries = sorted(config.maps, key=lambda e: e.name)
    if config.workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(run_map, entries, [settings] * len(entries), [timing] * len(entries)))
    else:
        records = [run_map(e, settings, timing) for e in entries]
    report = JobReport(__version__, settings, records)
    if timing:
        report.timing = {"total_seconds": round(time.perf_counter() - t0, 6), "workers": config.workers}
    return report, exit_code(report)


def report_from_json(text: str) -> JobReport:
    return JobReport.from_dict(json.loads(text))


def _verdicts(record: dict) -> str:
    parts = []
    if "crosscheck" in record:
        parts.append("crosscheck:" + ("pass" if record["crosscheck"]["passed"] else "FAIL"))
    if "fibrations" in record:
        ok = sum(1 for v in record["fibrations"] if v["passed"])
        parts.append(f"fibrations:{ok}/{len(record['fibrations'])}")
    if "periodicity" in record:
        p = record["periodicity"]["period"]
        parts.append(f"period:{p if p is not None else '-'}")
    if "as_check" in record:
        parts.append("AS" if record["as_check"]["is_as_on_p2"] else f"collisions:{len(record['as_check']['collisions'])}")
    for err in record["errors"]:
        parts.append(f"error[{err['command']}]:{err['type']}")
    return " ".join(parts)


def _table(report: JobReport) -> str:
    header = ("name", "case", "degrees", "char poly", "growth", "verdicts")
    rows = []
    for r in report.records:
        case = r.get("case", {}).get("subcase") or r.get("crosscheck", {}).get("subcase", "")
        degs = " ".join(str(d) for d in (r.get("degrees") or {}).get("degrees", []))
        cc = r.get("crosscheck", {})
        poly = r.get("char_poly") or cc.get("fitted_char_poly") or ""
        growth = (r.get("growth") or {}).get("tag") or cc.get("growth_found") or ""
        if not degs and cc:
            degs = " ".join(str(d) for d in cc["degrees"])
        rows.append((r["name"], case, degs, poly, growth, _verdicts(r)))
    widths = [max([len(h)] + [len(row[i]) for row in rows]) for i, h in enumerate(header)]
    fmt = lambda row: " | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    lines = [fmt(header), "-+-".join("-" * w for w in widths)]
    lines += [fmt(row) for row in rows]
    lines.append(f"{len(report.records)} map(s), {report.failures} failed, {report.errors} with errors")
    return "\n".join(lines) + "\n"


def render_report(report: JobReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "table":
        return _table(report)
    raise ValueError(f"unknown format {fmt!r}")
