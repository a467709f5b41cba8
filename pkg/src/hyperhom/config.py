"""Sectioned plain-text session files.

    [ring]
    char = 32003
    vars = x, y, u, v
    relation = x*u - y*v

    [module M]
    kind = ideal
    generators = x, y

    [module Mstar]
    kind = dual-of
    of = M

Module kinds: ideal, quotient, cokernel (``matrix`` rows separated by ``;``,
optional ``shifts``), free (``shifts`` or ``rank``), residue-field,
direct-sum (``of = A, B``), dual-of, syzygy-of (optional ``index``) and
pushforward-of.  An optional ``[options]`` section holds ``seed`` and ``bound``.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .kernel.groebner import InhomogeneousError
from .kernel.polynomial import DEFAULT_CHARACTERISTIC, ParseError
from .rings import (
    GradedModule, HypersurfaceRing, cokernel, define_hypersurface, direct_sum, free_module,
    ideal_module, quotient_module, residue_field,
)

MODULE_KINDS = ("ideal", "quotient", "cokernel", "free", "residue-field", "direct-sum",
                "dual-of", "syzygy-of", "pushforward-of")


class ConfigError(ValueError):
    """Malformed or semantically invalid session file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class SessionConfig:
    characteristic: int
    variables: tuple
    relation: str | None
    ring: HypersurfaceRing
    modules: dict
    seed: int = 0
    bound: int | None = None
    digest: str = ""
    source: str = ""
    definitions: dict = field(default_factory=dict)

    def module(self, name: str) -> GradedModule:
        try:
            return self.modules[name]
        except KeyError:
            known = ", ".join(self.modules) or "none"
            raise ConfigError(f"unknown module {name!r} (defined: {known})") from None


def _locate(text: str, section: str, key: str) -> tuple[int | None, int | None]:
    """Line and column where ``key``'s value starts inside ``[section]``."""
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            continue
        if current == section and "=" in raw:
            k, _, v = raw.partition("=")
            if k.strip() == key:
                return n, len(k) + 2 + (len(v) - len(v.lstrip()))
    return None, None


def _section_line(text: str, section: str) -> int | None:
    for n, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() == f"[{section}]":
            return n
    return None


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _int_list(value: str, text, section, key) -> list[int]:
    try:
        return [int(v) for v in _split_list(value)]
    except ValueError:
        line, col = _locate(text, section, key)
        raise ConfigError(f"{key} must be a comma-separated list of integers", line, col) from None


def parse_config_text(text: str, name: str = "<string>") -> SessionConfig:
    cp = configparser.ConfigParser(interpolation=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text, source=name)
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("content before the first section header", exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", lineno) from None

    if not cp.has_section("ring"):
        raise ConfigError("missing [ring] section")
    ring_sec = cp["ring"]
    try:
        char = int(ring_sec.get("char", str(DEFAULT_CHARACTERISTIC)))
    except ValueError:
        raise ConfigError("char must be an integer", *_locate(text, "ring", "char")) from None
    variables = tuple(_split_list(ring_sec.get("vars", "")))
    if not variables:
        raise ConfigError("[ring] needs a non-empty vars list", *_locate(text, "ring", "vars"))
    relation = ring_sec.get("relation")
    if relation is not None and not relation.strip():
        relation = None
    try:
        ring = define_hypersurface(char, variables, relation)
    except ParseError as exc:
        line, col = _locate(text, "ring", "relation")
        raise ConfigError(f"relation: {exc}", line, None if col is None else col + exc.position) from None
    except InhomogeneousError as exc:
        raise ConfigError(str(exc), *_locate(text, "ring", "relation")) from None
    except ValueError as exc:
        raise ConfigError(str(exc), *_locate(text, "ring", "char")) from None

    seed = 0
    bound = None
    if cp.has_section("options"):
        opts = cp["options"]
        try:
            seed = int(opts.get("seed", "0"))
            bound = int(opts["bound"]) if "bound" in opts else None
        except ValueError:
            raise ConfigError("[options] seed and bound must be integers") from None

    definitions = {}
    for sec in cp.sections():
        if sec in ("ring", "options"):
            continue
        parts = sec.split()
        if len(parts) != 2 or parts[0] != "module":
            raise ConfigError(f"unknown section [{sec}]", _section_line(text, sec))
        definitions[parts[1]] = dict(cp[sec])
        definitions[parts[1]]["__section__"] = sec

    modules: dict = {}
    building: set = set()

    def build(mname: str) -> GradedModule:
        if mname in modules:
            return modules[mname]
        if mname not in definitions:
            raise ConfigError(f"unknown module {mname!r}")
        if mname in building:
            raise ConfigError(f"module {mname!r} is defined in terms of itself")
        building.add(mname)
        modules[mname] = _build_module(ring, definitions[mname], build, text)
        building.discard(mname)
        return modules[mname]

    for mname in definitions:
        build(mname)
    # keep the file's order
    modules = {m: modules[m] for m in definitions}
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return SessionConfig(char, variables, relation, ring, modules, seed, bound, digest, name, definitions)


def _poly(ring, expr, text, section, key):
    try:
        return ring.parse(expr)
    except ParseError as exc:
        line, col = _locate(text, section, key)
        raise ConfigError(f"{key}: {exc}", line, col) from None


def _build_module(ring, entry: dict, build, text) -> GradedModule:
    from .theta import _dual_data, pushforward, syzygy_module

    section = entry["__section__"]
    kind = entry.get("kind")
    if kind not in MODULE_KINDS:
        raise ConfigError(f"kind must be one of {', '.join(MODULE_KINDS)}", *_locate(text, section, "kind"))

    def need(key):
        if key not in entry:
            raise ConfigError(f"[{section}] of kind {kind} needs {key!r}")
        return entry[key]

    try:
        if kind in ("ideal", "quotient"):
            gens = [_poly(ring, g, text, section, "generators") for g in _split_list(need("generators"))]
            if not gens:
                raise ConfigError(f"[{section}] has no generators", *_locate(text, section, "generators"))
            return ideal_module(ring, gens) if kind == "ideal" else quotient_module(ring, gens)
        if kind == "cokernel":
            rows = [[_poly(ring, e, text, section, "matrix") for e in _split_list(r)]
                    for r in need("matrix").split(";") if r.strip()]
            if not rows or len({len(r) for r in rows}) != 1:
                raise ConfigError("matrix rows must all have the same length", *_locate(text, section, "matrix"))
            shifts = _int_list(entry["shifts"], text, section, "shifts") if "shifts" in entry else None
            if shifts is not None and len(shifts) != len(rows):
                raise ConfigError("one shift per matrix row is required", *_locate(text, section, "shifts"))
            return cokernel(ring, rows, shifts)
        if kind == "free":
            if "shifts" in entry:
                return free_module(ring, _int_list(entry["shifts"], text, section, "shifts"))
            return free_module(ring, [0] * int(entry.get("rank", "1")))
        if kind == "residue-field":
            return residue_field(ring)
        if kind == "direct-sum":
            return direct_sum(*[build(n) for n in _split_list(need("of"))])
        base = build(need("of").strip())
        if kind == "dual-of":
            return _dual_data(base).dual
        if kind == "syzygy-of":
            return syzygy_module(base, int(entry.get("index", "1")))
        return pushforward(base).M1
    except InhomogeneousError as exc:
        raise ConfigError(f"[{section}]: {exc}") from None


def parse_config(path) -> SessionConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config_text(text, str(path))
