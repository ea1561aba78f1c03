"""JSON problem configs for the command line.

A config is one JSON object with the top-level keys ``timescale``,
``equation``, ``perturbation``, ``riccati`` (variable coefficients only) and
``output``. :func:`parse_config` validates and normalizes it into a
:class:`ProblemConfig`; :meth:`ProblemConfig.to_dict` is the canonical form
that ``--dump-config`` prints, and it parses back to an equal config.

Coefficients (``d``, ``p``, ``q``, ``f``, ``riccati.z``) are a number, an
expression over ``t`` (see :mod:`tempus.expr`) or an explicit list with one
value per point.
"""
import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from tempus.errors import ConfigError, TempusError
from tempus.expr import ExpressionError, evaluate, parse_expression
from tempus.harness import KINDS, PerturbationSpec, make_timescale
from tempus.solvers import FORMS, EquationSpec
from tempus.timescale import Coefficient, GridFunction

FAMILY_PARAMS = {
    "uniform": ("a", "b", "h"),
    "q_scale": ("t0", "q", "n"),
    "sample": ("a", "b", "n"),
    "points": ("points",),
    "mixed": ("segments",),
}
INT_PARAMS = {"n"}

EQUATION_KEYS = {
    "first": {"required": ("d",), "optional": ("f", "initial")},
    "cc": {"required": ("alpha", "beta"), "optional": ("initial", "construction")},
    "icc": {"required": ("alpha", "beta"), "optional": ("f", "initial")},
    "ivc": {"required": ("p", "q"), "optional": ("f", "initial")},
}
FORMATS = ("csv", "json")


def _number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def _mapping(value, key):
    if not isinstance(value, dict):
        raise ConfigError(key, f"expected an object, got {type(value).__name__}")
    return value


def _no_extra(section, allowed, prefix):
    for k in section:
        if k not in allowed:
            raise ConfigError(f"{prefix}.{k}", "unknown key")


def _coefficient_value(value, key):
    if isinstance(value, str):
        try:
            parse_expression(value)
        except ExpressionError as exc:
            raise ConfigError(key, str(exc)) from None
        return value
    if isinstance(value, list):
        return [_number(v, f"{key}[{i}]") for i, v in enumerate(value)]
    return _number(value, key)


def _timescale(section, prefix="timescale"):
    section = _mapping(section, prefix)
    family = section.get("family")
    if family not in FAMILY_PARAMS:
        raise ConfigError(f"{prefix}.family",
                          f"expected one of {sorted(FAMILY_PARAMS)}, got {family!r}")
    params = FAMILY_PARAMS[family]
    _no_extra(section, ("family",) + params, prefix)
    out = {"family": family}
    for name in params:
        key = f"{prefix}.{name}"
        if name not in section:
            raise ConfigError(key, "missing")
        value = section[name]
        if name == "points":
            if not isinstance(value, list):
                raise ConfigError(key, "expected a list of numbers")
            out[name] = [_number(v, f"{key}[{i}]") for i, v in enumerate(value)]
        elif name == "segments":
            if not isinstance(value, list) or not value:
                raise ConfigError(key, "expected a non-empty list of time scales")
            out[name] = [_timescale(seg, f"{key}[{i}]") for i, seg in enumerate(value)]
        elif name in INT_PARAMS:
            num = _number(value, key)
            if num != int(num):
                raise ConfigError(key, "expected an integer")
            out[name] = int(num)
        else:
            out[name] = _number(value, key)
    return out


def _equation(section):
    section = _mapping(section, "equation")
    form = section.get("form")
    if form not in FORMS:
        raise ConfigError("equation.form", f"expected one of {list(FORMS)}, got {form!r}")
    spec = EQUATION_KEYS[form]
    _no_extra(section, ("form",) + spec["required"] + spec["optional"], "equation")
    out = {"form": form}
    for name in spec["required"]:
        if name not in section:
            raise ConfigError(f"equation.{name}", "missing")
    for name in spec["required"] + spec["optional"]:
        if name not in section:
            continue
        key, value = f"equation.{name}", section[name]
        if name in ("alpha", "beta"):
            out[name] = _number(value, key)
        elif name == "initial":
            need = 1 if form == "first" else 2
            if not isinstance(value, list) or len(value) != need:
                raise ConfigError(key, f"expected a list of {need} numbers")
            out[name] = [_number(v, f"{key}[{i}]") for i, v in enumerate(value)]
        elif name == "construction":
            if value not in ("literal", "lemma"):
                raise ConfigError(key, "expected 'literal' or 'lemma'")
            out[name] = value
        else:
            out[name] = _coefficient_value(value, key)
    out.setdefault("f", 0.0)
    out.setdefault("initial", [1.0] if form == "first" else [1.0, 1.0])
    if form == "cc":
        out.pop("f")
        out.setdefault("construction", "literal")
    return out


def _perturbation(section):
    section = _mapping(section, "perturbation")
    has_y, has_kind = "y" in section, "kind" in section
    if has_y == has_kind:
        raise ConfigError("perturbation", "give exactly one of a perturbation spec (kind) or inline y")
    if has_y:
        _no_extra(section, ("y",), "perturbation")
        y = section["y"]
        if not isinstance(y, list):
            raise ConfigError("perturbation.y", "expected a list of numbers")
        return {"y": [_number(v, f"perturbation.y[{i}]") for i, v in enumerate(y)]}
    _no_extra(section, ("kind", "magnitude", "seed", "pin_endpoints"), "perturbation")
    if section["kind"] not in KINDS:
        raise ConfigError("perturbation.kind", f"expected one of {list(KINDS)}")
    if "magnitude" not in section:
        raise ConfigError("perturbation.magnitude", "missing")
    magnitude = _number(section["magnitude"], "perturbation.magnitude")
    if magnitude < 0:
        raise ConfigError("perturbation.magnitude", "must be >= 0")
    seed = section.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise ConfigError("perturbation.seed", "expected an integer in [0, 2^64)")
    pin = section.get("pin_endpoints", True)
    if not isinstance(pin, bool):
        raise ConfigError("perturbation.pin_endpoints", "expected true or false")
    return {"kind": section["kind"], "magnitude": magnitude, "seed": seed, "pin_endpoints": pin}


def _riccati(section):
    section = _mapping(section, "riccati")
    _no_extra(section, ("z0", "z"), "riccati")
    if "z0" in section and "z" in section:
        raise ConfigError("riccati", "give at most one of z0 or z")
    if "z0" in section:
        return {"z0": _number(section["z0"], "riccati.z0")}
    if "z" in section:
        return {"z": _coefficient_value(section["z"], "riccati.z")}
    return {}


def _output(section):
    section = _mapping(section, "output")
    _no_extra(section, ("dir", "format"), "output")
    out = {"format": section.get("format", "csv")}
    if out["format"] not in FORMATS:
        raise ConfigError("output.format", f"expected one of {list(FORMATS)}")
    if "dir" in section:
        if not isinstance(section["dir"], str):
            raise ConfigError("output.dir", "expected a path string")
        out["dir"] = section["dir"]
    return out


@dataclass(frozen=True)
class ProblemConfig:
    timescale: dict
    equation: dict
    perturbation: dict
    riccati: Optional[dict]
    output: dict

    def to_dict(self):
        doc = {"timescale": self.timescale, "equation": self.equation,
               "perturbation": self.perturbation, "output": self.output}
        if self.riccati is not None:
            doc["riccati"] = self.riccati
        return json.loads(json.dumps(doc))

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def parse_config(doc):
    doc = _mapping(doc, "<config>")
    _no_extra(doc, ("timescale", "equation", "perturbation", "riccati", "output"), "<config>")
    for key in ("timescale", "equation", "perturbation"):
        if key not in doc:
            raise ConfigError(key, "missing")
    equation = _equation(doc["equation"])
    riccati = None
    if equation["form"] == "ivc":
        if "riccati" not in doc:
            raise ConfigError("riccati", "required for variable coefficients")
        riccati = _riccati(doc["riccati"])
    elif "riccati" in doc:
        raise ConfigError("riccati", "only used with variable coefficients (form 'ivc')")
    return ProblemConfig(
        timescale=_timescale(doc["timescale"]),
        equation=equation,
        perturbation=_perturbation(doc["perturbation"]),
        riccati=riccati,
        output=_output(doc.get("output", {})),
    )


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(str(path), exc.strerror or str(exc)) from None
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from None
    return parse_config(doc)


class Problem(NamedTuple):
    equation: EquationSpec
    y: Optional[GridFunction]
    perturbation: Optional[PerturbationSpec]
    construction: str


def _grid_values(value, ts, key):
    if isinstance(value, str):
        arr = evaluate(value, ts.points)
    elif isinstance(value, list):
        if len(value) != ts.n:
            raise ConfigError(key, f"has {len(value)} values for a {ts.n}-point time scale")
        arr = np.array(value, dtype=float)
    else:
        arr = np.full(ts.n, float(value))
    if not np.all(np.isfinite(arr)):
        raise ConfigError(key, "evaluates to a non-finite value on the time scale")
    return GridFunction(arr, ts)


def build_problem(cfg):
    """Turn a validated config into domain objects (time scale, equation, y)."""
    try:
        ts = make_timescale(cfg.timescale)
    except TempusError as exc:
        raise ConfigError("timescale", str(exc)) from None
    eq = cfg.equation
    form = eq["form"]
    if form != "first" and ts.n < 3:
        raise ConfigError("timescale", "second-order equations need at least 3 points")
    f = _grid_values(eq.get("f", 0.0), ts, "equation.f")
    kwargs = {"initial": tuple(eq["initial"])}
    if form == "first":
        kwargs["d"] = Coefficient(_grid_values(eq["d"], ts, "equation.d"))
    elif form in ("cc", "icc"):
        kwargs["alpha"], kwargs["beta"] = eq["alpha"], eq["beta"]
    else:
        kwargs["p"] = _grid_values(eq["p"], ts, "equation.p")
        kwargs["q"] = _grid_values(eq["q"], ts, "equation.q")
        if "z0" in cfg.riccati:
            kwargs["riccati_seed"] = cfg.riccati["z0"]
        elif "z" in cfg.riccati:
            kwargs["riccati_values"] = _grid_values(cfg.riccati["z"], ts, "riccati.z")
    equation = EquationSpec(ts, form, f, **kwargs)

    pert = cfg.perturbation
    if "y" in pert:
        y = _grid_values(pert["y"], ts, "perturbation.y")
        spec = None
    else:
        y = None
        spec = PerturbationSpec(pert["kind"], pert["magnitude"], pert["seed"],
                                pert["pin_endpoints"])
    return Problem(equation, y, spec, eq.get("construction", "literal"))


def with_timescale_param(cfg, name, value):
    """A copy of ``cfg`` with one time scale family parameter replaced."""
    ts = dict(cfg.timescale)
    if name not in ts or name in ("family", "points", "segments"):
        raise ConfigError("--sweep", f"time scale family {ts['family']!r} has no parameter {name!r}")
    ts[name] = int(value) if name in INT_PARAMS else float(value)
    return ProblemConfig(ts, cfg.equation, cfg.perturbation, cfg.riccati, cfg.output)
