import json

import numpy as np
import pytest

from tempus.config import build_problem, load_config, parse_config, with_timescale_param
from tempus.errors import ConfigError
from tempus.expr import ExpressionError, evaluate, parse_expression

T = np.array([0.0, 0.5, 1.0, 2.0])


@pytest.mark.parametrize("text, expected", [
    ("3", [3, 3, 3, 3]),
    ("t", T),
    ("1 + 2*t", 1 + 2 * T),
    ("2*t^2", 2 * T ** 2),       # ^ binds tighter than *
    ("-t^2", -(T ** 2)),
    ("(1 + t)^-1", 1 / (1 + T)),
    ("t^0", [1, 1, 1, 1]),
    ("(t - 1)/(t + 1)", (T - 1) / (T + 1)),
    ("1e-3 * t", 1e-3 * T),
])
def test_grammar(text, expected):
    np.testing.assert_allclose(evaluate(text, T), expected, rtol=1e-15)


@pytest.mark.parametrize("text", [
    "t**2", "t^0.5", "t^t", "sin(t)", "x", "t % 2", "__import__('os')", "t +", "[t]", "'a'",
    "True", "t if t else 1"])
def test_grammar_rejects(text):
    with pytest.raises(ExpressionError):
        parse_expression(text)


def test_division_by_zero_is_nonfinite():
    assert not np.isfinite(evaluate("1/t", T)[0])


def base_config(**over):
    doc = {
        "timescale": {"family": "uniform", "a": 0, "b": 10, "h": 1},
        "equation": {"form": "cc", "alpha": -3, "beta": 2},
        "perturbation": {"kind": "residual-targeted", "magnitude": 0.01, "seed": 5},
    }
    doc.update(over)
    return doc


IVC = {"form": "ivc", "p": "-3 + t/10", "q": 2, "f": "1/(1 + t)"}


@pytest.mark.parametrize("doc, key", [
    (base_config(timescale={"family": "uniform", "a": 0, "b": 1}), "timescale.h"),
    (base_config(timescale={"family": "cone"}), "timescale.family"),
    (base_config(timescale={"family": "q_scale", "t0": 1, "q": 2, "n": 2.5}), "timescale.n"),
    (base_config(equation={"form": "cc", "alpha": -3}), "equation.beta"),
    (base_config(equation={"form": "cc", "alpha": "x", "beta": 2}), "equation.alpha"),
    (base_config(equation={"form": "cc", "alpha": -3, "beta": 2, "f": 1}), "equation.f"),
    (base_config(equation={"form": "fourth"}), "equation.form"),
    (base_config(equation={"form": "first", "d": "t**2"}), "equation.d"),
    (base_config(equation={"form": "icc", "alpha": -3, "beta": 2, "initial": [1]}), "equation.initial"),
    (base_config(equation=IVC), "riccati"),
    (base_config(riccati={}), "riccati"),
    (base_config(equation=IVC, riccati={"z0": -1, "z": -1}), "riccati"),
    (base_config(perturbation={"kind": "single-spike", "magnitude": 0.1, "y": [1]}), "perturbation"),
    (base_config(perturbation={}), "perturbation"),
    (base_config(perturbation={"kind": "spike", "magnitude": 0.1}), "perturbation.kind"),
    (base_config(perturbation={"kind": "single-spike", "magnitude": -1}), "perturbation.magnitude"),
    (base_config(perturbation={"kind": "single-spike", "magnitude": 1, "seed": 1.5}), "perturbation.seed"),
    (base_config(output={"format": "xml"}), "output.format"),
    (base_config(extra=1), "<config>.extra"),
])
def test_config_errors_name_key(doc, key):
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert info.value.key == key
    assert key in str(info.value)


def test_build_errors_name_key():
    cfg = parse_config(base_config(perturbation={"y": [1, 2, 3]}))
    with pytest.raises(ConfigError) as info:
        build_problem(cfg)
    assert info.value.key == "perturbation.y"
    cfg = parse_config(base_config(equation={"form": "first", "d": "1/t"}))
    with pytest.raises(ConfigError, match="equation.d"):
        build_problem(cfg)


@pytest.mark.parametrize("doc", [
    base_config(),
    base_config(equation=IVC, riccati={"z0": -1.0}, output={"format": "json", "dir": "out"}),
    base_config(equation=IVC, riccati={"z": [-1.0] * 11}),
    base_config(timescale={"family": "mixed", "segments": [
        {"family": "uniform", "a": 0, "b": 1, "h": 0.25},
        {"family": "q_scale", "t0": 2, "q": 1.5, "n": 6}]},
        equation={"form": "first", "d": "-1/(1 + t)", "f": [0.0] * 11, "initial": [2]}),
    base_config(perturbation={"y": [1.0] * 11}),
])
def test_dump_config_round_trip(doc):
    cfg = parse_config(doc)
    again = parse_config(json.loads(cfg.dumps()))
    assert again == cfg and again.dumps() == cfg.dumps()


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(bad)


def test_build_problem_ivc_expression_coefficients():
    cfg = parse_config(base_config(equation=IVC, riccati={}))
    prob = build_problem(cfg)
    eq = prob.equation
    np.testing.assert_allclose(eq.p.values, -3 + eq.timescale.points / 10)
    np.testing.assert_allclose(eq.f.values, 1 / (1 + eq.timescale.points))
    assert prob.y is None and prob.perturbation.seed == 5


def test_with_timescale_param():
    cfg = parse_config(base_config())
    assert build_problem(with_timescale_param(cfg, "h", 0.5)).equation.timescale.n == 21
    with pytest.raises(ConfigError, match="--sweep"):
        with_timescale_param(cfg, "q", 2)
