"""Scenario configuration and the figure presets used by the command line.

Document format
---------------
Flat ``key = value`` lines with ``#`` comments, or a JSON object when the
document starts with ``{``. Keys:

* coefficients: either ``class`` plus that class's parameters (see
  :mod:`gaussevo.catalog`), or raw ``gamma``, ``theta0``, ``eta0`` and
  optionally ``theta1``, ``theta2``, ``eta1``, ``eta2`` (default 0);
* initial state: ``mu0``, ``kappa0``, ``nu0``, or the shorthand ``b0``
  (4 mu0 = 1/b0, mu0 + nu0 = b0) with ``kappa0`` defaulting to 1;
* time grid: ``t_max`` (default 20) and ``samples`` (default 201);
* ``validation``: ``physical`` (default) or ``raw``; ``name``: free text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

from .algebra import MasterEqCoefficients
from .catalog import EquationClass, canonical, class_parameters
from .errors import ConfigError, DomainViolation
from .evolution import GaussianParams

COEFF_KEYS = ("gamma", "theta0", "theta1", "theta2", "eta0", "eta1", "eta2")
CLASS_KEYS = {"gamma", "omega0", "theta0", "b", "theta1", "theta2", "eta1", "eta2"}
INIT_KEYS = ("mu0", "kappa0", "nu0", "b0")
OTHER_KEYS = ("class", "t_max", "samples", "validation", "name")
ALL_KEYS = set(COEFF_KEYS) | CLASS_KEYS | set(INIT_KEYS) | set(OTHER_KEYS)
REQUIRED_HELP = (
    "required keys: coefficients (class + class parameters, or gamma, theta0, eta0 "
    "[theta1, theta2, eta1, eta2]) and initial state (mu0, kappa0, nu0, or b0)"
)


@dataclass(frozen=True)
class ScenarioConfig:
    coefficients: MasterEqCoefficients
    init: GaussianParams
    t_max: float = 20.0
    samples: int = 201
    validation: str = "physical"
    eq_class: EquationClass | None = None
    class_params: Mapping[str, float] = field(default_factory=dict)
    name: str = ""

    def with_param(self, key: str, value: float, strict: bool = True) -> "ScenarioConfig":
        """Change one class parameter (re-expanding the class) or raw coefficient.

        ``strict=False`` relaxes the |theta1| < theta0 domain check of the class expansion.
        """
        if self.eq_class is not None and key in {"gamma", "omega0", "theta0", "b", *class_parameters(self.eq_class)}:
            params = dict(self.class_params)
            if key in ("omega0", "theta0"):
                params.pop("omega0", None)
                params.pop("theta0", None)
            params[key] = value
            return replace(self, coefficients=canonical(self.eq_class, params, strict), class_params=params)
        if key in COEFF_KEYS:
            return replace(self, coefficients=self.coefficients.replace(**{key: value}))
        raise ConfigError(f"cannot scan {key!r}: not a coefficient or class parameter")


def _number(key: str, raw: Any, where: str) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: key {key!r} expects a number, got {raw!r}") from None


def _parse_lines(text: str) -> dict[str, tuple[str, str]]:
    out: dict[str, tuple[str, str]] = {}
    for n, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {n}: expected key = value, got {line.strip()!r}")
        key, value = (x.strip() for x in body.split("=", 1))
        if key in out:
            raise ConfigError(f"line {n}: duplicate key {key!r}")
        out[key] = (value, f"line {n}")
    return out


def parse_config(text: str, validation: str | None = None) -> ScenarioConfig:
    """Parse and validate a scenario document; ``validation`` overrides the document's mode."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError("JSON document must be an object")
        entries = {k: (v, f"key {k!r}") for k, v in data.items()}
    else:
        entries = _parse_lines(text)
    if not entries:
        raise ConfigError("empty configuration; " + REQUIRED_HELP)
    values = {k: v for k, (v, _) in entries.items()}
    if validation is not None:
        values["validation"] = validation
    return build_config(values, {k: w for k, (_, w) in entries.items()})


def build_config(values: Mapping[str, Any], where: Mapping[str, str] | None = None) -> ScenarioConfig:
    """Validate a key/value mapping into a :class:`ScenarioConfig`."""
    where = dict(where or {})
    loc = lambda k: where.get(k, f"key {k!r}")  # noqa: E731
    unknown = sorted(set(values) - ALL_KEYS)
    if unknown:
        raise ConfigError(f"{loc(unknown[0])}: unknown key(s) {unknown}")

    eq_class = None
    class_params: dict[str, float] = {}
    if "class" in values:
        try:
            eq_class = EquationClass(str(values["class"]))
        except ValueError:
            names = ", ".join(c.value for c in EquationClass)
            raise ConfigError(f"{loc('class')}: unknown class {values['class']!r} (expected one of {names})") from None
        if "eta0" in values:
            raise ConfigError(f"{loc('eta0')}: eta0 is fixed by b for class shorthands")
        class_params = {k: _number(k, values[k], loc(k)) for k in CLASS_KEYS if k in values}
        try:
            coeffs = canonical(eq_class, class_params)
        except DomainViolation as exc:
            raise ConfigError(f"class {eq_class.value}: {exc}") from None
    else:
        stray = sorted(k for k in ("omega0", "b") if k in values)
        if stray:
            raise ConfigError(f"{loc(stray[0])}: {stray} only valid together with 'class'")
        missing = [k for k in ("gamma", "theta0", "eta0") if k not in values]
        if missing:
            raise ConfigError(f"missing key(s) {missing}; " + REQUIRED_HELP)
        nums = {k: _number(k, values[k], loc(k)) if k in values else 0.0 for k in COEFF_KEYS}
        coeffs = MasterEqCoefficients.from_values(**nums)

    if "b0" in values:
        clash = [k for k in ("mu0", "nu0") if k in values]
        if clash:
            raise ConfigError(f"{loc(clash[0])}: b0 shorthand excludes {clash}")
        b0 = _number("b0", values["b0"], loc("b0"))
        if not b0 > 0:
            raise ConfigError(f"{loc('b0')}: b0 must be positive")
        kappa0 = _number("kappa0", values.get("kappa0", 1.0), loc("kappa0"))
        init = GaussianParams.from_b0(b0, kappa0)
    else:
        missing = [k for k in ("mu0", "kappa0", "nu0") if k not in values]
        if missing:
            raise ConfigError(f"missing key(s) {missing}; " + REQUIRED_HELP)
        init = GaussianParams(*(_number(k, values[k], loc(k)) for k in ("mu0", "kappa0", "nu0")))
    if not init.mu > 0:
        raise ConfigError("initial mu0 must be positive")

    t_max = _number("t_max", values.get("t_max", 20.0), loc("t_max"))
    if not t_max > 0:
        raise ConfigError(f"{loc('t_max')}: t_max must be positive")
    samples_f = _number("samples", values.get("samples", 201), loc("samples"))
    if samples_f != int(samples_f) or samples_f < 2:
        raise ConfigError(f"{loc('samples')}: samples must be an integer >= 2")
    validation = str(values.get("validation", "physical"))
    if validation not in ("physical", "raw"):
        raise ConfigError(f"{loc('validation')}: expected 'physical' or 'raw'")
    try:
        coeffs.validate(validation)  # type: ignore[arg-type]
    except DomainViolation as exc:
        raise ConfigError(str(exc)) from None
    return ScenarioConfig(
        coefficients=coeffs,
        init=init,
        t_max=t_max,
        samples=int(samples_f),
        validation=validation,
        eq_class=eq_class,
        class_params=class_params,
        name=str(values.get("name", "")),
    )


# Figure presets: gamma = 1, theta0 = 2 throughout.
_FIG1_INIT = {"mu0": 1.0, "kappa0": 1.0, "nu0": 1.0}
_FIG23_INIT = {"b0": 0.6, "kappa0": 1.0}


def _curve(cls: str, init: Mapping[str, float], **params: float) -> dict[str, Any]:
    return {"class": cls, "gamma": 1.0, "theta0": 2.0, **params, **init}


FIGURES: dict[str, list[tuple[str, str, dict[str, Any]]]] = {
    "fig1-left": [
        ("dotted", "theta1=0.5_eta2=1", _curve("HPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=1.0)),
        ("solid", "theta1=0.5_eta2=0", _curve("HPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=0.0)),
        ("long-dashed", "theta1=0.5_eta2=-1", _curve("HPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=-1.0)),
        ("dot-dashed", "theta1=0.5_eta2=-1.5", _curve("HPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=-1.5)),
        ("short-dashed", "theta1=-0.5_eta2=-1.5", _curve("HPZ", _FIG1_INIT, b=1.0, theta1=-0.5, eta2=-1.5)),
    ],
    "fig1-right": [
        ("dotted", "theta1=0.5_eta2=-3", _curve("ConjugateHPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=-3.0)),
        ("dot-dashed", "theta1=0.5_eta2=-2", _curve("ConjugateHPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=-2.0)),
        ("solid", "theta1=0.5_eta2=3", _curve("ConjugateHPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=3.0)),
        ("long-dashed", "theta1=0.5_eta2=7", _curve("ConjugateHPZ", _FIG1_INIT, b=1.0, theta1=0.5, eta2=7.0)),
        ("short-dashed", "theta1=-0.5_eta2=7", _curve("ConjugateHPZ", _FIG1_INIT, b=1.0, theta1=-0.5, eta2=7.0)),
    ],
    "fig2-left": [
        ("solid", "CL_theta1=0.2_b=2", _curve("CL", _FIG23_INIT, b=2.0, theta1=0.2)),
        ("dotted", "CL_theta1=0.2_b=0.6", _curve("CL", _FIG23_INIT, b=0.6, theta1=0.2)),
        ("dot-dashed", "CL_theta1=-0.2_b=0.6", _curve("CL", _FIG23_INIT, b=0.6, theta1=-0.2)),
        ("long-dashed", "cCL_theta1=0.2_b=0.6", _curve("ConjugateCL", _FIG23_INIT, b=0.6, theta1=0.2)),
        ("short-dashed", "cCL_theta1=-0.2_b=0.6", _curve("ConjugateCL", _FIG23_INIT, b=0.6, theta1=-0.2)),
    ],
    "fig2-right": [
        (style, f"theta2={t2:g}", _curve("GeneralizedCL", _FIG23_INIT, b=0.6, theta2=t2))
        for style, t2 in (
            ("dotted", -1.0),
            ("dot-dashed", -0.86),
            ("long-dashed", -0.553),
            ("solid", 0.0),
            ("short-dashed", 1.0),
        )
    ],
    "fig3-left": [
        (style, f"theta1={t1:g}", _curve("GeneralizedKL1", _FIG23_INIT, b=0.6, theta1=t1))
        for style, t1 in (
            ("dotted", -1.106),
            ("dot-dashed", -0.5),
            ("solid", 0.0),
            ("long-dashed", 0.5),
            ("short-dashed", 1.106),
        )
    ],
    "fig3-right": [
        (style, f"theta1={t1:g}", _curve("GeneralizedKL2", _FIG23_INIT, b=0.6, theta1=t1))
        for style, t1 in (
            ("dotted", -1.8),
            ("dot-dashed", -1.0),
            ("solid", 0.0),
            ("long-dashed", 1.0),
            ("short-dashed", 1.8),
        )
    ],
}


def preset_names() -> list[str]:
    """Single-curve presets, named ``<figure>-<line style>``."""
    return [f"{fig}-{style}" for fig, curves in FIGURES.items() for style, _, _ in curves]


def preset_config(name: str, **overrides: Any) -> ScenarioConfig:
    """Scenario for one figure curve, e.g. ``fig1-left-solid``."""
    for fig, curves in FIGURES.items():
        for style, tag, values in curves:
            if name == f"{fig}-{style}":
                return build_config({**values, "name": f"{fig}_{tag}", **overrides})
    raise ConfigError(f"unknown preset {name!r}; known: {', '.join(preset_names())}")


def figure_configs(figure: str, **overrides: Any) -> list[tuple[str, ScenarioConfig]]:
    """(file tag, config) for every curve of a figure preset."""
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure preset {figure!r}; known: {', '.join(FIGURES)}")
    return [
        (f"{figure}_{tag}", build_config({**values, "name": f"{figure}_{tag}", **overrides}))
        for _, tag, values in FIGURES[figure]
    ]
