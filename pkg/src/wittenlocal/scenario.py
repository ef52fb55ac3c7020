"""Scenario files: one flat text document describing a complete run.

Format is TOML with sections ``[model]``, ``[amplitude]``, ``[sigma]``,
``[oracle]`` plus top-level ``M`` and ``zeta_values``.  Rational numbers
(monomial coefficients, transform polynomial coefficients) are written as
strings like ``"3/4"`` so that round-tripping is exact.  The serializer is
hand-written against the same schema; parse -> serialize -> parse is the
identity on every field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .amplitude import AmplitudeSpec
from .model import LocalModel
from .oracle import OracleConfig
from .polynomials import RatPoly
from .schwartz import SchwartzSpec

__all__ = ["Scenario", "ScenarioError", "parse_scenario", "serialize_scenario",
           "load_scenario"]


class ScenarioError(ValueError):
    """A scenario document is malformed or inconsistent."""


@dataclass(frozen=True)
class Scenario:
    """Everything a verification run needs, in one document."""

    model: LocalModel
    amplitude: AmplitudeSpec
    sigma: SchwartzSpec
    zeta_values: tuple[float, ...]
    M: int
    oracle: OracleConfig

    def __post_init__(self):
        if self.M < 0:
            raise ScenarioError("M must be nonnegative")
        object.__setattr__(self, "zeta_values",
                           tuple(float(z) for z in self.zeta_values))
        if self.amplitude.dim_plus != self.model.n_plus \
                or self.amplitude.dim_minus != self.model.n_minus:
            raise ScenarioError("amplitude block dimensions must match the model")


def _need(table: dict, key: str, where: str) -> Any:
    if key not in table:
        raise ScenarioError(f"missing key '{key}' in [{where}]" if where else
                            f"missing top-level key '{key}'")
    return table[key]


def _fraction(value: Any, where: str) -> Fraction:
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, int):
            return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"bad rational '{value}' in {where}: {exc}") from exc
    raise ScenarioError(f"rational in {where} must be a string or integer, "
                        f"got {type(value).__name__}")


def parse_scenario(text: str) -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"scenario is not valid TOML: {exc}") from exc

    model_tbl = _need(doc, "model", "")
    model = LocalModel(tuple(int(w) for w in _need(model_tbl, "weights", "model")),
                       float(model_tbl.get("J_F", 0.0)))

    amp_tbl = _need(doc, "amplitude", "")
    dim_plus = int(_need(amp_tbl, "dim_plus", "amplitude"))
    dim_minus = int(_need(amp_tbl, "dim_minus", "amplitude"))
    dim = dim_plus + dim_minus
    monomials = _need(amp_tbl, "monomials", "amplitude")
    poly = RatPoly(dim)
    for idx, mono in enumerate(monomials):
        where = f"[amplitude] monomial #{idx}"
        expo = tuple(int(e) for e in _need(mono, "exponents", where))
        if len(expo) != dim:
            raise ScenarioError(f"{where}: exponent tuple must have length {dim}")
        poly = poly + RatPoly.monomial(dim, expo, _fraction(_need(mono, "coeff", where), where))
    amplitude = AmplitudeSpec(dim_plus, dim_minus, poly,
                              r0=float(amp_tbl.get("r0", 2.0)),
                              r1=float(amp_tbl.get("r1", 3.0)))

    sigma_tbl = _need(doc, "sigma", "")
    sigma = SchwartzSpec(tuple(_fraction(c, "[sigma] poly") for c in _need(sigma_tbl, "poly", "sigma")),
                         float(_need(sigma_tbl, "tau", "sigma")))

    oracle_tbl = doc.get("oracle", {})
    oracle_kwargs: dict[str, Any] = {}
    if "epsilon_grid" in oracle_tbl:
        oracle_kwargs["epsilon_grid"] = tuple(float(e) for e in oracle_tbl["epsilon_grid"])
    for key in ("quadrature_tol", "truncation_radius"):
        if key in oracle_tbl:
            oracle_kwargs[key] = float(oracle_tbl[key])
    if "method" in oracle_tbl:
        oracle_kwargs["method"] = str(oracle_tbl["method"])
    try:
        oracle = OracleConfig(**oracle_kwargs)
    except ValueError as exc:
        raise ScenarioError(f"bad [oracle] section: {exc}") from exc

    try:
        return Scenario(model=model, amplitude=amplitude, sigma=sigma,
                        zeta_values=tuple(float(z) for z in _need(doc, "zeta_values", "")),
                        M=int(_need(doc, "M", "")), oracle=oracle)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _toml_float(x: float) -> str:
    out = repr(float(x))
    return out if ("." in out or "e" in out or "inf" in out) else out + ".0"


def _toml_list(items) -> str:
    return "[" + ", ".join(items) + "]"


def serialize_scenario(sc: Scenario) -> str:
    lines: list[str] = []
    lines.append(f"M = {sc.M}")
    lines.append("zeta_values = " + _toml_list(_toml_float(z) for z in sc.zeta_values))
    lines.append("")
    lines.append("[model]")
    lines.append("weights = " + _toml_list(str(w) for w in sc.model.weights))
    lines.append(f"J_F = {_toml_float(sc.model.J_F)}")
    lines.append("")
    lines.append("[amplitude]")
    lines.append(f"dim_plus = {sc.amplitude.dim_plus}")
    lines.append(f"dim_minus = {sc.amplitude.dim_minus}")
    lines.append(f"r0 = {_toml_float(sc.amplitude.r0)}")
    lines.append(f"r1 = {_toml_float(sc.amplitude.r1)}")
    lines.append("monomials = [")
    for expo in sorted(sc.amplitude.poly.coeffs):
        coeff = sc.amplitude.poly.coeffs[expo]
        expo_txt = _toml_list(str(e) for e in expo)
        lines.append(f'    {{ coeff = "{coeff}", exponents = {expo_txt} }},')
    lines.append("]")
    lines.append("")
    lines.append("[sigma]")
    lines.append("poly = " + _toml_list(f'"{c}"' for c in sc.sigma.poly))
    lines.append(f"tau = {_toml_float(sc.sigma.tau)}")
    lines.append("")
    lines.append("[oracle]")
    lines.append("epsilon_grid = " + _toml_list(_toml_float(e) for e in sc.oracle.epsilon_grid))
    lines.append(f"quadrature_tol = {_toml_float(sc.oracle.quadrature_tol)}")
    lines.append(f"truncation_radius = {_toml_float(sc.oracle.truncation_radius)}")
    lines.append(f'method = "{sc.oracle.method}"')
    lines.append("")
    return "\n".join(lines)
