import dataclasses
import json
from typing import Any, Dict, List

from sympy import latex
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational

from ..bpz import LinearODE
from ..category import MatrixMap
from ..fusion import MultiplicityMap
from ..scalars import PuiseuxSeries, RationalFunction, format_gaussian, format_rational
from ..verma import GramMatrix, HWModuleDescriptor, PBWVector, Partition

Rational = QQ.dtype


def word(partition: Partition) -> str:
    """(2, 1) -> "L(-1)L(-2)": the smallest part is the outermost mode."""
    return "".join(f"L(-{part})" for part in reversed(partition))


def scalar(value) -> Any:
    """Rationals as "p/q"; Gaussian rationals always as {"re", "im"}."""
    if isinstance(value, GaussianRational):
        return format_gaussian(value)
    return format_rational(value)


def _label_key(label) -> str:
    if isinstance(label, tuple):
        return ",".join(str(part) for part in label)
    return str(label)


def to_jsonable(value) -> Any:
    """Recursively turn domain values into JSON-ready data with exact string scalars."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (Rational, GaussianRational)):
        return scalar(value)
    if isinstance(value, PBWVector):
        return {
            "vector": str(value),
            "terms": [
                {"partition": list(p), "word": word(p), "coeff": scalar(a)} for p, a in value.terms
            ],
        }
    if isinstance(value, PuiseuxSeries):
        return {
            "leading_exponent": format_rational(value.leading_exponent),
            "order": value.order,
            "coefficients": [scalar(a) for a in value.coefficients],
        }
    if isinstance(value, MultiplicityMap):
        return {_label_key(label): n for label, n in value}
    if isinstance(value, MatrixMap):
        return {
            "source": list(value.source),
            "target": list(value.target),
            "entries": [[scalar(a) for a in row] for row in value.to_lists()],
        }
    if isinstance(value, GramMatrix):
        return {
            "level": value.level,
            "basis": [word(p) for p in value.basis],
            "entries": [[format_rational(a) for a in row] for row in value.to_lists()],
            "determinant": format_rational(value.determinant()),
        }
    if isinstance(value, HWModuleDescriptor):
        data = {"c": format_rational(value.central_charge), "h": format_rational(value.highest_weight)}
        if value.quotient_relation is not None:
            data["quotient_level"] = value.quotient_relation.level
        return data
    if isinstance(value, LinearODE):
        p2, p1, p0 = value.coefficients
        return {"equation": str(value), "p2": str(p2), "p1": str(p1), "p0": str(p0)}
    if isinstance(value, RationalFunction):
        return str(value)
    if dataclasses.is_dataclass(value):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {_label_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return str(value)


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def _text_lines(value, indent: str = "") -> List[str]:
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{indent}{key}:")
                lines.extend(_text_lines(item, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {item}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, dict):
                lines.append(f"{indent}-")
                lines.extend(_text_lines(item, indent + "  "))
            else:
                lines.append(f"{indent}- {item}")
        return lines
    return [f"{indent}{value}"]


def render_text(data: Dict[str, Any]) -> str:
    return "\n".join(_text_lines(data))


def latex_scalar(value) -> str:
    if isinstance(value, GaussianRational):
        return latex(QQ_I.to_sympy(value)) if value.y != 0 else latex_scalar(value.x)
    return latex(QQ.to_sympy(value))


def latex_vector(v: PBWVector) -> str:
    if v.is_zero():
        return "0"
    pieces = []
    for p, a in v.terms:
        modes = "".join(f"L_{{-{part}}}" for part in reversed(p))
        pieces.append(f"{latex_scalar(a)}\\,{modes}v" if modes else f"{latex_scalar(a)}\\,v")
    return " + ".join(pieces).replace("+ -", "- ")


def latex_series(s: PuiseuxSeries) -> str:
    pieces = []
    for n, a in enumerate(s.coefficients):
        if a.x == 0 and a.y == 0:
            continue
        exponent = latex(QQ.to_sympy(s.leading_exponent + n))
        pieces.append(f"{latex_scalar(a)}\\,x^{{{exponent}}}")
    body = " + ".join(pieces).replace("+ -", "- ") if pieces else "0"
    top = latex(QQ.to_sympy(s.leading_exponent + s.order + 1))
    return f"{body} + O(x^{{{top}}})"


def latex_matrix(rows) -> str:
    body = " \\\\ ".join(" & ".join(latex_scalar(a) for a in row) for row in rows)
    return f"\\begin{{pmatrix}} {body} \\end{{pmatrix}}"


def to_latex(value) -> str:
    if isinstance(value, bool):
        return f"\\text{{{str(value).lower()}}}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (Rational, GaussianRational)):
        return latex_scalar(value)
    if isinstance(value, PBWVector):
        return latex_vector(value)
    if isinstance(value, PuiseuxSeries):
        return latex_series(value)
    if isinstance(value, (MatrixMap, GramMatrix)):
        return latex_matrix(value.to_lists())
    if isinstance(value, LinearODE):
        p2, p1, p0 = (latex(f.as_expr()) for f in value.coefficients)
        return f"\\left({p2}\\right)\\varphi'' + \\left({p1}\\right)\\varphi' + \\left({p0}\\right)\\varphi = 0"
    if isinstance(value, MultiplicityMap):
        terms = [f"{n if n != 1 else ''}W_{{{_label_key(label)}}}" for label, n in value]
        return " \\oplus ".join(terms) if terms else "0"
    if dataclasses.is_dataclass(value):
        return render_latex({f.name: getattr(value, f.name) for f in dataclasses.fields(value)})
    if isinstance(value, dict):
        return render_latex(value)
    if isinstance(value, (list, tuple)):
        return ",\\ ".join(to_latex(v) for v in value)
    return f"\\text{{{value}}}"


def render_latex(values: Dict[str, Any]) -> str:
    lines = []
    for key in sorted(values):
        name = str(key).replace("_", "\\_")
        lines.append(f"\\text{{{name}}} &= {to_latex(values[key])} \\\\")
    return "\\begin{align*}\n" + "\n".join(lines) + "\n\\end{align*}"
