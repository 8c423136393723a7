"""Declarative surface-definition files.

A plain-text format for user-defined closed surfaces: parameter
domains, periodicity, the embedding as expression strings, and the
declared topology.  Grammar of the embedding expressions:

    expression := term (('+' | '-') term)*
    term       := factor (('*' | '/') factor)*
    factor     := base ('^' exponent)?          # '**' also accepted
    base       := number | name | function '(' expression ')'
                  | '(' expression ')' | ('+'|'-') base
    function   := sin | cos | sinh | cosh | exp | sqrt
    name       := u | v | pi | <declared parameter>

File layout (keyword lines; '#' starts a comment; one chart block per
boundary patch):

    schema 1
    name my-surface
    components 1
    genera 0                  # one integer per component

    param a 1.0               # optional named constants

    chart                     # optionally: chart <component-index>
      domain u 0 pi
      domain v 0 2*pi
      periodic v
      x a*sin(u)*cos(v)
      y a*sin(u)*sin(v)
      z a*cos(u)
      normal outward          # r_u x r_v points out of the solid
    end

``normal`` declares which way the raw cross product r_u x r_v points
("outward" flips it so the stored normal is inward).  Parse errors
report 1-based line and column.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path

import sympy as sp

from .geometry import SurfaceChart, SurfaceModel, TopologyInfo
from .geometry.charts import ALLOWED_FUNCTIONS

__all__ = ["SurfaceFileError", "load_surface", "loads_surface"]

SCHEMA_VERSION = 1


class SurfaceFileError(ValueError):
    """Parse or validation error, carrying 1-based line/column."""

    def __init__(self, message, line, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_BINOPS = {ast.Add: sp.Add, ast.Sub: None, ast.Mult: sp.Mul,
           ast.Div: None, ast.Pow: None}


def _expr_to_sympy(node, names, line, col0):
    """Convert a vetted python-AST expression to sympy."""

    def fail(msg, n):
        raise SurfaceFileError(msg, line, col0 + getattr(n, "col_offset", 0))

    def conv(n):
        if isinstance(n, ast.Expression):
            return conv(n.body)
        if isinstance(n, ast.Constant):
            if isinstance(n.value, int):
                return sp.Integer(n.value)
            if isinstance(n.value, float):
                return sp.Float(repr(n.value))
            fail(f"unsupported literal {n.value!r}", n)
        if isinstance(n, ast.Name):
            if n.id in names:
                return names[n.id]
            fail(f"unknown name {n.id!r} (declare it with 'param')", n)
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.UAdd, ast.USub)):
            val = conv(n.operand)
            return val if isinstance(n.op, ast.UAdd) else -val
        if isinstance(n, ast.BinOp):
            left, right = conv(n.left), conv(n.right)
            if isinstance(n.op, ast.Add):
                return left + right
            if isinstance(n.op, ast.Sub):
                return left - right
            if isinstance(n.op, ast.Mult):
                return left * right
            if isinstance(n.op, ast.Div):
                return left / right
            if isinstance(n.op, ast.Pow):
                return left ** right
            fail("unsupported operator", n)
        if isinstance(n, ast.Call):
            if not isinstance(n.func, ast.Name):
                fail("only plain function calls are allowed", n)
            fname = n.func.id
            if fname not in ALLOWED_FUNCTIONS:
                fail(f"unknown function {fname!r} (allowed: "
                     f"{', '.join(sorted(ALLOWED_FUNCTIONS))})", n)
            if len(n.args) != 1 or n.keywords:
                fail(f"{fname} takes exactly one argument", n)
            return ALLOWED_FUNCTIONS[fname](conv(n.args[0]))
        fail(f"unsupported syntax ({type(n).__name__})", n)

    return conv(node)


def _parse_expression(text, names, line, col0):
    """Parse one expression string at (line, col0) into sympy."""
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as err:
        col = col0 + (err.offset or 1) - 1
        raise SurfaceFileError(f"syntax error in expression: {err.msg}",
                               line, col) from None
    return _expr_to_sympy(tree, names, line, col0)


@dataclass
class _ChartBlock:
    line: int
    component: int = 1
    domain: dict = None
    periodic: set = None
    xyz: dict = None
    normal: str = "inward"

    def __post_init__(self):
        self.domain = {}
        self.periodic = set()
        self.xyz = {}


def _tokenise(text):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        yield i, line


def loads_surface(text, name="surface") -> SurfaceModel:
    """Parse a surface definition from a string."""
    meta = {"schema": None, "name": name, "components": None, "genera": None}
    params = {}
    charts = []
    block = None

    for lineno, line in _tokenise(text):
        indent = len(line) - len(line.lstrip())
        parts = line.split()
        key = parts[0]
        col0 = indent + 1

        if block is not None:
            if key == "end":
                charts.append(block)
                block = None
                continue
            _chart_line(block, key, parts, line, lineno, params)
            continue

        if key == "schema":
            meta["schema"] = _int_field(parts, line, lineno, "schema")
        elif key == "name":
            if len(parts) < 2:
                raise SurfaceFileError("name needs a value", lineno, col0)
            meta["name"] = " ".join(parts[1:])
        elif key == "components":
            meta["components"] = _int_field(parts, line, lineno, "components")
        elif key == "genera":
            try:
                meta["genera"] = tuple(int(p) for p in parts[1:])
            except ValueError:
                raise SurfaceFileError("genera must be integers", lineno,
                                       line.find(parts[1]) + 1) from None
            if not meta["genera"]:
                raise SurfaceFileError("genera needs at least one integer",
                                       lineno, col0)
        elif key == "param":
            if len(parts) != 3:
                raise SurfaceFileError("expected: param <name> <expression>",
                                       lineno, col0)
            names = {"pi": sp.pi, **params}
            params[parts[1]] = _parse_expression(
                parts[2], names, lineno, line.find(parts[2]) + 1)
        elif key == "chart":
            block = _ChartBlock(line=lineno)
            if len(parts) == 2:
                try:
                    block.component = int(parts[1])
                except ValueError:
                    raise SurfaceFileError(
                        "chart component must be an integer", lineno,
                        line.find(parts[1]) + 1) from None
        else:
            raise SurfaceFileError(f"unknown directive {key!r}", lineno, col0)

    if block is not None:
        raise SurfaceFileError("chart block not closed with 'end'",
                               block.line, 1)
    if meta["schema"] != SCHEMA_VERSION:
        raise SurfaceFileError(
            f"missing or unsupported 'schema' (expected {SCHEMA_VERSION})", 1)
    if meta["components"] is None or meta["genera"] is None:
        raise SurfaceFileError("both 'components' and 'genera' are required", 1)
    if not charts:
        raise SurfaceFileError("no chart blocks found", 1)

    topology = TopologyInfo(meta["components"], meta["genera"])
    built = []
    comp_idx = []
    for k, blk in enumerate(charts):
        built.append(_build_chart(blk, params, f"{meta['name']}[{k}]"))
        comp_idx.append(blk.component)
    return SurfaceModel(
        name=meta["name"],
        charts=tuple(built),
        chart_components=tuple(comp_idx),
        topology=topology,
    )


def _int_field(parts, line, lineno, what):
    if len(parts) != 2:
        raise SurfaceFileError(f"expected: {what} <integer>", lineno, 1)
    try:
        return int(parts[1])
    except ValueError:
        raise SurfaceFileError(f"{what} must be an integer", lineno,
                               line.find(parts[1]) + 1) from None


def _chart_line(block, key, parts, line, lineno, params):
    col0 = line.find(key) + 1
    names = {"pi": sp.pi, **params}
    if key == "domain":
        if len(parts) != 4 or parts[1] not in ("u", "v"):
            raise SurfaceFileError(
                "expected: domain u|v <lo> <hi>", lineno, col0)
        lo = _parse_expression(parts[2], names, lineno, line.find(parts[2]) + 1)
        hi = _parse_expression(parts[3], names, lineno,
                               line.rfind(parts[3]) + 1)
        if not (lo.is_number and hi.is_number):
            raise SurfaceFileError("domain bounds must be numeric", lineno, col0)
        if float(lo) >= float(hi):
            raise SurfaceFileError("domain lower bound must be < upper",
                                   lineno, col0)
        block.domain[parts[1]] = (float(lo), float(hi))
    elif key == "periodic":
        if len(parts) != 2 or parts[1] not in ("u", "v"):
            raise SurfaceFileError("expected: periodic u|v", lineno, col0)
        block.periodic.add(parts[1])
    elif key in ("x", "y", "z"):
        expr_text = line.split(None, 1)[1] if len(parts) > 1 else ""
        if not expr_text:
            raise SurfaceFileError(f"{key} needs an expression", lineno, col0)
        u, v = sp.symbols("u v", real=True)
        names.update({"u": u, "v": v})
        block.xyz[key] = _parse_expression(
            expr_text, names, lineno, line.find(expr_text) + 1)
    elif key == "normal":
        if len(parts) != 2 or parts[1] not in ("inward", "outward"):
            raise SurfaceFileError("expected: normal inward|outward",
                                   lineno, col0)
        block.normal = parts[1]
    else:
        raise SurfaceFileError(f"unknown chart directive {key!r}",
                               lineno, col0)


def _build_chart(block, params, name):
    for axis in ("u", "v"):
        if axis not in block.domain:
            raise SurfaceFileError(f"chart is missing 'domain {axis}'",
                                   block.line)
    for comp in ("x", "y", "z"):
        if comp not in block.xyz:
            raise SurfaceFileError(f"chart is missing '{comp}'", block.line)
    return SurfaceChart.from_expressions(
        block.xyz["x"], block.xyz["y"], block.xyz["z"],
        u_range=block.domain["u"], v_range=block.domain["v"],
        periodic_u="u" in block.periodic,
        periodic_v="v" in block.periodic,
        normal_sign=1 if block.normal == "inward" else -1,
        name=name,
    )


def load_surface(path) -> SurfaceModel:
    """Parse a surface definition file."""
    path = Path(path)
    return loads_surface(path.read_text(), name=path.stem)
