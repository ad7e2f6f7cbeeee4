"""Text grammar for exact elements and module expressions.

Rationals are always "p" or "p/q", never floats.  Element syntax:

* polynomial elements:   ``t^2 - 3t + 1/2``
* Laurent elements:      ``2 x^3 + 1/2 x^-1 - x^0``  (a bare rational means x^0)
* carrier elements:      ``1/2 v[0] - v[1]``         (``v[0,1]`` for pair keys)
* tensor elements:       ``v[0] (x) t^2 + 1/2 v[1] (x) 1``; the inner part
  may be parenthesized and must be when it is itself a sum.

Module expressions: ``Omega(lam,beta)``, ``A(alpha,beta)``,
``Mgamma(gamma[,r])``, ``shiftB1``, ``broken_fixture``, ``mixed_fixture``,
``adjoint(r)``, ``tensor(br,br)``, ``F(br,inner)``, or a name defined in a
workbench file.  Everything printed by the formatters below reparses to an
equal value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .avmod import AModule, OmegaModule
from .bralg import (
    BrModuleDesc,
    FiniteDim,
    MatrixOp,
    OpCompose,
    OpSum,
    PolyCarrier,
    PolyMult,
    ScalarMult,
    TensorCarrier,
    TensorOp,
    UnitShift,
    ZeroOp,
    adjoint_module,
    make_broken_fixture,
    make_m_gamma,
    make_mixed_fixture,
    make_shift_module_b1,
    tensor_br,
    validate_br_module,
)
from .exact import Poly, Vec, rat
from .fmod import FModule


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rationals


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ParseError(f"not an exact rational: {s!r}")
    return Fraction(s)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


# ---------------------------------------------------------------------------
# term splitting


def _split_terms(s: str) -> list[str]:
    """Split a sum at top-level signs; returns signed term strings."""
    terms = []
    depth = 0
    cur = ""
    prev = ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {s!r}")
        if ch in "+-" and depth == 0 and (prev.isalnum() or prev in ")]"):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if depth:
        raise ParseError(f"unbalanced brackets in {s!r}")
    terms.append(cur)
    terms = [t.strip() for t in terms if t.strip()]
    if not terms:
        raise ParseError(f"empty element in {s!r}")
    return terms


def _split_args(s: str) -> list[str]:
    args = []
    depth = 0
    cur = ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            args.append(cur)
            cur = ""
        else:
            cur += ch
    args.append(cur)
    return [a.strip() for a in args]


_COEFF = r"(?P<sign>[+-])?\s*(?P<num>\d+(?:/\d+)?)?"


def _term_coeff(sign: str | None, num: str | None) -> Fraction:
    c = Fraction(num) if num else Fraction(1)
    return -c if sign == "-" else c


# ---------------------------------------------------------------------------
# polynomial elements


_POLY_TERM = re.compile(
    _COEFF + r"\s*\*?\s*(?P<var>[a-z])?(?:\^(?P<pow>\d+))?\s*$"
)


def parse_poly(s: str, var: str = "t") -> Poly:
    s = s.strip()
    if s == "0":
        return Poly()
    out = Poly()
    for term in _split_terms(s):
        m = _POLY_TERM.fullmatch(term)
        if not m or (m.group("var") and m.group("var") != var):
            raise ParseError(f"bad polynomial term {term!r} (variable {var})")
        if not m.group("num") and not m.group("var"):
            raise ParseError(f"bad polynomial term {term!r}")
        if m.group("pow") and not m.group("var"):
            raise ParseError(f"exponent without variable in {term!r}")
        c = _term_coeff(m.group("sign"), m.group("num"))
        k = 0
        if m.group("var"):
            k = int(m.group("pow")) if m.group("pow") else 1
        out = out + Poly.monomial(k, c)
    return out


def format_poly(f: Poly, var: str = "t") -> str:
    if not f:
        return "0"
    parts = []
    for k in range(f.degree, -1, -1):
        c = f.coeff(k)
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if k == 0:
            body = format_rational(c)
        else:
            head = "" if c == 1 else format_rational(c)
            body = f"{head}{var}" if k == 1 else f"{head}{var}^{k}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# Laurent elements


_LAURENT_TERM = re.compile(_COEFF + r"\s*\*?\s*(?:x(?:\^(?P<pow>-?\d+))?)?\s*$")


def parse_laurent(s: str) -> Vec:
    s = s.strip()
    if s == "0":
        return Vec()
    entries = []
    for term in _split_terms(s):
        m = _LAURENT_TERM.fullmatch(term)
        if not m:
            raise ParseError(f"bad Laurent term {term!r}")
        has_x = "x" in term
        if not m.group("num") and not has_x:
            raise ParseError(f"bad Laurent term {term!r}")
        c = _term_coeff(m.group("sign"), m.group("num"))
        n = 0
        if has_x:
            n = int(m.group("pow")) if m.group("pow") else 1
        entries.append((n, c))
    return Vec(entries)


def format_laurent(v: Vec) -> str:
    if not v:
        return "0"
    parts = []
    for n, c in v.items():
        sign = "-" if c < 0 else "+"
        c = abs(c)
        head = "" if c == 1 else format_rational(c) + " "
        parts.append((sign, f"{head}x^{n}"))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# carrier keys and carrier elements


def _format_key(key) -> str:
    if isinstance(key, tuple):
        return "(" + ",".join(_format_key(k) for k in key) + ")"
    return str(key)


def format_carrier_key(key) -> str:
    """Key as written inside v[...]: outermost tuple loses its parens."""
    if isinstance(key, tuple):
        return ",".join(_format_key(k) for k in key)
    return str(key)


def parse_carrier_key(s: str):
    s = s.strip()
    parts = _split_args(s)
    if len(parts) > 1:
        return tuple(parse_carrier_key(p) for p in parts)
    if s.startswith("(") and s.endswith(")"):
        inner = _split_args(s[1:-1])
        return tuple(parse_carrier_key(p) for p in inner)
    if not re.fullmatch(r"-?\d+", s):
        raise ParseError(f"bad carrier key {s!r}")
    return int(s)


_BR_TERM = re.compile(_COEFF + r"\s*\*?\s*(?:v\[(?P<key>[^\]]*)\])?\s*$")


def parse_br_vec(s: str) -> Vec:
    s = s.strip()
    if s == "0":
        return Vec()
    entries = []
    for term in _split_terms(s):
        m = _BR_TERM.fullmatch(term)
        if not m or m.group("key") is None:
            raise ParseError(f"bad carrier term {term!r}")
        c = _term_coeff(m.group("sign"), m.group("num"))
        entries.append((parse_carrier_key(m.group("key")), c))
    return Vec(entries)


def format_br_vec(v: Vec) -> str:
    if not v:
        return "0"
    parts = []
    for key, c in v.items():
        sign = "-" if c < 0 else "+"
        c = abs(c)
        head = "" if c == 1 else format_rational(c) + " "
        parts.append((sign, f"{head}v[{format_carrier_key(key)}]"))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# tensor elements


def parse_f_element(s: str, module: FModule) -> Vec:
    s = s.strip()
    if s == "0":
        return Vec()
    out = Vec()
    for term in _split_terms(s):
        if "(x)" not in term:
            raise ParseError(f"tensor term {term!r} needs a '(x)' separator")
        left, _, right = term.partition("(x)")
        m = _BR_TERM.fullmatch(left.strip())
        if not m or m.group("key") is None:
            raise ParseError(f"bad tensor carrier part {left.strip()!r}")
        c = _term_coeff(m.group("sign"), m.group("num"))
        key = parse_carrier_key(m.group("key"))
        inner_str = right.strip()
        if inner_str.startswith("(") and inner_str.endswith(")"):
            inner_str = inner_str[1:-1].strip()
        w = parse_element(module.inner, inner_str)
        out = out + c * module.tensor(Vec.basis(key), w)
    return out


def format_f_element(e: Vec, module: FModule) -> str:
    if not e:
        return "0"
    inner = module.inner
    parts = []
    for (bk, ik), c in e.items():
        sign = "-" if c < 0 else "+"
        c = abs(c)
        head = "" if c == 1 else format_rational(c) + " "
        body = format_element(inner, inner.basis(ik))
        if isinstance(inner, FModule):
            body = f"({body})"
        parts.append((sign, f"{head}v[{format_carrier_key(bk)}] (x) {body}"))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# dispatch


def parse_element(module, s: str):
    if isinstance(module, OmegaModule):
        return parse_poly(s)
    if isinstance(module, AModule):
        return parse_laurent(s)
    if isinstance(module, FModule):
        return parse_f_element(s, module)
    if isinstance(module, BrModuleDesc):
        return parse_br_vec(s)
    raise ParseError(f"no element grammar for {type(module).__name__}")


def format_element(module, e) -> str:
    if isinstance(module, OmegaModule):
        return format_poly(e)
    if isinstance(module, AModule):
        return format_laurent(e)
    if isinstance(module, FModule):
        return format_f_element(e, module)
    if isinstance(module, BrModuleDesc):
        return format_br_vec(e)
    raise ParseError(f"no element grammar for {type(module).__name__}")


# ---------------------------------------------------------------------------
# module expressions


def parse_module(spec: str, registry: dict | None = None):
    """Build a module object from an expression like ``F(Mgamma(2),Omega(1,2))``."""
    spec = spec.strip()
    m = re.fullmatch(r"(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s*(?:\((?P<args>.*)\))?", spec, re.S)
    if not m:
        raise ParseError(f"bad module expression {spec!r}")
    name = m.group("name")
    args = _split_args(m.group("args")) if m.group("args") is not None else None
    if registry and name in registry and args is None:
        return registry[name]
    if name == "Omega":
        if not args or len(args) != 2:
            raise ParseError("Omega takes (lambda, beta)")
        return OmegaModule(parse_rational(args[0]), parse_rational(args[1]))
    if name == "A":
        if not args or len(args) != 2:
            raise ParseError("A takes (alpha, beta)")
        return AModule(parse_rational(args[0]), parse_rational(args[1]))
    if name == "Mgamma":
        if not args or len(args) not in (1, 2):
            raise ParseError("Mgamma takes (gamma[, rank])")
        r = int(args[1]) if len(args) == 2 else 1
        return make_m_gamma(parse_rational(args[0]), r)
    if name == "shiftB1":
        return make_shift_module_b1()
    if name == "broken_fixture":
        return make_broken_fixture()
    if name == "mixed_fixture":
        return make_mixed_fixture()
    if name == "adjoint":
        if not args or len(args) != 1:
            raise ParseError("adjoint takes (rank)")
        return adjoint_module(int(args[0]))
    if name == "tensor":
        if not args or len(args) != 2:
            raise ParseError("tensor takes (br, br)")
        left = parse_module(args[0], registry)
        right = parse_module(args[1], registry)
        if not isinstance(left, BrModuleDesc) or not isinstance(right, BrModuleDesc):
            raise ParseError("tensor arguments must be carrier module descriptions")
        return tensor_br(left, right)
    if name == "F":
        if not args or len(args) != 2:
            raise ParseError("F takes (br, inner)")
        br = parse_module(args[0], registry)
        inner = parse_module(args[1], registry)
        if not isinstance(br, BrModuleDesc):
            raise ParseError("the first argument of F must be a carrier module description")
        if isinstance(inner, BrModuleDesc):
            raise ParseError("the inner module of F must carry both actions")
        return FModule(br, inner)
    raise ParseError(f"unknown module {name!r}")


# ---------------------------------------------------------------------------
# workbench files (JSON)


@dataclass
class WorkbenchConfig:
    modules: dict = field(default_factory=dict)
    defaults: dict = field(default_factory=dict)
    fmt: str = "human"


def _op_from_json(obj) -> object:
    kind = obj.get("kind")
    if kind == "scalar":
        return ScalarMult(parse_rational(str(obj["c"])))
    if kind == "polymult":
        if "poly" in obj:
            return PolyMult(parse_poly(str(obj["poly"]), var="x"))
        return PolyMult(Poly([parse_rational(str(c)) for c in obj["coeffs"]]))
    if kind == "unitshift":
        return UnitShift(parse_rational(str(obj["c"])))
    if kind == "matrix":
        rows = tuple(
            tuple(parse_rational(str(c)) for c in row) for row in obj["entries"]
        )
        return MatrixOp(rows)
    if kind == "sum":
        return OpSum(tuple(_op_from_json(o) for o in obj["ops"]))
    if kind == "compose":
        return OpCompose(tuple(_op_from_json(o) for o in obj["ops"]))
    if kind == "tensor":
        return TensorOp(_op_from_json(obj["left"]), _op_from_json(obj["right"]))
    if kind == "zero":
        return ZeroOp()
    raise ParseError(f"unknown operator kind {kind!r}")


def _carrier_from_json(obj):
    kind = obj.get("kind")
    if kind == "finite":
        return FiniteDim(int(obj["dim"]))
    if kind == "poly":
        return PolyCarrier(int(obj.get("cap", 8)))
    if kind == "tensor":
        return TensorCarrier(
            _carrier_from_json(obj["left"]), _carrier_from_json(obj["right"])
        )
    raise ParseError(f"unknown carrier kind {kind!r}")


def load_workbench(path: str) -> WorkbenchConfig:
    """Load named module definitions from a JSON workbench file.

    Carrier module descriptions declared in the file are validated on
    load; a failing description is a configuration error.
    """
    with open(path) as fh:
        data = json.load(fh)
    defs = data.get("modules", {})
    built: dict = {}
    building: set = set()

    def resolve(name_or_def):
        if isinstance(name_or_def, str):
            name = name_or_def
            if name in built:
                return built[name]
            if name not in defs:
                return parse_module(name, None)
            if name in building:
                raise ParseError(f"module definition cycle at {name!r}")
            building.add(name)
            built[name] = build(defs[name], name)
            building.discard(name)
            return built[name]
        return build(name_or_def, None)

    def build(obj, name):
        typ = obj.get("type")
        if typ == "omega":
            return OmegaModule(parse_rational(str(obj["lambda"])), parse_rational(str(obj["beta"])))
        if typ == "a":
            return AModule(parse_rational(str(obj["alpha"])), parse_rational(str(obj["beta"])))
        if typ == "br":
            M = BrModuleDesc(
                int(obj["rank"]),
                _carrier_from_json(obj["carrier"]),
                tuple(_op_from_json(o) for o in obj["ops"]),
                name=name or "br-module",
            )
            window = int(obj.get("check_window", 6))
            report = validate_br_module(M, window)
            if not report.ok:
                w = report.witnesses[0]
                raise ParseError(
                    f"module {name or '<inline>'} fails validation at "
                    f"(i={w.i}, j={w.j}, key={w.key})"
                )
            return M
        if typ == "tensor":
            return tensor_br(resolve(obj["left"]), resolve(obj["right"]))
        if typ == "f":
            br = resolve(obj["br"])
            inner = resolve(obj["inner"])
            return FModule(br, inner)
        raise ParseError(f"unknown module type {typ!r}")

    for name in defs:
        resolve(name)
    return WorkbenchConfig(
        modules=built,
        defaults=data.get("defaults", {}),
        fmt=data.get("format", "human"),
    )
