"""Line-oriented text format for fields.

Grammar (one directive per line, ``#`` starts a comment)::

    label <free text>
    <kind> [key=value ...] [amp=value]

where ``<kind>`` is one of ``constant``, ``fourier_cos``, ``fourier_sin``
(key ``k``), ``bump_psi`` (``a``, ``b``), ``plateau_phi`` (``a``, ``b``,
``delta``), ``odd_theta`` (``center``, ``delta``), ``odd_theta_hat``
(``a``, ``b``, ``delta``) and ``accum_osc`` (``center``, ``r``). ``amp``
defaults to 1. Floats are written with ``repr`` so parse/serialize
round-trips exactly.
"""
import re

from .errors import CircleStabError, ParseError
from .field import ATOM_TYPES, CircleField


def parse_atom(line, lineno=None):
    tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
    kind = tokens[0][0]
    cls = ATOM_TYPES.get(kind)
    if cls is None:
        raise ParseError(f"unknown atom kind {kind!r}", lineno, tokens[0][1])
    kwargs = {}
    for tok, col in tokens[1:]:
        key, sep, raw = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
        if key != "amp" and key not in cls.params:
            raise ParseError(f"{kind} does not take parameter {key!r}", lineno, col)
        if key in kwargs:
            raise ParseError(f"duplicate parameter {key!r}", lineno, col)
        try:
            value = float(raw)
            if key == "k":
                if value != int(value):
                    raise ValueError
                value = int(value)
        except ValueError:
            raise ParseError(f"bad number {raw!r} for {key}", lineno, col + len(key) + 1) from None
        kwargs[key] = value
    missing = [p for p in cls.params if p not in kwargs and p != "k"]
    if missing:
        raise ParseError(f"{kind} is missing {', '.join(missing)}", lineno, 1)
    try:
        return cls(**kwargs)
    except CircleStabError as exc:
        raise ParseError(str(exc), lineno, 1) from None


def is_atom_line(line):
    tokens = line.split()
    return bool(tokens) and tokens[0] in ATOM_TYPES


def parse_field(text, label=""):
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("label ") or line == "label":
            label = line[len("label"):].strip()
            continue
        atoms.append(parse_atom(line, lineno))
    return CircleField(tuple(atoms), label)


def format_field(field, comments=()):
    lines = [f"# {c}" for c in comments]
    if field.label:
        lines.append(f"label {field.label}")
    lines.extend(atom.to_line() for atom in field.atoms)
    return "\n".join(lines) + "\n"


def read_field(path):
    with open(path, encoding="utf-8") as fh:
        return parse_field(fh.read())


def write_field(path, field, comments=()):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_field(field, comments))
