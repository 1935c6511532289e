"""Scenario files: named fields plus an ordered list of commands.

Format (``#`` starts a comment)::

    config grid=4096 tol_zero=1e-9 tol_deriv=1e-6
    field NAME
      <atom line>
      ...
    end
    analyze NAME
    margin NAME
    perturb NAME case=1 x=0 delta=0.2 eps=0.05 [as=NEW]
    perturb NAME case=3 a=0.4 b=0.6 delta=0.05 eps=0.01 [subcase=SameSign]
    perturb NAME case=4 x=0.5 r=0.2 eps=0.01 [force=1]
    stabilize NAME eps=0.01 [as=NEW]
    compare NAME OTHER
    portrait NAME [resolution=512]

``as=NEW`` registers the perturbed field under a new name for later
commands.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, replace

from . import __version__
from .equivalence import are_equivalent
from .errors import CircleStabError, ParseError, ResolutionError
from .field import CircleField, c1_norm
from .fieldio import format_field, parse_atom
from .fixed_points import DEFAULT_CONFIG, DetectionConfig, Subcase, find_fixed_points
from .perturbation import annihilate, clear_accumulation, clear_plateau, split, stabilize_steps
from .portrait import render_portrait
from .stability import stability_margin, stability_verdict

COMMANDS = ("analyze", "margin", "perturb", "stabilize", "compare", "portrait")
_CONFIG_KEYS = {"grid": "grid_resolution", "tol_zero": "tol_zero", "tol_deriv": "tol_deriv",
                "plateau_min_width": "plateau_min_width", "accumulation_cap": "accumulation_cap"}
_OPTIONS = {
    "analyze": set(), "margin": set(), "compare": set(),
    "perturb": {"case", "x", "delta", "eps", "a", "b", "r", "subcase", "force", "as"},
    "stabilize": {"eps", "as"},
    "portrait": {"resolution"},
}


@dataclass(frozen=True)
class Command:
    name: str
    targets: tuple
    options: dict
    line: int


@dataclass
class Scenario:
    fields: dict
    commands: list
    cfg: DetectionConfig = DEFAULT_CONFIG
    output_dir: str | None = None
    name: str = "scenario"


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _kv(tok, col, lineno):
    key, sep, raw = tok.partition("=")
    if not sep or not key:
        raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
    return key, raw


def _config(tokens, lineno, cfg):
    updates = {}
    for tok, col in tokens[1:]:
        key, raw = _kv(tok, col, lineno)
        if key not in _CONFIG_KEYS:
            raise ParseError(f"unknown config key {key!r}", lineno, col)
        try:
            val = int(raw) if key in ("grid", "accumulation_cap") else float(raw)
        except ValueError:
            raise ParseError(f"bad value {raw!r} for {key}", lineno, col + len(key) + 1) from None
        updates[_CONFIG_KEYS[key]] = val
    try:
        return replace(cfg, **updates)
    except CircleStabError as exc:
        raise ParseError(str(exc), lineno, 1) from None


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    fields, commands = {}, []
    cfg = DEFAULT_CONFIG
    known = set()
    current, atoms, start = None, [], 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        toks = _tokens(line)
        if not toks:
            continue
        head, col = toks[0]
        if current is not None:
            if head == "end" and len(toks) == 1:
                fields[current] = CircleField(tuple(atoms), current)
                current = None
            else:
                atoms.append(parse_atom(line, lineno))
            continue
        if head == "config":
            cfg = _config(toks, lineno, cfg)
        elif head == "field":
            if len(toks) != 2:
                raise ParseError("expected 'field NAME'", lineno, col)
            current, atoms, start = toks[1][0], [], lineno
            if current in known:
                raise ParseError(f"field {current!r} declared twice", lineno, toks[1][1])
            known.add(current)
        elif head in COMMANDS:
            targets, options = [], {}
            for tok, tcol in toks[1:]:
                if "=" in tok:
                    key, val = _kv(tok, tcol, lineno)
                    if key not in _OPTIONS[head]:
                        raise ParseError(f"{head} does not take option {key!r}", lineno, tcol)
                    options[key] = val
                else:
                    if tok not in known:
                        raise ParseError(f"unknown field name {tok!r}", lineno, tcol)
                    targets.append(tok)
            want = 2 if head == "compare" else 1
            if len(targets) != want:
                raise ParseError(f"{head} expects {want} field name(s), got {len(targets)}", lineno, col)
            if "as" in options:
                if options["as"] in known:
                    raise ParseError(f"field {options['as']!r} already exists", lineno, col)
                known.add(options["as"])
            commands.append(Command(head, tuple(targets), options, lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    if current is not None:
        raise ParseError(f"field {current!r} is missing 'end'", start, 1)
    return Scenario(fields, commands, cfg, name=name)


def read_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario(text, os.path.splitext(os.path.basename(path))[0])


def _num(opts, key, default=None):
    if key not in opts:
        if default is None:
            raise CircleStabError(f"missing option {key}=")
        return default
    try:
        return float(opts[key])
    except ValueError:
        raise CircleStabError(f"option {key}={opts[key]!r} is not a number") from None


def _zero_summary(field, cfg):
    try:
        fps = find_fixed_points(field, cfg)
    except ResolutionError:
        fps = find_fixed_points(field, cfg.finer())
    return {"isolated_zeros": fps.count, "plateaus": len(fps.plateaus),
            "accumulation_suspected": len(fps.accumulation_suspected),
            "whole_circle_zero": fps.whole_circle_zero}


def _perturb(f, opts, cfg):
    case = opts.get("case")
    eps = _num(opts, "eps")
    if case == "1":
        pert = annihilate(f, _num(opts, "x"), _num(opts, "delta"), eps, cfg)
    elif case == "2":
        pert = split(f, _num(opts, "x"), _num(opts, "delta"), eps, cfg)
    elif case == "3":
        try:
            sub = Subcase(opts["subcase"]) if "subcase" in opts else None
        except ValueError:
            raise CircleStabError(f"subcase must be SameSign or OppositeSign, got {opts['subcase']!r}") from None
        pert = clear_plateau(f, _num(opts, "a"), _num(opts, "b"), _num(opts, "delta"), eps, sub, cfg)
    elif case == "4":
        pert = clear_accumulation(f, _num(opts, "x"), _num(opts, "r"), eps, cfg,
                                  force=bool(_num(opts, "force", 0.0)))
    else:
        raise CircleStabError(f"case must be one of 1, 2, 3, 4; got {case!r}")
    return pert


class _Runner:
    def __init__(self, scenario, out_dir):
        self.sc = scenario
        self.out = out_dir
        self.fields = dict(scenario.fields)
        self.cfg = scenario.cfg

    def write(self, name, text):
        with open(os.path.join(self.out, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)

    def run(self, idx, cmd):
        stem = f"{idx:02d}_{cmd.name}_{'_'.join(cmd.targets)}"
        f = self.fields[cmd.targets[0]]
        rec = {"index": idx, "command": cmd.name, "fields": list(cmd.targets), "line": cmd.line}
        lines = [f"command {idx}: {cmd.name} {' '.join(cmd.targets)}"]
        cfg = self.cfg

        if cmd.name == "analyze":
            rep = stability_verdict(f, cfg)
            rec.update(rep.record(f.label))
            rec["fixed_points"] = [
                {"location": p.location, "derivative": p.derivative,
                 "classification": p.classification.value} for p in rep.fixed_points.points]
            rec["plateaus"] = [{"a": p.a, "b": p.b, "subcase": p.subcase.value}
                               for p in rep.fixed_points.plateaus]
            rec["accumulation_suspected"] = list(rep.fixed_points.accumulation_suspected)
            lines.append(rep.text(f.label).rstrip("\n"))
        elif cmd.name == "margin":
            m = stability_margin(f, cfg)
            rec.update(delta=m.delta, eps0=m.eps0, eps1=m.eps1, robustness_radius=m.robustness_radius)
            lines.extend(f"{k}: {v!r}" for k, v in
                         (("delta", m.delta), ("eps0", m.eps0), ("eps1", m.eps1),
                          ("robustness_radius", m.robustness_radius)))
        elif cmd.name in ("perturb", "stabilize"):
            new_name = cmd.options.get("as", f"{cmd.targets[0]}_{idx:02d}")
            if cmd.name == "perturb":
                pert = _perturb(f, cmd.options, cfg)
                g = pert.perturbed
                steps = [pert]
            else:
                g, steps = stabilize_steps(f, _num(cmd.options, "eps"), cfg)
                rec["verdict"] = stability_verdict(g, cfg).verdict.value
            g = g.with_label(new_name)
            self.fields[new_name] = g
            rec["steps"] = [s.record() for s in steps]
            rec["result_field"] = new_name
            rec["before"] = _zero_summary(f, cfg)
            rec["after"] = _zero_summary(g, cfg)
            added = CircleField(g.atoms[len(f.atoms):])
            rec["distance_c1"] = c1_norm(added, 4 * cfg.grid_resolution).c1
            if cmd.name == "perturb":
                rec["achieved_norm"] = steps[0].achieved_norm
                rec["budget"] = steps[0].budget
                rec["case"] = steps[0].case_tag.value
            comments = [s.provenance() for s in steps] or ["unchanged: field already structurally stable"]
            self.write(stem + ".field", format_field(g, [f"derived from {f.label}"] + comments))
            for s in steps:
                lines.append(s.provenance())
            for when in ("before", "after"):
                z = rec[when]
                lines.append(f"zeros {when}: {z['isolated_zeros']} isolated, {z['plateaus']} arcs"
                             + (", whole circle" if z["whole_circle_zero"] else ""))
            lines.append(f"distance (C1, grid): {rec['distance_c1']!r}")
        elif cmd.name == "compare":
            g = self.fields[cmd.targets[1]]
            ok, h = are_equivalent(f, g, cfg)
            rec["equivalent"] = ok
            rec["witness"] = None if h is None else {
                "orientation": h.orientation.value, "nodes": [list(n) for n in h.nodes]}
            lines.append(f"equivalent: {ok}")
            if h is not None:
                self.write(stem + "_witness.csv", h.to_csv())
                lines.append(f"witness: {h.orientation.value}, {len(h.nodes)} nodes")
        elif cmd.name == "portrait":
            res = int(_num(cmd.options, "resolution", 512))
            fps = find_fixed_points(f, cfg)
            svg, csv_text = render_portrait(f, fps, res, version=__version__)
            self.write(stem + ".svg", svg)
            self.write(stem + ".csv", csv_text)
            rec.update(resolution=res, markers=fps.count)
            lines.append(f"wrote {stem}.svg and {stem}.csv ({fps.count} markers)")
        return stem, rec, lines


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def run_scenario(scenario: Scenario | str, out_dir: str, cfg: DetectionConfig | None = None) -> int:
    """Execute every command, write reports to ``out_dir`` and return the exit status."""
    if isinstance(scenario, (str, os.PathLike)):
        scenario = read_scenario(scenario)
    if cfg is not None:
        scenario = replace(scenario, cfg=cfg)
    os.makedirs(out_dir, exist_ok=True)
    runner = _Runner(scenario, out_dir)
    summary = []
    for idx, cmd in enumerate(scenario.commands, start=1):
        stem = f"{idx:02d}_{cmd.name}_{'_'.join(cmd.targets)}"
        try:
            stem, rec, lines = runner.run(idx, cmd)
            rec["status"] = "ok"
        except CircleStabError as exc:
            rec = {"index": idx, "command": cmd.name, "fields": list(cmd.targets), "line": cmd.line,
                   "status": "error", "error": f"{type(exc).__name__}: {exc}"}
            lines = [f"command {idx}: {cmd.name} {' '.join(cmd.targets)}", f"error: {rec['error']}"]
        runner.write(stem + ".txt", "\n".join(lines) + "\n")
        runner.write(stem + ".json", _dump(rec))
        summary.append({"index": idx, "command": cmd.name, "fields": list(cmd.targets),
                        "status": rec["status"], "error": rec.get("error")})
    status = 0 if all(s["status"] == "ok" for s in summary) else 1
    runner.write("summary.json", _dump({"scenario": scenario.name, "commands": summary, "exit_status": status}))
    return status
