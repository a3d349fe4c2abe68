"""JSON problem files.

A problem file looks like::

    {
      "name": "neurologist",
      "states": ["needs_surgery", "no_surgery"],
      "prior": [0.6, 0.4],
      "actions": ["operate", "wait"],
      "fuzzy": {"inconvenient": {"tri": [-0.5, -0.3, -0.1]}},
      "utilities": [[{"crisp": 0}, ...], ["inconvenient", {"crisp": 0}]],
      "experiments": [
        {"name": "score", "gaussian": {"means": {"needs_surgery": 120, ...},
                                       "stds": {"needs_surgery": 8, ...}}},
        {"name": "p1", "outcomes": ["pass", "fail"], "likelihood": [[0.8, 0.2], ...]}
      ]
    }

``utilities`` has one row per state and one entry per action.  An entry is
a fuzzy literal or the name of an entry in ``fuzzy``.  Fuzzy literals are a
list of ``[abscissa, grade]`` pairs or one of ``{"crisp": v}``,
``{"tri": [a, b, c]}``, ``{"trap": [a, b, c, d]}``, ``{"pwl": [[x, mu], ...]}``.
Optional ``description`` and ``caveat`` strings are carried into reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .decision import DecisionProblem
from .errors import InvariantError, ParseError
from .fuzzy import FuzzyNumber, from_breakpoints, make_crisp, make_trapezoidal, make_triangular
from .inference import DiscreteExperiment, Distribution, Experiment, GaussianExperiment, StateSpace

BUNDLED = ("neurologist.json", "quality_control.json")


class FileInvariantError(InvariantError):
    """Invariant violation located at a JSON path inside a problem file."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True)
class ProblemFile:
    problem: DecisionProblem
    experiments: dict[str, Experiment] = field(default_factory=dict)
    definitions: dict[str, FuzzyNumber] = field(default_factory=dict)
    name: str = ""
    description: str = ""
    caveat: str = ""

    def experiment(self, name: str | None) -> tuple[str, Experiment]:
        if name is None:
            if len(self.experiments) != 1:
                raise InvariantError(
                    "choose an experiment with --experiment: " + ", ".join(self.experiments) if self.experiments
                    else "the problem file defines no experiments"
                )
            name = next(iter(self.experiments))
        if name not in self.experiments:
            raise InvariantError(f"unknown experiment {name!r}; known: {', '.join(self.experiments)}")
        return name, self.experiments[name]


# -- fuzzy literals ----------------------------------------------------------


def _numbers(value, where, count=None):
    if not isinstance(value, list) or (count is not None and len(value) != count):
        want = f"a list of {count} numbers" if count else "a list of numbers"
        raise ParseError(f"{where}: expected {want}")
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"{where}: expected numbers, got {v!r}")
    return [float(v) for v in value]


def _pairs(value, where):
    if not isinstance(value, list) or not value:
        raise ParseError(f"{where}: expected a non-empty list of [abscissa, grade] pairs")
    return [_numbers(p, f"{where}[{i}]", 2) for i, p in enumerate(value)]


def parse_fuzzy(value: Any, where: str = "fuzzy", definitions: dict | None = None) -> FuzzyNumber:
    if isinstance(value, str):
        if definitions is not None and value in definitions:
            return definitions[value]
        raise ParseError(f"{where}: unknown fuzzy name {value!r}")
    try:
        if isinstance(value, list):
            return from_breakpoints(_pairs(value, where))
        if isinstance(value, dict) and len(value) == 1:
            (kind, arg), = value.items()
            if kind == "crisp":
                if isinstance(arg, bool) or not isinstance(arg, (int, float)):
                    raise ParseError(f"{where}.crisp: expected a number")
                return make_crisp(float(arg))
            if kind == "tri":
                return make_triangular(*_numbers(arg, f"{where}.tri", 3))
            if kind == "trap":
                return make_trapezoidal(*_numbers(arg, f"{where}.trap", 4))
            if kind == "pwl":
                return from_breakpoints(_pairs(arg, f"{where}.pwl"))
    except InvariantError as err:
        raise FileInvariantError(where, str(err)) from None
    raise ParseError(f"{where}: unknown fuzzy literal form {json.dumps(value)[:60]}")


def dump_fuzzy(F: FuzzyNumber) -> Any:
    if F.is_crisp:
        return {"crisp": F.points[0][0]}
    return F.to_list()


# -- experiments -------------------------------------------------------------


def parse_experiment(value: Any, states: StateSpace, where: str) -> Experiment:
    if not isinstance(value, dict):
        raise ParseError(f"{where}: expected an object")
    try:
        if "gaussian" in value:
            g = value["gaussian"]
            if not isinstance(g, dict) or not isinstance(g.get("means"), dict) or not isinstance(g.get("stds"), dict):
                raise ParseError(f"{where}.gaussian: expected 'means' and 'stds' objects keyed by state")
            for key in ("means", "stds"):
                missing = [s for s in states.names if s not in g[key]]
                extra = [s for s in g[key] if s not in states.names]
                if missing or extra:
                    raise FileInvariantError(f"{where}.gaussian.{key}", f"missing {missing} / unknown {extra} states")
            return GaussianExperiment(
                tuple(_numbers([g["means"][s]], f"{where}.gaussian.means.{s}")[0] for s in states.names),
                tuple(_numbers([g["stds"][s]], f"{where}.gaussian.stds.{s}")[0] for s in states.names),
            )
        if "outcomes" in value and "likelihood" in value:
            outcomes = value["outcomes"]
            if not isinstance(outcomes, list) or not all(isinstance(o, str) for o in outcomes):
                raise ParseError(f"{where}.outcomes: expected a list of names")
            rows = value["likelihood"]
            if not isinstance(rows, list) or len(rows) != len(states):
                raise FileInvariantError(f"{where}.likelihood", f"expected {len(states)} rows, one per state")
            table = []
            for i, row in enumerate(rows):
                nums = _numbers(row, f"{where}.likelihood[{i}]")
                try:
                    DiscreteExperiment(tuple(outcomes), (tuple(nums),))
                except InvariantError as err:
                    raise FileInvariantError(f"{where}.likelihood[{i}]", str(err)) from None
                table.append(tuple(nums))
            return DiscreteExperiment(tuple(outcomes), tuple(table))
    except InvariantError as err:
        if isinstance(err, FileInvariantError):
            raise
        raise FileInvariantError(where, str(err)) from None
    raise ParseError(f"{where}: expected a 'gaussian' model or 'outcomes' + 'likelihood'")


def dump_experiment(exp: Experiment, states: StateSpace) -> dict:
    if isinstance(exp, GaussianExperiment):
        return {
            "gaussian": {
                "means": dict(zip(states.names, exp.means)),
                "stds": dict(zip(states.names, exp.stds)),
            }
        }
    return {"outcomes": list(exp.outcomes), "likelihood": [list(r) for r in exp.likelihood]}


# -- problem files -----------------------------------------------------------


def _field(doc, key, kind, where=None):
    if key not in doc:
        raise ParseError(f"{where or key}: missing field")
    value = doc[key]
    if not isinstance(value, kind):
        raise ParseError(f"{where or key}: expected {kind.__name__ if isinstance(kind, type) else 'value'}")
    return value


def parse_document(doc: Any) -> ProblemFile:
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    names = _field(doc, "states", list)
    if not all(isinstance(n, str) for n in names):
        raise ParseError("states: expected a list of names")
    try:
        states = StateSpace(tuple(names))
    except InvariantError as err:
        raise FileInvariantError("states", str(err)) from None
    prior_raw = _numbers(_field(doc, "prior", list), "prior")
    if len(prior_raw) != len(states):
        raise FileInvariantError("prior", f"expected {len(states)} probabilities, got {len(prior_raw)}")
    try:
        prior = Distribution(tuple(prior_raw))
    except InvariantError as err:
        raise FileInvariantError("prior", str(err)) from None
    actions = _field(doc, "actions", list)
    if not all(isinstance(a, str) for a in actions):
        raise ParseError("actions: expected a list of names")
    if not actions or len(set(actions)) != len(actions):
        raise FileInvariantError("actions", "actions must be non-empty with unique labels")

    definitions: dict[str, FuzzyNumber] = {}
    raw_defs = doc.get("fuzzy", {})
    if not isinstance(raw_defs, dict):
        raise ParseError("fuzzy: expected an object of named fuzzy literals")
    for key, lit in raw_defs.items():
        definitions[key] = parse_fuzzy(lit, f"fuzzy.{key}")

    rows = _field(doc, "utilities", list)
    if len(rows) != len(states):
        raise FileInvariantError("utilities", f"expected {len(states)} rows, one per state")
    table = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(actions):
            raise FileInvariantError(f"utilities[{i}]", f"expected {len(actions)} entries, one per action")
        table.append(tuple(parse_fuzzy(v, f"utilities[{i}][{j}]", definitions) for j, v in enumerate(row)))

    experiments: dict[str, Experiment] = {}
    raw_exps = doc.get("experiments", [])
    if not isinstance(raw_exps, list):
        raise ParseError("experiments: expected a list")
    for k, e in enumerate(raw_exps):
        where = f"experiments[{k}]"
        if not isinstance(e, dict) or not isinstance(e.get("name"), str):
            raise ParseError(f"{where}: expected an object with a 'name'")
        if e["name"] in experiments:
            raise FileInvariantError(f"{where}.name", f"duplicate experiment name {e['name']!r}")
        experiments[e["name"]] = parse_experiment(e, states, where)

    problem = DecisionProblem(states, tuple(actions), prior, tuple(table))
    return ProblemFile(
        problem=problem,
        experiments=experiments,
        definitions=definitions,
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
        caveat=str(doc.get("caveat", "")),
    )


def resolve_path(path: str | Path) -> Path | None:
    """The file itself, or a bundled scenario of that name."""
    p = Path(path)
    if p.exists():
        return p
    if p.name in BUNDLED:
        return Path(str(resources.files("fuzzy_voi") / "data" / p.name))
    return None


def parse_problem(path: str | Path) -> ProblemFile:
    """Load and validate a problem file (bundled scenario names also work)."""
    p = resolve_path(path)
    if p is None:
        raise ParseError(f"{path}: no such file")
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"{path}: {err.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    try:
        return parse_document(doc)
    except (ParseError, InvariantError) as err:
        err.args = (f"{path}: {err.args[0]}",)
        raise


def dump_document(pf: ProblemFile) -> dict:
    p = pf.problem
    by_value = {v: k for k, v in pf.definitions.items()}
    doc: dict[str, Any] = {}
    if pf.name:
        doc["name"] = pf.name
    if pf.description:
        doc["description"] = pf.description
    if pf.caveat:
        doc["caveat"] = pf.caveat
    doc["states"] = list(p.states.names)
    doc["prior"] = list(p.prior.probs)
    doc["actions"] = list(p.actions)
    if pf.definitions:
        doc["fuzzy"] = {k: dump_fuzzy(v) for k, v in pf.definitions.items()}
    doc["utilities"] = [[by_value.get(u, None) or dump_fuzzy(u) for u in row] for row in p.utilities]
    doc["experiments"] = [
        {"name": name, **dump_experiment(e, p.states)} for name, e in pf.experiments.items()
    ]
    return doc


def dumps_problem(pf: ProblemFile) -> str:
    return json.dumps(dump_document(pf), indent=2, ensure_ascii=False) + "\n"
