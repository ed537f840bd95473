"""Scenario documents: JSON schema, validation and round-trip serialization.

Complex numbers are ``[re, im]`` pairs and matrices are row-major lists of
rows.  State vectors and density matrices are given in standard
coordinates (the sqrt-weight embedding of L2), so ``[[1, 0], [0, 0]]`` is a
unit vector on any two-outcome space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema
import numpy as np

from .decoherence import State, StateError
from .linalg import unembed
from .measure import Event, MeasureSpace
from .paths import NotUnitaryError, PathSpace, UnitarySystem, unitarity_residual, UNITARY_TOL

UNIT_TOL = 1e-10


class ScenarioError(ValueError):
    """Validation failure with a machine-readable code and JSON pointer."""

    def __init__(self, code: str, pointer: str, message: str):
        super().__init__(f"{code} at {pointer or '/'}: {message}")
        self.code = code
        self.pointer = pointer
        self.message = message

    def as_dict(self) -> dict:
        return {"code": self.code, "pointer": self.pointer, "message": self.message}


_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_cvector = {"type": "array", "items": _complex, "minItems": 1}
_cmatrix = {"type": "array", "items": _cvector, "minItems": 1}

_path_event: dict = {
    "type": "object",
    "required": ["type"],
    "oneOf": [
        {
            "properties": {"type": {"enum": ["final_site", "initial_site"]}, "value": {"type": "integer", "minimum": 0}},
            "required": ["type", "value"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "type": {"const": "site_at"},
                "time": {"type": "integer", "minimum": 0},
                "value": {"type": "integer", "minimum": 0},
            },
            "required": ["type", "time", "value"],
            "additionalProperties": False,
        },
        {
            "properties": {"type": {"const": "explicit"}, "paths": {"type": "array", "items": {"type": "string", "pattern": "^[0-9a-zA-Z]+$"}}},
            "required": ["type", "paths"],
            "additionalProperties": False,
        },
        {
            "properties": {"type": {"enum": ["union", "intersection"]}, "of": {"type": "array", "items": {"$ref": "#/$defs/path_event"}}},
            "required": ["type", "of"],
            "additionalProperties": False,
        },
        {
            "properties": {"type": {"const": "complement"}, "of": {"$ref": "#/$defs/path_event"}},
            "required": ["type", "of"],
            "additionalProperties": False,
        },
    ],
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["space", "state"],
    "additionalProperties": False,
    "properties": {
        "space": {
            "type": "object",
            "required": ["weights"],
            "additionalProperties": False,
            "properties": {"weights": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1}},
        },
        "events": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "random_variables": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "number"}}},
        "state": {
            "type": "object",
            "oneOf": [
                {
                    "properties": {"kind": {"const": "pure"}, "vector": _cvector},
                    "required": ["kind", "vector"],
                    "additionalProperties": False,
                },
                {
                    "properties": {"kind": {"const": "density"}, "matrix": _cmatrix},
                    "required": ["kind", "matrix"],
                    "additionalProperties": False,
                },
            ],
        },
    },
}

PATH_SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["system", "psi", "horizon"],
    "additionalProperties": False,
    "$defs": {"path_event": _path_event},
    "properties": {
        "system": {
            "type": "object",
            "required": ["dim", "steps"],
            "additionalProperties": False,
            "properties": {"dim": {"type": "integer", "minimum": 1}, "steps": {"type": "array", "items": _cmatrix}},
        },
        "psi": _cvector,
        "horizon": {"type": "integer", "minimum": 0},
        "path_events": {"type": "object", "additionalProperties": {"$ref": "#/$defs/path_event"}},
    },
}


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _schema_check(doc, schema):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        raise ScenarioError("SCHEMA", _pointer(err.absolute_path), err.message)


def _cplx(pair) -> complex:
    return complex(pair[0], pair[1])


def _cvec(rows) -> np.ndarray:
    return np.array([_cplx(p) for p in rows], dtype=np.complex128)


def _cmat(rows, pointer: str) -> np.ndarray:
    width = len(rows)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ScenarioError("DIMENSION_MISMATCH", f"{pointer}/{i}", f"row has {len(r)} entries, expected {width}")
    return np.array([[_cplx(p) for p in r] for r in rows], dtype=np.complex128)


def _enc(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _enc_vec(v) -> list:
    return [_enc(z) for z in np.asarray(v, dtype=np.complex128)]


def _enc_mat(m) -> list:
    return [_enc_vec(r) for r in np.asarray(m, dtype=np.complex128)]


@dataclass(eq=False)
class Scenario:
    space: MeasureSpace
    events: dict[str, Event]
    random_variables: dict[str, np.ndarray]
    state: State
    state_kind: str = "density"
    state_vector: np.ndarray | None = field(default=None, repr=False)

    def event(self, name: str) -> Event:
        try:
            return self.events[name]
        except KeyError:
            raise ScenarioError("UNKNOWN_NAME", f"/events/{name}", f"no event named {name!r}") from None

    def random_variable(self, name: str) -> np.ndarray:
        try:
            return self.random_variables[name]
        except KeyError:
            raise ScenarioError("UNKNOWN_NAME", f"/random_variables/{name}", f"no random variable named {name!r}") from None

    def to_dict(self) -> dict:
        if self.state_kind == "pure":
            state = {"kind": "pure", "vector": _enc_vec(self.state_vector)}
        else:
            state = {"kind": "density", "matrix": _enc_mat(self.state.matrix)}
        return {
            "space": {"weights": [float(w) for w in self.space.weights]},
            "events": {k: [int(i) for i in e.indices] for k, e in self.events.items()},
            "random_variables": {k: [float(x) for x in v] for k, v in self.random_variables.items()},
            "state": state,
        }

    def pure_vector(self) -> np.ndarray | None:
        """The pure state's vector in function coordinates, if pure."""
        if self.state_kind != "pure":
            return None
        return unembed(self.space, self.state_vector)


@dataclass(eq=False)
class PathScenario:
    system: UnitarySystem
    psi: np.ndarray
    horizon: int
    path_events: dict[str, dict]

    @property
    def space(self) -> PathSpace:
        return PathSpace(self.system.dim, self.horizon)

    def event(self, name: str) -> Event:
        if name not in self.path_events:
            raise ScenarioError("UNKNOWN_NAME", f"/path_events/{name}", f"no path event named {name!r}")
        return evaluate_path_event(self.space, self.path_events[name], f"/path_events/{name}")

    def to_dict(self) -> dict:
        return {
            "system": {"dim": self.system.dim, "steps": [_enc_mat(u) for u in self.system.steps]},
            "psi": _enc_vec(self.psi),
            "horizon": self.horizon,
            "path_events": json.loads(json.dumps(self.path_events)),
        }


def evaluate_path_event(space: PathSpace, expr: dict, pointer: str = "") -> Event:
    kind = expr["type"]
    try:
        if kind == "final_site":
            return space.final_site(expr["value"])
        if kind == "initial_site":
            return space.initial_site(expr["value"])
        if kind == "site_at":
            if expr["time"] > space.horizon:
                raise ScenarioError("PATH_EVENT", f"{pointer}/time", f"time {expr['time']} beyond horizon {space.horizon}")
            return space.site_at(expr["time"], expr["value"])
        if kind == "explicit":
            idx = []
            for i, text in enumerate(expr["paths"]):
                try:
                    idx.append(space.parse(text))
                except ValueError as exc:
                    raise ScenarioError("PATH_EVENT", f"{pointer}/paths/{i}", str(exc)) from None
            return Event.from_indices(space.size, idx)
        if kind in ("union", "intersection"):
            out = space.nothing() if kind == "union" else space.everything()
            for i, sub in enumerate(expr["of"]):
                e = evaluate_path_event(space, sub, f"{pointer}/of/{i}")
                out = (out | e) if kind == "union" else (out & e)
            return out
        if kind == "complement":
            return ~evaluate_path_event(space, expr["of"], f"{pointer}/of")
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError("PATH_EVENT", f"{pointer}/value", str(exc)) from None
    raise ScenarioError("SCHEMA", f"{pointer}/type", f"unknown path event type {kind!r}")


def _load(document) -> Any:
    if isinstance(document, (str, bytes)):
        try:
            return json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError("JSON_SYNTAX", "", str(exc)) from None
    return document


def parse_scenario(document) -> Scenario | PathScenario:
    """Validate a scenario document (JSON text or already-decoded dict)."""
    doc = _load(document)
    if isinstance(doc, dict) and "system" in doc:
        return _parse_path(doc)
    return _parse_plain(doc)


def _parse_plain(doc) -> Scenario:
    _schema_check(doc, SCENARIO_SCHEMA)
    weights = np.array(doc["space"]["weights"], dtype=np.float64)
    if not np.all(np.isfinite(weights)):
        raise ScenarioError("INVALID_WEIGHTS", "/space/weights", "weights must be finite")
    space = MeasureSpace(weights)
    n = space.size
    events = {}
    for name, members in doc.get("events", {}).items():
        for i, k in enumerate(members):
            if k >= n:
                raise ScenarioError("DIMENSION_MISMATCH", f"/events/{name}/{i}", f"outcome {k} outside 0..{n - 1}")
        events[name] = Event.from_indices(n, members)
    rvs = {}
    for name, values in doc.get("random_variables", {}).items():
        if len(values) != n:
            raise ScenarioError("DIMENSION_MISMATCH", f"/random_variables/{name}", f"length {len(values)}, space has {n} outcomes")
        rvs[name] = np.array(values, dtype=np.float64)
    st = doc["state"]
    vector = None
    try:
        if st["kind"] == "pure":
            vector = _cvec(st["vector"])
            if vector.shape[0] != n:
                raise ScenarioError("DIMENSION_MISMATCH", "/state/vector", f"length {vector.shape[0]}, space has {n} outcomes")
            nrm = float(np.vdot(vector, vector).real)
            if abs(nrm - 1.0) > UNIT_TOL:
                raise ScenarioError("STATE_NOT_UNIT", "/state/vector", f"squared norm {nrm!r}, expected 1")
            state = State.from_matrix(space, np.outer(vector, vector.conj()))
        else:
            mat = _cmat(st["matrix"], "/state/matrix")
            if mat.shape != (n, n):
                raise ScenarioError("DIMENSION_MISMATCH", "/state/matrix", f"shape {mat.shape}, expected ({n}, {n})")
            state = State.from_matrix(space, mat)
    except StateError as exc:
        raise ScenarioError(exc.code, "/state", str(exc)) from None
    return Scenario(space, events, rvs, state, st["kind"], vector)


def _parse_path(doc) -> PathScenario:
    _schema_check(doc, PATH_SCENARIO_SCHEMA)
    m = doc["system"]["dim"]
    steps = []
    for k, rows in enumerate(doc["system"]["steps"]):
        u = _cmat(rows, f"/system/steps/{k}")
        if u.shape != (m, m):
            raise ScenarioError("DIMENSION_MISMATCH", f"/system/steps/{k}", f"shape {u.shape}, expected ({m}, {m})")
        res = unitarity_residual(u)
        if res > UNITARY_TOL:
            raise ScenarioError(NotUnitaryError.code, f"/system/steps/{k}", f"unitarity residual {res:.3e}")
        steps.append(u)
    system = UnitarySystem(steps, dim=m)
    psi = _cvec(doc["psi"])
    if psi.shape[0] != m:
        raise ScenarioError("DIMENSION_MISMATCH", "/psi", f"length {psi.shape[0]}, system has {m} sites")
    if abs(np.linalg.norm(psi) - 1.0) > UNIT_TOL:
        raise ScenarioError("PSI_NOT_UNIT", "/psi", "initial state must be a unit vector")
    horizon = doc["horizon"]
    if horizon > system.num_steps:
        raise ScenarioError("HORIZON", "/horizon", f"horizon {horizon} needs {horizon} steps, got {system.num_steps}")
    scn = PathScenario(system, psi, horizon, dict(doc.get("path_events", {})))
    for name in scn.path_events:
        scn.event(name)
    return scn


def serialize(scenario: Scenario | PathScenario, indent: int | None = 2) -> str:
    return json.dumps(scenario.to_dict(), indent=indent)


def scenarios_equal(a, b) -> bool:
    """Structural equality of parsed scenarios."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Scenario):
        return (
            a.space == b.space
            and a.events.keys() == b.events.keys()
            and all(a.events[k] == b.events[k] for k in a.events)
            and a.random_variables.keys() == b.random_variables.keys()
            and all(np.array_equal(a.random_variables[k], b.random_variables[k]) for k in a.random_variables)
            and a.state_kind == b.state_kind
            and np.array_equal(a.state.matrix, b.state.matrix)
        )
    return (
        np.array_equal(a.system.steps, b.system.steps)
        and np.array_equal(a.psi, b.psi)
        and a.horizon == b.horizon
        and a.path_events == b.path_events
    )
