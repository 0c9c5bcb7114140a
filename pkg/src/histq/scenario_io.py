"""Declarative scenario documents (YAML).

A document declares basis-labeled spaces, a factor order for the joint
space, states as amplitude maps, step unitaries (partial maps, basis
permutations, or literal matrices), projectors (from states, basis
subsets, sums, complements, or literal matrices), families (per-slot event
lists, auto-completed, or explicit history chains), and named queries.

Amplitudes parse as exact rationals with an optional 1/sqrt(k) factor
("1/2", "-1/sqrt3", "2/3/sqrt2") or as decimal complex pairs ("0.5+0.5j").

The format is versioned; documents must carry `histq_scenario: 1`.
"""

from __future__ import annotations

import math
import re
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import yaml

from .errors import ScenarioFileError
from .families import Family, family_from_slots, validate_family
from .histories import Dynamics, History
from .linalg import (
    HilbertSpace,
    Projector,
    StateVector,
    UnitaryOp,
    basis_permutation_unitary,
    complete_unitary,
    projector_from_state,
    projector_sum,
    complement,
    tensor,
)
from .scenarios import Scenario

FORMAT_VERSION = 1

_RATIONAL = re.compile(
    r"^\s*([+-]?)(\d+)(?:\s*/\s*(\d+))?(?:\s*/\s*sqrt\(?(\d+)\)?)?\s*$")


def parse_amplitude(value: Union[str, int, float]) -> complex:
    """Exact rational with optional 1/sqrt(k), or a decimal complex pair."""
    if isinstance(value, (int, float)):
        return complex(value)
    text = str(value).strip()
    m = _RATIONAL.match(text)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2))
        den = float(m.group(3)) if m.group(3) else 1.0
        root = math.sqrt(float(m.group(4))) if m.group(4) else 1.0
        return complex(sign * num / (den * root))
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ScenarioFileError(f"cannot parse amplitude {value!r}")


def format_amplitude(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _parse_matrix(rows, dim: int, where: str) -> np.ndarray:
    m = np.array([[parse_amplitude(x) for x in row] for row in rows], dtype=complex)
    if m.shape != (dim, dim):
        raise ScenarioFileError(f"matrix shape {m.shape} != ({dim},{dim})", where)
    return m


def _format_matrix(m: np.ndarray) -> List[List[str]]:
    return [[format_amplitude(x) for x in row] for row in m]


class _Loader:
    def __init__(self, doc: dict):
        self.doc = doc
        self.spaces: Dict[str, HilbertSpace] = {}
        self.space: Optional[HilbertSpace] = None
        self.states: Dict[str, StateVector] = {}
        self.projectors: Dict[str, Projector] = {}
        self.families: Dict[str, Family] = {}
        self.queries: Dict[str, dict] = {}

    def run(self) -> Tuple[Scenario, Dict[str, dict]]:
        doc = self.doc
        if doc.get("histq_scenario") != FORMAT_VERSION:
            raise ScenarioFileError(
                f"missing or unsupported histq_scenario version "
                f"(expected {FORMAT_VERSION})")
        name = doc.get("name", "unnamed")
        self._load_spaces(doc.get("spaces", {}))
        self._load_joint(doc.get("factors"))
        for label, amps in (doc.get("states") or {}).items():
            self.states[label] = self._state(amps, f"states.{label}")
        dyn = self._load_dynamics(doc)
        for label, spec in (doc.get("projectors") or {}).items():
            self.projectors[label] = self._projector(spec, label)
        for label, spec in (doc.get("families") or {}).items():
            self.families[label] = self._family(dyn, spec, label)
        for label, spec in (doc.get("queries") or {}).items():
            if "family" not in spec or "target" not in spec:
                raise ScenarioFileError("query needs family and target", f"queries.{label}")
            self.queries[label] = dict(spec)
        scenario = Scenario(
            name=name,
            dynamics=dyn,
            named_states=self.states,
            named_projectors=self.projectors,
            named_families=self.families,
            description=doc.get("description", ""),
        )
        return scenario, self.queries

    # -- sections ----------------------------------------------------------

    def _load_spaces(self, spaces: dict) -> None:
        if not spaces:
            raise ScenarioFileError("document declares no spaces")
        for name, spec in spaces.items():
            labels = spec.get("labels") if isinstance(spec, dict) else spec
            if not labels:
                raise ScenarioFileError("space needs a labels list", f"spaces.{name}")
            self.spaces[name] = HilbertSpace(tuple(str(x) for x in labels))

    def _load_joint(self, factors) -> None:
        if factors is None:
            if len(self.spaces) != 1:
                raise ScenarioFileError(
                    "multiple spaces declared; a factors list is required")
            self.space = next(iter(self.spaces.values()))
            return
        try:
            parts = [self.spaces[f] for f in factors]
        except KeyError as exc:
            raise ScenarioFileError(f"unknown space {exc.args[0]!r}", "factors")
        self.space = parts[0] if len(parts) == 1 else tensor(parts)

    def _state(self, amps, where: str) -> StateVector:
        if isinstance(amps, str):
            if amps not in self.states:
                raise ScenarioFileError(f"unknown state {amps!r}", where)
            return self.states[amps]
        if not isinstance(amps, dict):
            raise ScenarioFileError("state must be an amplitude map", where)
        try:
            return self.space.state({k: parse_amplitude(v) for k, v in amps.items()})
        except KeyError as exc:
            raise ScenarioFileError(f"unknown basis label {exc.args[0]}", where)

    def _load_dynamics(self, doc: dict) -> Dynamics:
        times = doc.get("times")
        steps = doc.get("steps", [])
        if not times or len(times) < 2:
            raise ScenarioFileError("at least two times are required")
        if len(steps) != len(times) - 1:
            raise ScenarioFileError(
                f"{len(times)} times require {len(times) - 1} steps, got {len(steps)}")
        unitaries = []
        for i, spec in enumerate(steps):
            where = f"steps[{i}]"
            if "matrix" in spec:
                unitaries.append(
                    UnitaryOp(self.space, _parse_matrix(spec["matrix"], self.space.dim, where)))
            elif "permutation" in spec:
                unitaries.append(
                    basis_permutation_unitary(self.space, dict(spec["permutation"])))
            elif "map" in spec:
                pairs = []
                for src, dst in spec["map"].items():
                    src_vec = (self.states[src] if src in self.states
                               else self.space.basis_state(src))
                    pairs.append((src_vec, self._state(dst, where)))
                unitaries.append(complete_unitary(self.space, pairs))
            else:
                raise ScenarioFileError("step needs matrix, permutation, or map", where)
        return Dynamics(self.space, tuple(str(t) for t in times), tuple(unitaries))

    def _projector(self, spec, label: str) -> Projector:
        where = f"projectors.{label}"
        if not isinstance(spec, dict):
            raise ScenarioFileError("projector spec must be a mapping", where)
        if "state" in spec:
            return projector_from_state(self._state(spec["state"], where), label)
        if "basis" in spec:
            try:
                return self.space.projector_onto_labels(spec["basis"]).relabel(label)
            except KeyError as exc:
                raise ScenarioFileError(f"unknown basis label {exc.args[0]}", where)
        if "sum" in spec:
            parts = [self._ref_projector(p, where) for p in spec["sum"]]
            return projector_sum(parts, label)
        if "complement" in spec:
            return complement(self._ref_projector(spec["complement"], where)).relabel(label)
        if "matrix" in spec:
            return Projector(
                self.space, _parse_matrix(spec["matrix"], self.space.dim, where), label)
        raise ScenarioFileError(
            "projector needs one of state/basis/sum/complement/matrix", where)

    def _ref_projector(self, name: str, where: str) -> Projector:
        if name == "I":
            return self.space.identity()
        if name not in self.projectors:
            raise ScenarioFileError(f"unknown projector {name!r}", where)
        return self.projectors[name]

    def _family(self, dyn: Dynamics, spec: dict, label: str) -> Family:
        where = f"families.{label}"
        if "initial" not in spec:
            raise ScenarioFileError("family needs an initial projector", where)
        initial = self._ref_projector(spec["initial"], where)
        condition = spec.get("condition", "medium")
        if "slots" in spec:
            slots = [
                [self._ref_projector(p, where) for p in slot] for slot in spec["slots"]
            ]
            return family_from_slots(dyn, initial, slots, condition=condition, name=label)
        if "histories" in spec:
            histories = [
                History(dyn, initial,
                        tuple(self._ref_projector(p, where) for p in chain))
                for chain in spec["histories"]
            ]
            return validate_family(histories, condition=condition, name=label)
        raise ScenarioFileError("family needs slots or histories", where)


def load_scenario(source: Union[str, dict]) -> Tuple[Scenario, Dict[str, dict]]:
    """Parse a scenario document (YAML text or a pre-parsed mapping).

    Returns the scenario and its named queries.
    """
    if isinstance(source, str):
        try:
            doc = yaml.safe_load(source)
        except yaml.YAMLError as exc:
            raise ScenarioFileError(f"invalid YAML: {exc}")
    else:
        doc = source
    if not isinstance(doc, dict):
        raise ScenarioFileError("document root must be a mapping")
    return _Loader(doc).run()


def export_scenario(scenario: Scenario) -> str:
    """Serialize a scenario so that loading it reproduces every query answer.

    Step unitaries and projectors are emitted as literal matrices; family
    sample spaces are emitted as explicit history chains referencing
    (generated) projector entries.
    """
    space = scenario.dynamics.space
    doc: dict = {
        "histq_scenario": FORMAT_VERSION,
        "name": scenario.name,
        "description": scenario.description,
        "spaces": {"joint": {"labels": list(space.basis_labels)}},
        "factors": ["joint"],
        "times": list(scenario.dynamics.times),
        "steps": [{"matrix": _format_matrix(u.matrix)} for u in scenario.dynamics.step_unitaries],
        "states": {
            label: {
                bl: format_amplitude(a)
                for bl, a in zip(space.basis_labels, v.amplitudes)
                if abs(a) > 0
            }
            for label, v in scenario.named_states.items()
        },
    }

    projectors: dict = {}
    names: List[Tuple[Projector, str]] = []

    def register(p: Projector, hint: str) -> str:
        for q, name in names:
            if p.approx_equal(q):
                return name
        name = hint
        k = 2
        while name in projectors:
            name = f"{hint}_{k}"
            k += 1
        projectors[name] = {"matrix": _format_matrix(p.matrix)}
        names.append((p, name))
        return name

    for label, p in scenario.named_projectors.items():
        projectors[label] = {"matrix": _format_matrix(p.matrix)}
        names.append((p, label))

    families: dict = {}
    for label, fam in scenario.named_families.items():
        chains = []
        for h in fam.elementary:
            chains.append([
                register(ev, f"{label}_{t}_{ev.label or 'p'}")
                for ev, t in zip(h.events, fam.times[1:])
            ])
        families[label] = {
            "initial": register(fam.initial, f"{label}_initial"),
            "condition": fam.certificate.condition,
            "histories": chains,
        }

    doc["projectors"] = projectors
    doc["families"] = families
    doc["queries"] = {}
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
