"""Built-in scenarios: the gedanken experiments pinned as a golden corpus.

Each builder returns an immutable Scenario bundling a dynamics schedule,
named states and projectors, and certified named families.  Detectors are
two-level subsystems (ready / triggered); a detected photon moves to a
per-channel absorbed basis state so that detection is a basis permutation
and therefore exactly unitary on the fixed joint space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

from .errors import HistQError
from .events import EventExpr, parse_expr, resolve
from .families import Family, family_from_slots, validate_family
from .histories import Dynamics
from .inference import (
    QueryResult,
    UNKNOWN_EVENT,
    cond_prob,
    meaningless,
    prob,
)
from .linalg import (
    HilbertSpace,
    Projector,
    StateVector,
    UnitaryOp,
    basis_permutation_unitary,
    complete_unitary,
    projector_from_state,
    tensor,
)

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Scenario:
    """A named system: dynamics, labeled states/projectors, certified families."""

    name: str
    dynamics: Dynamics
    named_states: Dict[str, StateVector]
    named_projectors: Dict[str, Projector]
    named_families: Dict[str, Family]
    description: str = ""

    def projector(self, label: str) -> Projector:
        return self.named_projectors[label]

    def family(self, label: str, condition: Optional[str] = None) -> Family:
        """Registered family, optionally re-certified under another
        consistency condition."""
        fam = self.named_families[label]
        if condition is None or condition == fam.certificate.condition:
            return fam
        return validate_family(fam.elementary, condition=condition, name=fam.name)

    def expr(self, text: str) -> EventExpr:
        """Parse and resolve a query expression against the projector table.

        Raises KeyError for tokens that name no registered projector.
        """
        return resolve(parse_expr(text), self.named_projectors.__getitem__)

    def query(
        self,
        family_label: str,
        target: str,
        data: Optional[str] = None,
        condition: Optional[str] = None,
    ) -> QueryResult:
        """Evaluate a textual query; unknown event tokens are rejected
        in-band (a condition that names no projector can never be a valid
        quantum event)."""
        fam = self.family(family_label, condition)
        try:
            target_expr = self.expr(target)
            data_expr = self.expr(data) if data is not None else None
        except KeyError as exc:
            return meaningless(
                UNKNOWN_EVENT,
                f"no projector named {exc.args[0]!r} in scenario {self.name}",
                fam,
            )
        if data_expr is None:
            return prob(fam, target_expr)
        return cond_prob(fam, target_expr, data_expr)


def _detector(name: str) -> HilbertSpace:
    """Two-level detector: ready (bare label) / triggered (starred)."""
    return HilbertSpace((name, name + "*"))


def _coarse(factors, which: int, proj: Projector, label: str) -> Projector:
    """Projector acting on one tensor factor, identity elsewhere."""
    parts = [f.identity() for f in factors]
    parts[which] = proj
    return tensor(parts).relabel(label)


# ---------------------------------------------------------------------------
# Beamsplitter with two detectors (three times)
# ---------------------------------------------------------------------------

def build_beamsplitter() -> Scenario:
    """Photon through a 50/50 beamsplitter into channels c and d, each
    monitored by a detector; families F1 (unitary MQS branch), F2 (which
    detector fired), F3 (which channel, coarse events)."""
    photon = HilbertSpace(("a", "c", "d", "c_", "d_"))  # trailing _ = absorbed
    det_c, det_d = _detector("C"), _detector("D")
    space = tensor([photon, det_c, det_d])

    s_photon = photon.state({"c": 1 / SQRT2, "d": 1 / SQRT2})
    u_split = complete_unitary(photon, [(photon.basis_state("a"), s_photon)])
    u1 = tensor([u_split, UnitaryOp(det_c, [[1, 0], [0, 1]]), UnitaryOp(det_d, [[1, 0], [0, 1]])])

    swaps = {}
    for x in ("D", "D*"):
        swaps["c" + "C" + x] = "c_" + "C*" + x
        swaps["c_" + "C*" + x] = "c" + "C" + x
    for y in ("C", "C*"):
        swaps["d" + y + "D"] = "d_" + y + "D*"
        swaps["d_" + y + "D*"] = "d" + y + "D"
    u2 = basis_permutation_unitary(space, swaps)

    dyn = Dynamics(space, ("t0", "t1", "t2"), (u1, u2))

    psi0 = space.basis_state("aCD")
    scd = tensor([s_photon, det_c.basis_state("C"), det_d.basis_state("D")])
    cstar_d = space.basis_state("c_C*D")
    c_dstar = space.basis_state("d_CD*")
    mqs = (1 / SQRT2) * cstar_d + (1 / SQRT2) * c_dstar

    factors = (photon, det_c, det_d)
    projs: Dict[str, Projector] = {
        "Psi0": projector_from_state(psi0, "Psi0"),
        "sCD": projector_from_state(scd, "sCD"),
        "S": projector_from_state(mqs, "S"),
        "CstarD": projector_from_state(cstar_d, "CstarD"),
        "CDstar": projector_from_state(c_dstar, "CDstar"),
        "Cstar": _coarse(factors, 1, projector_from_state(det_c.basis_state("C*")), "Cstar"),
        "Dstar": _coarse(factors, 2, projector_from_state(det_d.basis_state("D*")), "Dstar"),
        "c": _coarse(factors, 0, projector_from_state(photon.basis_state("c")), "c"),
        "d": _coarse(factors, 0, projector_from_state(photon.basis_state("d")), "d"),
        "s": _coarse(factors, 0, projector_from_state(s_photon), "s"),
        "cCD": projector_from_state(space.basis_state("cCD"), "cCD"),
        "dCD": projector_from_state(space.basis_state("dCD"), "dCD"),
    }

    p0 = projs["Psi0"]
    families = {
        "F1": family_from_slots(dyn, p0, [[projs["sCD"]], [projs["S"]]], name="F1"),
        "F2": family_from_slots(
            dyn, p0, [[projs["sCD"]], [projs["CstarD"], projs["CDstar"]]], name="F2"),
        "F3": family_from_slots(
            dyn, p0, [[projs["c"], projs["d"]], [projs["Cstar"], projs["Dstar"]]], name="F3"),
        "F3fine": family_from_slots(
            dyn, p0, [[projs["cCD"], projs["dCD"]], [projs["CstarD"], projs["CDstar"]]],
            name="F3fine"),
    }

    return Scenario(
        name="beamsplitter",
        dynamics=dyn,
        named_states={"Psi0": psi0, "sCD": scd, "S": mqs},
        named_projectors=projs,
        named_families=families,
        description="50/50 beamsplitter, two detectors, three times",
    )


# ---------------------------------------------------------------------------
# Measurement confirmation (boxed system plus external apparatus)
# ---------------------------------------------------------------------------

def build_confirmation(variant: str = "c") -> Scenario:
    """Confirming boxed-system histories with outside detectors.

    Variant "b": holes opened toward detectors C and D; same joint system
    as the beamsplitter scenario, with the boxed channel families E1/E2
    registered alongside the detector-confirmation family.

    Variant "c": mirrors and a second beamsplitter recombine the channels
    with path phases arranged so the a-photon always emerges toward
    detector F; confirms the superposition history.
    """
    if variant == "b":
        base = build_beamsplitter()
        projs = dict(base.named_projectors)
        p0 = projs["Psi0"]
        families = dict(base.named_families)
        # boxed families: channel events with trivial later slot
        families["E1"] = family_from_slots(
            base.dynamics, p0,
            [[projs["c"], projs["d"]], [base.dynamics.space.identity()]], name="E1")
        families["E2"] = family_from_slots(
            base.dynamics, p0,
            [[projs["s"]], [base.dynamics.space.identity()]], name="E2")
        families["E1confirm"] = families["F3"]
        return Scenario(
            name="confirmation-b",
            dynamics=base.dynamics,
            named_states=base.named_states,
            named_projectors=projs,
            named_families=families,
            description="holes opened toward detectors C/D (channel check)",
        )
    if variant != "c":
        raise HistQError(f"unknown confirmation variant {variant!r}")

    photon = HilbertSpace(("a", "c", "d", "e", "f", "e_", "f_"))
    det_e, det_f = _detector("E"), _detector("F")
    space = tensor([photon, det_e, det_f])
    ident2 = UnitaryOp(det_e, [[1, 0], [0, 1]])
    ident2f = UnitaryOp(det_f, [[1, 0], [0, 1]])

    s_photon = photon.state({"c": 1 / SQRT2, "d": 1 / SQRT2})
    u1 = tensor([
        complete_unitary(photon, [(photon.basis_state("a"), s_photon)]),
        ident2, ident2f,
    ])
    # second beamsplitter: phases chosen so the s superposition recombines
    # entirely into channel f
    u2 = tensor([
        complete_unitary(photon, [
            (photon.basis_state("c"), photon.state({"e": 1 / SQRT2, "f": 1 / SQRT2})),
            (photon.basis_state("d"), photon.state({"e": -1 / SQRT2, "f": 1 / SQRT2})),
        ]),
        ident2, ident2f,
    ])
    swaps = {}
    for y in ("F", "F*"):
        swaps["e" + "E" + y] = "e_" + "E*" + y
        swaps["e_" + "E*" + y] = "e" + "E" + y
    for x in ("E", "E*"):
        swaps["f" + x + "F"] = "f_" + x + "F*"
        swaps["f_" + x + "F*"] = "f" + x + "F"
    u3 = basis_permutation_unitary(space, swaps)

    dyn = Dynamics(space, ("t0", "t1", "t2", "t3"), (u1, u2, u3))
    psi0 = space.basis_state("aEF")
    factors = (photon, det_e, det_f)
    projs = {
        "Psi0": projector_from_state(psi0, "Psi0"),
        "s": _coarse(factors, 0, projector_from_state(s_photon), "s"),
        "c": _coarse(factors, 0, projector_from_state(photon.basis_state("c")), "c"),
        "d": _coarse(factors, 0, projector_from_state(photon.basis_state("d")), "d"),
        "f": _coarse(factors, 0, projector_from_state(photon.basis_state("f")), "f"),
        "e": _coarse(factors, 0, projector_from_state(photon.basis_state("e")), "e"),
        "Estar": _coarse(factors, 1, projector_from_state(det_e.basis_state("E*")), "Estar"),
        "Fstar": _coarse(factors, 2, projector_from_state(det_f.basis_state("F*")), "Fstar"),
    }
    p0 = projs["Psi0"]
    eye = space.identity()
    families = {
        "E1": family_from_slots(dyn, p0, [[projs["c"], projs["d"]], [eye], [eye]], name="E1"),
        "E2": family_from_slots(dyn, p0, [[projs["s"]], [eye], [eye]], name="E2"),
        "confirm": family_from_slots(
            dyn, p0, [[projs["s"]], [eye], [projs["Estar"], projs["Fstar"]]], name="confirm"),
    }
    return Scenario(
        name="confirmation-c",
        dynamics=dyn,
        named_states={"Psi0": psi0},
        named_projectors=projs,
        named_families=families,
        description="mirrors plus second beamsplitter recombining into f",
    )


# ---------------------------------------------------------------------------
# Three-state system with trivial dynamics (contrary-inference example)
# ---------------------------------------------------------------------------

def build_av() -> Scenario:
    """Three basis states with trivial dynamics; the two probability-one
    inferences to orthogonal intermediate events live in families that
    commute everywhere yet fail the consistency conditions jointly."""
    space = HilbertSpace(("A", "B", "C"))
    phi = space.state({"A": 1 / SQRT3, "B": 1 / SQRT3, "C": 1 / SQRT3})
    psi = space.state({"A": 1 / SQRT3, "B": 1 / SQRT3, "C": -1 / SQRT3})
    eye = UnitaryOp(space, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    dyn = Dynamics(space, ("t0", "t1", "t2"), (eye, eye))

    projs = {
        "Phi": projector_from_state(phi, "Phi"),
        "Psi": projector_from_state(psi, "Psi"),
        "A": space.projector_onto_labels(["A"]).relabel("A"),
        "B": space.projector_onto_labels(["B"]).relabel("B"),
        "C": space.projector_onto_labels(["C"]).relabel("C"),
    }
    p0 = projs["Phi"]
    families = {
        "calA": family_from_slots(dyn, p0, [[projs["A"]], [projs["Psi"]]], name="calA"),
        "calB": family_from_slots(dyn, p0, [[projs["B"]], [projs["Psi"]]], name="calB"),
    }
    return Scenario(
        name="av",
        dynamics=dyn,
        named_states={"Phi": phi, "Psi": psi},
        named_projectors=projs,
        named_families=families,
        description="three-state system, trivial dynamics",
    )


# ---------------------------------------------------------------------------
# Three-channel beamsplitter with three detectors (two times)
# ---------------------------------------------------------------------------

def build_three_channel() -> Scenario:
    """Beamsplitter into channels c, d, e with one detector each; families
    D1 (all detectors) and D2 (MQS of the c/d outcomes versus detector E)."""
    photon = HilbertSpace(("a", "c", "d", "e", "c_", "d_", "e_"))
    det_c, det_d, det_e = _detector("C"), _detector("D"), _detector("E")
    space = tensor([photon, det_c, det_d, det_e])

    spread = photon.state({"c": 1 / SQRT3, "d": 1 / SQRT3, "e": 1 / SQRT3})
    u_split = tensor([
        complete_unitary(photon, [(photon.basis_state("a"), spread)]),
        UnitaryOp(det_c, [[1, 0], [0, 1]]),
        UnitaryOp(det_d, [[1, 0], [0, 1]]),
        UnitaryOp(det_e, [[1, 0], [0, 1]]),
    ])
    swaps = {}
    for x in ("D", "D*"):
        for y in ("E", "E*"):
            swaps["cC" + x + y] = "c_C*" + x + y
            swaps["c_C*" + x + y] = "cC" + x + y
    for x in ("C", "C*"):
        for y in ("E", "E*"):
            swaps["d" + x + "D" + y] = "d_" + x + "D*" + y
            swaps["d_" + x + "D*" + y] = "d" + x + "D" + y
    for x in ("C", "C*"):
        for y in ("D", "D*"):
            swaps["e" + x + y + "E"] = "e_" + x + y + "E*"
            swaps["e_" + x + y + "E*"] = "e" + x + y + "E"
    u_detect = basis_permutation_unitary(space, swaps)
    step = u_split.then(u_detect)

    # the registered families involve only the initial and final times
    dyn = Dynamics(space, ("t0", "t2"), (step,))

    psi0 = space.basis_state("aCDE")
    fired_c = space.basis_state("c_C*DE")
    fired_d = space.basis_state("d_CD*E")
    fired_e = space.basis_state("e_CDE*")
    mqs_se = (1 / SQRT2) * fired_c + (1 / SQRT2) * fired_d

    projs = {
        "Psi0": projector_from_state(psi0, "Psi0"),
        "CstarDE": projector_from_state(fired_c, "CstarDE"),
        "CDstarE": projector_from_state(fired_d, "CDstarE"),
        "CDEstar": projector_from_state(fired_e, "CDEstar"),
        "SE": projector_from_state(mqs_se, "SE"),
    }
    p0 = projs["Psi0"]
    families = {
        "D1": family_from_slots(
            dyn, p0, [[projs["CstarDE"], projs["CDstarE"], projs["CDEstar"]]], name="D1"),
        "D2": family_from_slots(dyn, p0, [[projs["SE"], projs["CDEstar"]]], name="D2"),
    }
    return Scenario(
        name="three-channel",
        dynamics=dyn,
        named_states={"Psi0": psi0, "SE": mqs_se},
        named_projectors=projs,
        named_families=families,
        description="three exit channels, three detectors, two times",
    )


# ---------------------------------------------------------------------------
# Spin half (single later time)
# ---------------------------------------------------------------------------

def build_spin_half() -> Scenario:
    """Two-dimensional space: incompatible single-time frameworks for the
    z and x spin components."""
    space = HilbertSpace(("z+", "z-"))
    eye = UnitaryOp(space, [[1, 0], [0, 1]])
    dyn = Dynamics(space, ("t0", "t1"), (eye,))

    xplus = space.state({"z+": 1 / SQRT2, "z-": 1 / SQRT2})
    xminus = space.state({"z+": 1 / SQRT2, "z-": -1 / SQRT2})
    projs = {
        "Zplus": space.projector_onto_labels(["z+"]).relabel("Zplus"),
        "Zminus": space.projector_onto_labels(["z-"]).relabel("Zminus"),
        "Xplus": projector_from_state(xplus, "Xplus"),
        "Xminus": projector_from_state(xminus, "Xminus"),
    }
    p0 = space.identity()
    families = {
        "Z": family_from_slots(dyn, p0, [[projs["Zplus"], projs["Zminus"]]], name="Z"),
        "X": family_from_slots(dyn, p0, [[projs["Xplus"], projs["Xminus"]]], name="X"),
    }
    return Scenario(
        name="spin-half",
        dynamics=dyn,
        named_states={"Xplus": xplus, "Xminus": xminus},
        named_projectors=projs,
        named_families=families,
        description="spin half, one later time, z versus x frameworks",
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

BUILTIN_BUILDERS: Dict[str, Callable[[], Scenario]] = {
    "beamsplitter": build_beamsplitter,
    "confirmation-b": lambda: build_confirmation("b"),
    "confirmation-c": lambda: build_confirmation("c"),
    "av": build_av,
    "three-channel": build_three_channel,
    "spin-half": build_spin_half,
}


def get_builtin(name: str) -> Scenario:
    try:
        return BUILTIN_BUILDERS[name]()
    except KeyError:
        raise HistQError(
            f"unknown scenario {name!r}; built-ins: {sorted(BUILTIN_BUILDERS)}")
