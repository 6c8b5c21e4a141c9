"""Structural circuit model: typed gates, nets, dual-rail port groups.

A netlist is a feed-forward graph of gates. The C-element (C2) holds state
but is structurally feed-forward in every circuit generated here, so the
gate graph is required to be a DAG.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence


class GateKind(str, Enum):
    BUF = "BUF"
    AND2 = "AND2"
    AND4 = "AND4"
    OR2 = "OR2"
    OR3 = "OR3"
    OR4 = "OR4"
    AO21 = "AO21"   # a*b + c
    AO22 = "AO22"   # a*b + c*d
    AO222 = "AO222"  # a*b + c*d + e*f
    C2 = "C2"       # Muller C-element, 2 inputs


ARITY: dict[GateKind, int] = {
    GateKind.BUF: 1,
    GateKind.AND2: 2,
    GateKind.OR2: 2,
    GateKind.C2: 2,
    GateKind.OR3: 3,
    GateKind.AO21: 3,
    GateKind.AND4: 4,
    GateKind.OR4: 4,
    GateKind.AO22: 4,
    GateKind.AO222: 6,
}


def eval_gate(kind: GateKind, ins: Sequence[int], held: int = 0) -> int:
    """Boolean output of a gate given its input levels.

    `held` is the previous output value, consulted only by C2.
    """
    if len(ins) != ARITY[kind]:
        raise ValueError(f"{kind.value} takes {ARITY[kind]} inputs, got {len(ins)}")
    if kind is GateKind.BUF:
        return ins[0]
    if kind in (GateKind.AND2, GateKind.AND4):
        return int(all(ins))
    if kind in (GateKind.OR2, GateKind.OR3, GateKind.OR4):
        return int(any(ins))
    if kind is GateKind.AO21:
        return int((ins[0] and ins[1]) or ins[2])
    if kind is GateKind.AO22:
        return int((ins[0] and ins[1]) or (ins[2] and ins[3]))
    if kind is GateKind.AO222:
        return int((ins[0] and ins[1]) or (ins[2] and ins[3]) or (ins[4] and ins[5]))
    if kind is GateKind.C2:
        if all(ins):
            return 1
        if not any(ins):
            return 0
        return held
    raise ValueError(f"unknown gate kind {kind!r}")


@dataclass(frozen=True)
class Gate:
    id: str
    kind: GateKind
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class PortGroup:
    """A named dual-rail port (rail1, rail0), or a single wire when rail0 is None."""

    name: str
    rail1: str
    rail0: str | None = None

    @property
    def scalar(self) -> bool:
        return self.rail0 is None

    def rails(self) -> tuple[str, ...]:
        return (self.rail1,) if self.scalar else (self.rail1, self.rail0)


class Netlist:
    """Immutable-after-construction gate graph with named ports."""

    def __init__(
        self,
        name: str,
        gates: Sequence[Gate],
        inputs: Sequence[PortGroup],
        outputs: Sequence[PortGroup],
        ackin: str | None = None,
        ackout: str | None = None,
    ):
        self.name = name
        self.gates: tuple[Gate, ...] = tuple(gates)
        self.inputs: tuple[PortGroup, ...] = tuple(inputs)
        self.outputs: tuple[PortGroup, ...] = tuple(outputs)
        self.ackin = ackin
        self.ackout = ackout
        self._driver: dict[str, Gate] = {}
        for g in self.gates:
            self._driver.setdefault(g.output, g)
        self._fanout: dict[str, list[Gate]] = defaultdict(list)
        for g in self.gates:
            for net in g.inputs:
                self._fanout[net].append(g)

    # -- structure queries ------------------------------------------------

    @property
    def input_nets(self) -> tuple[str, ...]:
        nets = [r for grp in self.inputs for r in grp.rails()]
        if self.ackin is not None:
            nets.append(self.ackin)
        return tuple(nets)

    @property
    def output_nets(self) -> tuple[str, ...]:
        nets = [r for grp in self.outputs for r in grp.rails()]
        if self.ackout is not None:
            nets.append(self.ackout)
        return tuple(nets)

    def all_nets(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for net in self.input_nets:
            seen.setdefault(net)
        for g in self.gates:
            for net in g.inputs:
                seen.setdefault(net)
            seen.setdefault(g.output)
        return tuple(seen)

    def driver_of(self, net: str) -> Gate | None:
        return self._driver.get(net)

    def fanout_of(self, net: str) -> list[Gate]:
        return self._fanout.get(net, [])

    def group(self, name: str, *, output: bool = False) -> PortGroup:
        for grp in (self.outputs if output else self.inputs):
            if grp.name == name:
                return grp
        raise KeyError(f"no {'output' if output else 'input'} group {name!r} in {self.name}")

    def data_input_groups(self) -> tuple[PortGroup, ...]:
        return self.inputs

    # -- checks ------------------------------------------------------------

    def gate_census(self) -> dict[GateKind, int]:
        census = {kind: 0 for kind in GateKind}
        for g in self.gates:
            census[g.kind] += 1
        return census

    def validate(self) -> list[str]:
        """Structural validation report; empty list means the netlist is well formed."""
        report: list[str] = []
        ids: set[str] = set()
        for g in self.gates:
            if g.id in ids:
                report.append(f"duplicate gate id {g.id!r}")
            ids.add(g.id)
            if len(g.inputs) != ARITY[g.kind]:
                report.append(
                    f"gate {g.id!r}: {g.kind.value} takes {ARITY[g.kind]} inputs, got {len(g.inputs)}"
                )

        primary = set(self.input_nets)
        drivers: dict[str, list[str]] = defaultdict(list)
        for g in self.gates:
            drivers[g.output].append(g.id)
        for net, who in drivers.items():
            if len(who) > 1:
                report.append(f"net {net!r} has multiple drivers: {who}")
            if net in primary:
                report.append(f"net {net!r} is both a primary input and driven by {who}")

        for g in self.gates:
            for net in g.inputs:
                if net not in drivers and net not in primary:
                    report.append(f"gate {g.id!r} input net {net!r} has no driver")

        out_nets = set(self.output_nets)
        for grp in list(self.inputs) + list(self.outputs):
            for net in grp.rails():
                if net not in drivers and net not in primary:
                    report.append(f"port group {grp.name!r} references undriven net {net!r}")
        for net in drivers:
            if not self._fanout.get(net) and net not in out_nets:
                report.append(f"net {net!r} dangles: no fanout and not a primary output")

        if self._topo_order() is None:
            report.append("gate graph contains a cycle")
        return report

    def _topo_order(self) -> list[Gate] | None:
        primary = set(self.input_nets)
        indeg: dict[str, int] = {}
        dependents: dict[str, list[Gate]] = defaultdict(list)
        for g in self.gates:
            deps = 0
            for net in g.inputs:
                drv = self._driver.get(net)
                if drv is not None:
                    deps += 1
                    dependents[drv.id].append(g)
                elif net not in primary:
                    pass  # undriven nets are a validate() finding, not a cycle
            indeg[g.id] = deps
        by_id = {g.id: g for g in self.gates}
        ready = deque(sorted(gid for gid, d in indeg.items() if d == 0))
        order: list[Gate] = []
        while ready:
            gid = ready.popleft()
            order.append(by_id[gid])
            for succ in dependents[gid]:
                indeg[succ.id] -= 1
                if indeg[succ.id] == 0:
                    ready.append(succ.id)
        if len(order) != len(self.gates):
            return None
        return order

    def topo_gates(self) -> list[Gate]:
        order = self._topo_order()
        if order is None:
            raise ValueError(f"netlist {self.name!r} contains a cycle")
        return order

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        def grp(g: PortGroup) -> dict:
            return {"group": g.name, "rail1": g.rail1, "rail0": g.rail0}

        doc: dict = {
            "name": self.name,
            "inputs": [grp(g) for g in self.inputs],
            "outputs": [grp(g) for g in self.outputs],
            "gates": [
                {"id": g.id, "kind": g.kind.value, "in": list(g.inputs), "out": g.output}
                for g in self.gates
            ],
        }
        if self.ackin is not None or self.ackout is not None:
            doc["acks"] = {"ackin": self.ackin, "ackout": self.ackout}
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Netlist":
        def grp(d: dict) -> PortGroup:
            return PortGroup(d["group"], d["rail1"], d.get("rail0"))

        acks = doc.get("acks") or {}
        return cls(
            name=doc["name"],
            gates=[
                Gate(d["id"], GateKind(d["kind"]), tuple(d["in"]), d["out"])
                for d in doc["gates"]
            ],
            inputs=[grp(d) for d in doc["inputs"]],
            outputs=[grp(d) for d in doc["outputs"]],
            ackin=acks.get("ackin"),
            ackout=acks.get("ackout"),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Netlist":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def __repr__(self) -> str:
        return f"Netlist({self.name!r}, gates={len(self.gates)}, in={len(self.inputs)}, out={len(self.outputs)})"
