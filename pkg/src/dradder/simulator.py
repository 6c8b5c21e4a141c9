"""Deterministic event-driven simulation under a per-gate-kind delay table.

The model is transport delay with integer time units: every input change
schedules a re-evaluation of the driven gates, and a gate schedules its new
output value one gate delay later. Identical-value writes are suppressed.
The generated circuits are monotone per handshake phase, so no inertial
filtering is needed; a monitor asserts the monotonicity instead.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .netlist import ARITY, GateKind, Netlist, eval_gate

DEFAULT_SEED = 1011
DEFAULT_MAX_EVENTS = 10_000_000


class SimulationLimitError(RuntimeError):
    """Event budget exceeded; indicates a runaway oscillation."""


@dataclass
class DelayTable:
    """Propagation delay per gate kind, in integer time units."""

    delays: dict[GateKind, int]
    time_unit: str = "ps"

    def __post_init__(self):
        for kind in GateKind:
            if kind not in self.delays:
                raise ValueError(f"delay table is missing {kind.value}")
            d = self.delays[kind]
            if d < 0 or (d < 1 and kind is not GateKind.BUF):
                raise ValueError(f"bad delay for {kind.value}: {d}")

    def __getitem__(self, kind: GateKind) -> int:
        return self.delays[kind]

    @classmethod
    def unit(cls) -> "DelayTable":
        """All gates one time unit, buffers zero."""
        return cls({k: (0 if k is GateKind.BUF else 1) for k in GateKind})

    @classmethod
    def from_mapping(cls, doc: dict) -> "DelayTable":
        unit = doc.get("time_unit", "ps")
        delays = {GateKind(k): int(v) for k, v in doc.items() if k != "time_unit"}
        return cls(delays, unit)

    def to_mapping(self) -> dict:
        doc: dict = {k.value: v for k, v in self.delays.items()}
        doc["time_unit"] = self.time_unit
        return doc

    @classmethod
    def load(cls, path) -> "DelayTable":
        with open(path) as fh:
            return cls.from_mapping(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_mapping(), fh, indent=2)
            fh.write("\n")


@dataclass
class TransactionLog:
    """Record of one 4-phase data transaction on a netlist."""

    transitions: dict[str, list[tuple[int, int]]]
    input_apply: dict[str, int]
    output_valid: dict[str, int | None]
    latency: int | None
    rtz_complete: bool
    illegal_seen: bool
    monotonic: bool
    final_levels: dict[str, int]
    events: int
    set_end: int


class _Sim:
    """Single-run simulator core: an event heap over net levels."""

    def __init__(self, netlist: Netlist, delays: DelayTable,
                 max_events: int = DEFAULT_MAX_EVENTS):
        self.netlist = netlist
        self.delays = delays
        self.max_events = max_events
        self.levels: dict[str, int] = {}
        self.pending: dict[str, int] = {}
        self.heap: list[tuple[int, int, str, int]] = []
        self.seq = 0
        self.now = 0
        self.events = 0
        self.transitions: dict[str, list[tuple[int, int]]] = {}
        self.illegal_seen = False
        self.monotonic = True
        self.direction = 0  # +1 set phase, -1 reset phase, 0 unmonitored
        # pair partner map for illegal-state monitoring on port groups
        self.partner: dict[str, str] = {}
        for grp in list(netlist.inputs) + list(netlist.outputs):
            if not grp.scalar:
                self.partner[grp.rail1] = grp.rail0
                self.partner[grp.rail0] = grp.rail1

    def level(self, net: str) -> int:
        return self.levels.get(net, 0)

    def drive(self, net: str, value: int, time: int) -> None:
        if self.pending.get(net, 0) != value:
            self._schedule(net, value, time)

    def _schedule(self, net: str, value: int, time: int) -> None:
        heapq.heappush(self.heap, (time, self.seq, net, value))
        self.seq += 1
        self.pending[net] = value

    def run(self) -> int:
        """Process events until the queue is empty; returns the last event time."""
        levels = self.levels
        while self.heap:
            time, _, net, value = heapq.heappop(self.heap)
            if levels.get(net, 0) == value:
                continue
            self.events += 1
            if self.events > self.max_events:
                raise SimulationLimitError(
                    f"{self.events} events exceed the {self.max_events} budget")
            self.now = time
            levels[net] = value
            self.transitions.setdefault(net, []).append((time, value))
            if self.direction and (value - (1 - value)) * self.direction < 0:
                self.monotonic = False
            other = self.partner.get(net)
            if other is not None and value and levels.get(other, 0):
                self.illegal_seen = True
            for gate in self.netlist.fanout_of(net):
                ins = tuple(levels.get(x, 0) for x in gate.inputs)
                out = gate.output
                new = eval_gate(gate.kind, ins, held=self.pending.get(out, 0))
                if new != self.pending.get(out, 0):
                    self._schedule(out, new, time + self.delays[gate.kind])
        return self.now

    # -- decoding helpers --------------------------------------------------

    def group_valid(self, grp) -> bool:
        if grp.scalar:
            return self.level(grp.rail1) == 1
        return self.level(grp.rail1) + self.level(grp.rail0) == 1

    def group_spacer(self, grp) -> bool:
        return all(self.level(r) == 0 for r in grp.rails())

    def group_validity_time(self, grp) -> int | None:
        """Time the group last entered a valid codeword, if currently valid."""
        if not self.group_valid(grp):
            return None
        times = []
        for rail in grp.rails():
            trans = self.transitions.get(rail)
            if trans:
                times.append(trans[-1][0])
        return max(times) if times else None


def _apply_vector(sim: _Sim, netlist: Netlist, inputs) -> dict[str, int]:
    applied: dict[str, int] = {}
    for group_name, value, t in inputs:
        grp = netlist.group(group_name)
        if grp.scalar:
            sim.drive(grp.rail1, value, t)
        else:
            sim.drive(grp.rail1, value, t)
            sim.drive(grp.rail0, 1 - value, t)
        applied[group_name] = t
    return applied


def _reset_inputs(sim: _Sim, netlist: Netlist, t: int) -> None:
    for grp in netlist.inputs:
        for rail in grp.rails():
            sim.drive(rail, 0, t)
    if netlist.ackin is not None:
        sim.drive(netlist.ackin, 0, t)


def simulate_transaction(
    netlist: Netlist,
    delays: DelayTable,
    inputs: Sequence[tuple[str, int, int]],
    *,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> TransactionLog:
    """Run one full 4-phase transaction: apply the given input values at
    their apply times, run to quiescence, then apply the spacer everywhere
    and run the return-to-zero phase to quiescence.

    `inputs` is a list of (group name, bit value, apply time). Input groups
    not listed stay at spacer. The netlist starts all-zero; for a handshake
    stage the ackin net is driven high at t=0 and low with the spacer.
    """
    sim = _Sim(netlist, delays, max_events)
    if netlist.ackin is not None:
        sim.drive(netlist.ackin, 1, 0)
    sim.direction = +1
    input_apply = _apply_vector(sim, netlist, inputs)
    set_end = sim.run()

    output_valid = {grp.name: sim.group_validity_time(grp) for grp in netlist.outputs}
    latency = None
    if input_apply and all(t is not None for t in output_valid.values()):
        latency = max(output_valid.values()) - min(input_apply.values())

    sim.direction = -1
    _reset_inputs(sim, netlist, set_end + 1)
    sim.run()
    final = {net: sim.level(net) for net in sim.transitions}

    return TransactionLog(
        transitions=sim.transitions,
        input_apply=input_apply,
        output_valid=output_valid,
        latency=latency,
        rtz_complete=all(v == 0 for v in final.values()),
        illegal_seen=sim.illegal_seen,
        monotonic=sim.monotonic,
        final_levels=final,
        events=sim.events,
        set_end=set_end,
    )


def check_rtz_complete(log: TransactionLog, netlist: Netlist) -> bool:
    """True iff every net that transitioned is back at 0 at the end."""
    return all(level == 0 for level in log.final_levels.values())


def random_vectors(netlist: Netlist, count: int, seed: int = DEFAULT_SEED) -> list[dict[str, int]]:
    rng = random.Random(seed)
    groups = [grp.name for grp in netlist.inputs]
    return [{g: rng.randint(0, 1) for g in groups} for _ in range(count)]


@dataclass
class ProtocolSummary:
    transactions: int = 0
    completed: int = 0
    illegal_states: int = 0
    rtz_failures: int = 0
    deadlocks: list[tuple[int, tuple[str, ...]]] = field(default_factory=list)


def run_protocol(
    stage: Netlist,
    delays: DelayTable,
    vectors: Sequence[dict[str, int]] | int,
    *,
    seed: int = DEFAULT_SEED,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> tuple[list[TransactionLog], ProtocolSummary]:
    """Drive a handshake stage through one 4-phase cycle per vector.

    Each cycle: valid data in, wait for ackout high, spacer in, wait for
    ackout low. A quiescent set phase without ackout rising (or a reset
    phase without it falling) is a deadlock; the blocking output pairs are
    reported.
    """
    if stage.ackout is None or stage.ackin is None:
        raise ValueError(f"{stage.name!r} has no handshake ports; wrap it with gen_stage")
    if isinstance(vectors, int):
        vectors = random_vectors(stage, vectors, seed)

    logs: list[TransactionLog] = []
    summary = ProtocolSummary()
    for idx, vec in enumerate(vectors):
        summary.transactions += 1
        inputs = [(grp.name, vec[grp.name], 0) for grp in stage.inputs]
        log = simulate_transaction(stage, delays, inputs, max_events=max_events)
        logs.append(log)

        ack_trans = log.transitions.get(stage.ackout, [])
        rose = any(t <= log.set_end and v == 1 for t, v in ack_trans)
        fell = log.final_levels.get(stage.ackout, 0) == 0
        if not (rose and fell):
            blocking = tuple(n for n, t in log.output_valid.items() if t is None)
            summary.deadlocks.append((idx, blocking))
            continue
        summary.completed += 1
        if log.illegal_seen:
            summary.illegal_states += 1
        if not log.rtz_complete:
            summary.rtz_failures += 1
    return logs, summary


@dataclass
class IndicationReport:
    classification: str  # "strong" | "weak" | "early"
    trials: int
    early_set_witnesses: list[dict]
    full_early_set_witnesses: list[dict]
    early_reset_witnesses: list[dict]
    note: str


def classify_indication(
    fb: Netlist,
    delays: DelayTable,
    trials: int,
    seed: int = DEFAULT_SEED,
    *,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> IndicationReport:
    """Probe the input-output timing class of a function block.

    Each trial delays one randomly chosen input pair far beyond settling,
    during both the set and the reset phase, and watches the outputs.
    Classified "early" when either every output turns valid before the
    delayed input ever arrives, or at least one output turns valid early
    and the block also resets all outputs before the delayed spacer (early
    reset). "strong" when no output moves early in any trial and no early
    reset is seen; "weak" otherwise.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = random.Random(seed)
    groups = list(fb.inputs)
    if len(groups) < 2:
        raise ValueError("classification needs at least two input pairs")

    early_set: list[dict] = []
    full_early_set: list[dict] = []
    early_reset: list[dict] = []

    for trial in range(trials):
        vec = {grp.name: rng.randint(0, 1) for grp in groups}
        delayed = rng.choice(groups)

        sim = _Sim(fb, delays, max_events)
        if fb.ackin is not None:
            sim.drive(fb.ackin, 1, 0)
        _apply_vector(sim, fb, [(g.name, vec[g.name], 0)
                                for g in groups if g.name != delayed.name])
        sim.run()
        valid_early = [g.name for g in fb.outputs if sim.group_valid(g)]
        if valid_early:
            witness = {"trial": trial, "delayed": delayed.name, "vector": dict(vec),
                       "outputs_valid_early": valid_early}
            early_set.append(witness)
            if len(valid_early) == len(fb.outputs):
                full_early_set.append(witness)

        _apply_vector(sim, fb, [(delayed.name, vec[delayed.name], sim.now + 1)])
        sim.run()

        # reset phase: spacer everywhere except the delayed pair
        t = sim.now + 1
        for grp in groups:
            if grp.name != delayed.name:
                for rail in grp.rails():
                    sim.drive(rail, 0, t)
        sim.run()
        if all(sim.group_spacer(g) for g in fb.outputs):
            early_reset.append({"trial": trial, "delayed": delayed.name,
                                "vector": dict(vec)})
        for rail in delayed.rails():
            sim.drive(rail, 0, sim.now + 1)
        if fb.ackin is not None:
            sim.drive(fb.ackin, 0, sim.now + 1)
        sim.run()

    if full_early_set or (early_set and early_reset):
        cls = "early"
    elif not early_set and not early_reset:
        cls = "strong"
    else:
        cls = "weak"
    note = (f"{trials} randomized skew trials (seed-driven); a 'strong' verdict is "
            f"statistical evidence over the sampled vectors, not a proof")
    return IndicationReport(cls, trials, early_set, full_early_set, early_reset, note)


def dump_waveform(log: TransactionLog, fh: TextIO, *, header: str | None = None) -> None:
    """Write per-net transitions as 'time net level' lines, time-sorted."""
    if header:
        fh.write(f"# {header}\n")
    rows = [(t, net, v) for net, trans in log.transitions.items() for t, v in trans]
    for t, net, v in sorted(rows):
        fh.write(f"{t} {net} {v}\n")
