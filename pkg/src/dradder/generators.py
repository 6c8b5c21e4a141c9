"""Circuit generators: early-output SAFA, DAFA, hybrid ripple-carry adder,
completion detector, and the registered handshake stage wrapper.

Naming convention: every gate's output net carries the gate's id, and gate
ids are prefixed per adder stage ("safa3/", "dafa0/"), per register
("reg/<net>"), or per completion detector node ("cd/").
"""

from __future__ import annotations

from dataclasses import dataclass

from .netlist import Gate, GateKind, Netlist, PortGroup

K = GateKind


@dataclass(frozen=True)
class AdderSpec:
    """Hybrid ripple-carry adder configuration: SAFAs cover the low
    `safa_stages` bits, DAFAs cover the remaining bits two at a time."""

    width: int
    safa_stages: int
    redundant_carry: bool = True

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.safa_stages <= self.width:
            raise ValueError(f"safa_stages must be in [0, width], got {self.safa_stages}")
        if (self.width - self.safa_stages) % 2:
            raise ValueError(
                f"width {self.width} minus {self.safa_stages} SAFA bits leaves an odd "
                "number of bits; DAFAs cover bits in pairs"
            )

    @property
    def dafa_stages(self) -> int:
        return (self.width - self.safa_stages) // 2


class _Builder:
    def __init__(self):
        self.gates: list[Gate] = []

    def add(self, gid: str, kind: GateKind, ins: tuple[str, ...]) -> str:
        self.gates.append(Gate(gid, kind, ins, gid))
        return gid


def _emit_safa(b: _Builder, p: str, a1, a0, b1, b0, cin1, cin0):
    """Single-bit early-output full adder; returns (sum1, sum0, cout1, cout0).

    cg1 is the operand-equivalence signal (A == B), cg2 the difference
    signal (A != B); the carry gates reuse those terms.
    """
    cg1 = b.add(f"{p}cg1", K.AO22, (a1, b1, a0, b0))
    cg2 = b.add(f"{p}cg2", K.AO22, (a1, b0, a0, b1))
    cout1 = b.add(f"{p}cg3", K.AO22, (a1, b1, cg2, cin1))
    cout0 = b.add(f"{p}cg4", K.AO22, (a0, b0, cg2, cin0))
    sum1 = b.add(
        f"{p}sum1", K.OR2,
        (b.add(f"{p}sc1", K.C2, (cg2, cin0)), b.add(f"{p}sc2", K.C2, (cg1, cin1))),
    )
    sum0 = b.add(
        f"{p}sum0", K.OR2,
        (b.add(f"{p}sc3", K.C2, (cg2, cin1)), b.add(f"{p}sc4", K.C2, (cg1, cin0))),
    )
    return sum1, sum0, cout1, cout0


def _emit_dafa(b: _Builder, p: str, a11, a10, a01, a00, b11, b10, b01, b00,
               cin1, cin0, redundant: bool):
    """Dual-bit early-output full adder; returns
    (sum11, sum10, sum01, sum00, cout1, cout0).

    The four products where the operand pair sums to three are shared as a
    single carry-propagate signal feeding both carry rails and both
    high-sum rails. The non-redundant carry variant reuses the propagate
    C-elements already present on the sum side, so swapping variants only
    exchanges two AO21 gates for two OR2 gates.
    """
    def and4(gid, w, x, y, z):
        return b.add(f"{p}{gid}", K.AND4, (w, x, y, z))

    # carry-propagate: A + B == 3
    prop = b.add(f"{p}prop", K.OR4, (
        and4("pp0", a10, a00, b11, b01),
        and4("pp1", a11, a00, b10, b01),
        and4("pp2", a10, a01, b11, b00),
        and4("pp3", a11, a01, b10, b00),
    ))
    # carry-generate: A + B >= 4
    gen1 = b.add(f"{p}gen1", K.OR3, (
        and4("g1p0", a10, a01, b11, b01),
        and4("g1p1", a11, a01, b10, b01),
        b.add(f"{p}g1p2", K.AND2, (a11, b11)),
    ))
    # carry-kill: A + B <= 2
    gen0 = b.add(f"{p}gen0", K.OR3, (
        and4("g0p0", a11, a00, b10, b00),
        and4("g0p1", a10, a00, b11, b00),
        b.add(f"{p}g0p2", K.AND2, (a10, b10)),
    ))

    cp1 = b.add(f"{p}cp1", K.C2, (prop, cin1))
    cp0 = b.add(f"{p}cp0", K.C2, (prop, cin0))

    # high sum rail 1: A + B in {2, 6} always, {1, 5} with carry, {3} without
    y1 = b.add(f"{p}y1", K.OR4, (
        and4("y1p0", a11, a00, b11, b01),
        and4("y1p1", a11, a01, b11, b00),
        and4("y1p2", a10, a00, b10, b01),
        and4("y1p3", a10, a01, b10, b00),
    ))
    z1 = b.add(f"{p}z1", K.OR4, (
        and4("z1p0", a10, a01, b10, b01),
        and4("z1p1", a11, a00, b10, b00),
        and4("z1p2", a10, a00, b11, b00),
        and4("z1p3", a11, a01, b11, b01),
    ))
    sum11 = b.add(f"{p}sum11", K.OR3,
                  (cp0, b.add(f"{p}yc1", K.C2, (y1, cin1)), z1))

    y0 = b.add(f"{p}y0", K.OR4, (
        and4("y0p0", a10, a01, b10, b00),
        and4("y0p1", a10, a00, b10, b01),
        and4("y0p2", a11, a01, b11, b00),
        and4("y0p3", a11, a00, b11, b01),
    ))
    z0 = b.add(f"{p}z0", K.OR4, (
        and4("z0p0", a11, a00, b11, b00),
        and4("z0p1", a11, a01, b10, b01),
        and4("z0p2", a10, a01, b11, b01),
        and4("z0p3", a10, a00, b10, b00),
    ))
    sum10 = b.add(f"{p}sum10", K.OR3,
                  (cp1, b.add(f"{p}yc0", K.C2, (y0, cin0)), z0))

    # low-pair sum: same shape as the SAFA sum over (A0, B0, CIN)
    dif = b.add(f"{p}dif", K.AO22, (a01, b00, a00, b01))
    eqv = b.add(f"{p}eqv", K.AO22, (a01, b01, a00, b00))
    sum01 = b.add(
        f"{p}sum01", K.OR2,
        (b.add(f"{p}lc1", K.C2, (dif, cin0)), b.add(f"{p}lc2", K.C2, (eqv, cin1))),
    )
    sum00 = b.add(
        f"{p}sum00", K.OR2,
        (b.add(f"{p}lc3", K.C2, (dif, cin1)), b.add(f"{p}lc4", K.C2, (eqv, cin0))),
    )

    if redundant:
        cout1 = b.add(f"{p}cout1", K.AO21, (prop, cin1, gen1))
        cout0 = b.add(f"{p}cout0", K.AO21, (prop, cin0, gen0))
    else:
        cout1 = b.add(f"{p}cout1", K.OR2, (cp1, gen1))
        cout0 = b.add(f"{p}cout0", K.OR2, (cp0, gen0))
    return sum11, sum10, sum01, sum00, cout1, cout0


def gen_safa() -> Netlist:
    """Standalone single-bit early-output full adder."""
    b = _Builder()
    s1, s0, c1, c0 = _emit_safa(b, "", "a1", "a0", "b1", "b0", "cin1", "cin0")
    return Netlist(
        "safa",
        b.gates,
        inputs=[PortGroup("A", "a1", "a0"), PortGroup("B", "b1", "b0"),
                PortGroup("CIN", "cin1", "cin0")],
        outputs=[PortGroup("SUM", s1, s0), PortGroup("COUT", c1, c0)],
    )


def gen_dafa(redundant: bool = True) -> Netlist:
    """Standalone dual-bit early-output full adder.

    `redundant` selects the carry variant: AO21 carry gates (redundant
    logic) versus OR2 gates over the shared propagate C-elements.
    """
    b = _Builder()
    s11, s10, s01, s00, c1, c0 = _emit_dafa(
        b, "", "a11", "a10", "a01", "a00", "b11", "b10", "b01", "b00",
        "cin1", "cin0", redundant)
    return Netlist(
        "dafa_redundant" if redundant else "dafa_nonredundant",
        b.gates,
        inputs=[PortGroup("A1", "a11", "a10"), PortGroup("A0", "a01", "a00"),
                PortGroup("B1", "b11", "b10"), PortGroup("B0", "b01", "b00"),
                PortGroup("CIN", "cin1", "cin0")],
        outputs=[PortGroup("SUM1", s11, s10), PortGroup("SUM0", s01, s00),
                 PortGroup("COUT2", c1, c0)],
    )


def gen_hybrid_rca(spec: AdderSpec) -> Netlist:
    """Ripple-carry adder: SAFAs at bits 0..s-1, DAFAs above, carry chained.

    Input groups A0..A{n-1}, B0..B{n-1}, CIN; outputs SUM0..SUM{n-1}, COUT.
    The whole-adder carry-in is a live dual-rail port.
    """
    n, s = spec.width, spec.safa_stages
    b = _Builder()
    inputs = []
    for i in range(n):
        inputs.append(PortGroup(f"A{i}", f"a{i}_1", f"a{i}_0"))
    for i in range(n):
        inputs.append(PortGroup(f"B{i}", f"b{i}_1", f"b{i}_0"))
    inputs.append(PortGroup("CIN", "cin_1", "cin_0"))

    sums: list[PortGroup] = []
    carry = ("cin_1", "cin_0")
    for i in range(s):
        s1, s0, c1, c0 = _emit_safa(
            b, f"safa{i}/", f"a{i}_1", f"a{i}_0", f"b{i}_1", f"b{i}_0", *carry)
        sums.append(PortGroup(f"SUM{i}", s1, s0))
        carry = (c1, c0)
    for j in range(spec.dafa_stages):
        lo, hi = s + 2 * j, s + 2 * j + 1
        s11, s10, s01, s00, c1, c0 = _emit_dafa(
            b, f"dafa{j}/",
            f"a{hi}_1", f"a{hi}_0", f"a{lo}_1", f"a{lo}_0",
            f"b{hi}_1", f"b{hi}_0", f"b{lo}_1", f"b{lo}_0",
            *carry, spec.redundant_carry)
        sums.append(PortGroup(f"SUM{lo}", s01, s00))
        sums.append(PortGroup(f"SUM{hi}", s11, s10))
        carry = (c1, c0)

    kind = "red" if spec.redundant_carry else "nonred"
    return Netlist(
        f"rca{n}_s{s}_{kind}",
        b.gates,
        inputs=inputs,
        outputs=sums + [PortGroup("COUT", *carry)],
    )


def _emit_completion_tree(b: _Builder, prefix: str, groups) -> str:
    """OR2 per rail pair, then a balanced binary C2 tree; returns the root net."""
    level = [
        b.add(f"{prefix}or{i}", K.OR2, (grp.rail1, grp.rail0))
        for i, grp in enumerate(groups)
    ]
    depth = 0
    while len(level) > 1:
        nxt = []
        for k in range(0, len(level) - 1, 2):
            nxt.append(b.add(f"{prefix}c{depth}_{k // 2}", K.C2,
                             (level[k], level[k + 1])))
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
        depth += 1
    return level[0]


def gen_completion_detector(pairs: int) -> Netlist:
    """Detector over `pairs` rail pairs: output 1 iff all valid, 0 iff all spacer."""
    if pairs < 1:
        raise ValueError(f"need at least one rail pair, got {pairs}")
    b = _Builder()
    groups = [PortGroup(f"P{i}", f"p{i}_1", f"p{i}_0") for i in range(pairs)]
    root = _emit_completion_tree(b, "cd/", groups)
    return Netlist(f"cd{pairs}", b.gates, inputs=groups,
                   outputs=[PortGroup("DONE", root)])


def gen_stage(fb: Netlist) -> Netlist:
    """Wrap a function block into a 4-phase handshake stage.

    Adds one C2 register per input rail, gated by the `ackin` net (the
    environment supplies the already-inverted successor acknowledge; the
    inverter itself is zero-delay environment logic), and a completion
    detector over the dual-rail outputs driving `ackout`.
    """
    if not fb.inputs or not fb.outputs:
        raise ValueError(f"{fb.name!r} has no dual-rail ports to wrap")
    if any(grp.scalar for grp in list(fb.inputs) + list(fb.outputs)):
        raise ValueError(f"{fb.name!r} has scalar port groups; a stage needs rail pairs")

    b = _Builder()
    ext_inputs = []
    for grp in fb.inputs:
        for rail in grp.rails():
            b.gates.append(Gate(f"reg/{rail}", K.C2, (f"{rail}_d", "ackin"), rail))
        ext_inputs.append(PortGroup(grp.name, f"{grp.rail1}_d", f"{grp.rail0}_d"))
    b.gates.extend(fb.gates)
    ackout = _emit_completion_tree(b, "cd/", fb.outputs)
    return Netlist(
        f"{fb.name}_stage",
        b.gates,
        inputs=ext_inputs,
        outputs=fb.outputs,
        ackin="ackin",
        ackout=ackout,
    )
