import itertools

import pytest

from dradder.netlist import ARITY, Gate, GateKind, Netlist, PortGroup, eval_gate


def test_arity_table():
    assert ARITY[GateKind.BUF] == 1
    assert ARITY[GateKind.AND2] == ARITY[GateKind.OR2] == ARITY[GateKind.C2] == 2
    assert ARITY[GateKind.OR3] == ARITY[GateKind.AO21] == 3
    assert ARITY[GateKind.AND4] == ARITY[GateKind.OR4] == ARITY[GateKind.AO22] == 4
    assert ARITY[GateKind.AO222] == 6


def test_eval_combinational_gates():
    assert eval_gate(GateKind.BUF, [1]) == 1
    assert eval_gate(GateKind.AND2, [1, 0]) == 0
    assert eval_gate(GateKind.OR2, [1, 0]) == 1
    assert eval_gate(GateKind.AND4, [1, 1, 1, 1]) == 1
    assert eval_gate(GateKind.AND4, [1, 1, 0, 1]) == 0
    assert eval_gate(GateKind.OR4, [0, 0, 0, 0]) == 0
    # AO21(a, b, c) = a*b + c
    assert eval_gate(GateKind.AO21, [1, 1, 0]) == 1
    assert eval_gate(GateKind.AO21, [1, 0, 0]) == 0
    assert eval_gate(GateKind.AO21, [0, 0, 1]) == 1
    # AO22(a, b, c, d) = a*b + c*d
    assert eval_gate(GateKind.AO22, [0, 1, 1, 1]) == 1
    assert eval_gate(GateKind.AO22, [0, 1, 1, 0]) == 0
    # AO222 adds a third product term
    assert eval_gate(GateKind.AO222, [0, 0, 0, 0, 1, 1]) == 1
    assert eval_gate(GateKind.AO222, [1, 0, 0, 1, 0, 1]) == 0


def test_eval_c_element_holds_on_disagreement():
    # output follows inputs only when they agree, else keeps its held value
    for held in (0, 1):
        assert eval_gate(GateKind.C2, [1, 1], held) == 1
        assert eval_gate(GateKind.C2, [0, 0], held) == 0
        assert eval_gate(GateKind.C2, [1, 0], held) == held
        assert eval_gate(GateKind.C2, [0, 1], held) == held


def test_eval_rejects_wrong_arity():
    with pytest.raises(ValueError):
        eval_gate(GateKind.AND2, [1, 1, 1])


def _tiny_netlist() -> Netlist:
    gates = [
        Gate("g1", GateKind.AND2, ("a", "b"), "g1"),
        Gate("g2", GateKind.OR2, ("g1", "c"), "g2"),
    ]
    return Netlist(
        name="tiny",
        gates=gates,
        inputs=[PortGroup("A", "a"), PortGroup("B", "b"), PortGroup("C", "c")],
        outputs=[PortGroup("Y", "g2")],
    )


def test_validate_clean_netlist():
    assert _tiny_netlist().validate() == []


def test_validate_flags_duplicate_gate_ids():
    n = _tiny_netlist()
    bad = Netlist(
        name="dup",
        gates=list(n.gates) + [Gate("g1", GateKind.BUF, ("c",), "g3")],
        inputs=n.inputs,
        outputs=n.outputs,
    )
    assert any("duplicate" in m for m in bad.validate())


def test_validate_flags_multiple_drivers():
    bad = Netlist(
        name="multi",
        gates=[
            Gate("g1", GateKind.BUF, ("a",), "y"),
            Gate("g2", GateKind.BUF, ("b",), "y"),
        ],
        inputs=[PortGroup("A", "a"), PortGroup("B", "b")],
        outputs=[PortGroup("Y", "y")],
    )
    assert any("driver" in m for m in bad.validate())


def test_validate_flags_undriven_net():
    bad = Netlist(
        name="undriven",
        gates=[Gate("g1", GateKind.AND2, ("a", "ghost"), "y")],
        inputs=[PortGroup("A", "a")],
        outputs=[PortGroup("Y", "y")],
    )
    assert any("undriven" in m or "ghost" in m for m in bad.validate())


def test_validate_flags_combinational_cycle():
    bad = Netlist(
        name="cycle",
        gates=[
            Gate("g1", GateKind.OR2, ("a", "g2"), "g1"),
            Gate("g2", GateKind.BUF, ("g1",), "g2"),
        ],
        inputs=[PortGroup("A", "a")],
        outputs=[PortGroup("Y", "g1")],
    )
    assert any("cycle" in m.lower() for m in bad.validate())


def test_topological_order_respects_edges():
    n = _tiny_netlist()
    order = [g.id for g in n.topo_gates()]
    assert order.index("g1") < order.index("g2")


def test_gate_census_counts_every_kind():
    n = _tiny_netlist()
    census = n.gate_census()
    assert census[GateKind.AND2] == 1
    assert census[GateKind.OR2] == 1
    assert census[GateKind.AO222] == 0
    assert set(census) == set(GateKind)


def test_json_roundtrip(tmp_path):
    n = _tiny_netlist()
    path = tmp_path / "tiny.netlist.json"
    n.save(path)
    back = Netlist.load(path)
    assert back.name == n.name
    assert back.gates == tuple(n.gates)
    assert [p.name for p in back.inputs] == [p.name for p in n.inputs]
    assert [p.name for p in back.outputs] == [p.name for p in n.outputs]
    assert back.validate() == []


def test_scalar_and_dual_rail_port_groups():
    scalar = PortGroup("GO", "go")
    pair = PortGroup("A", "a1", "a0")
    assert scalar.scalar
    assert not pair.scalar
