"""Top-level acceptance battery.

Each test checks one release criterion and prints a single PASS/FAIL line,
so `pytest -v -s tests/test_acceptance.py` doubles as the sign-off report.
"""

import random
from contextlib import contextmanager

from dradder.generators import (
    AdderSpec,
    gen_completion_detector,
    gen_dafa,
    gen_hybrid_rca,
    gen_safa,
    gen_stage,
)
from dradder.netlist import GateKind
from dradder.simulator import DelayTable, classify_indication, simulate_transaction
from dradder.timing import (
    compare_report,
    critical_path,
    latency_expr_table,
    sweep_hybrid,
)
from dradder.verification import (
    ALL_EQUATION_SETS,
    SAFA_EQUATIONS,
    dsop_check,
    exhaustive_verify,
    monotonic_cover_check,
    semantically_disjoint,
    structurally_disjoint,
)

K = GateKind


@contextmanager
def report(num: int, title: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {num}: {title}")
        raise
    print(f"[PASS] criterion {num}: {title}")


def _table(m):
    return DelayTable({K[k]: v for k, v in m.items()})


# strictly dominant per-kind delays: every maximal path has a unique length,
# so the reported path (and hence its coefficient vector) is unambiguous
DOMINANT_TABLES = [
    _table({"BUF": 1, "AND2": 2, "AND4": 3, "OR2": 2, "OR3": 3, "OR4": 4,
            "AO21": 4, "AO22": 5, "AO222": 7, "C2": 4}),
    _table({"BUF": 0, "AND2": 3, "AND4": 5, "OR2": 2, "OR3": 4, "OR4": 6,
            "AO21": 5, "AO22": 7, "AO222": 11, "C2": 6}),
    _table({"BUF": 2, "AND2": 3, "AND4": 4, "OR2": 3, "OR3": 4, "OR4": 5,
            "AO21": 6, "AO22": 7, "AO222": 9, "C2": 5}),
]

# the five legends whose closed forms correspond to generated 32-bit netlists
STRUCTURAL_LEGENDS = {
    "Adder1": AdderSpec(32, 32, False),   # homogeneous single-bit chain
    "Adder5": AdderSpec(32, 0, False),    # dual-bit chain, no redundancy
    "Adder6": AdderSpec(32, 0, True),     # dual-bit chain, redundant carry
    "Adder11": AdderSpec(32, 2, True),    # 2 single-bit + 15 dual-bit stages
    "Adder12": AdderSpec(32, 4, True),    # 4 single-bit + 14 dual-bit stages
}


def test_criterion_1_formula_agreement():
    with report(1, "static analysis reproduces the five structural closed forms"):
        table = latency_expr_table()
        for name, spec in STRUCTURAL_LEGENDS.items():
            stage = gen_stage(gen_hybrid_rca(spec))
            for d in DOMINANT_TABLES:
                cp = critical_path(stage, d)
                assert cp.expr.nonzero() == table[name].nonzero(), (name, d.delays)
                assert cp.expr.includes_register
                assert cp.value == table[name].evaluate(d) - d[K.BUF], name


def test_criterion_2_expression_transcription():
    # re-transcribed here by hand, independent of the shipped table
    audit = {
        "Adder1": {"AO22": 32, "C2": 1, "OR2": 1},
        "Adder2": {"C2": 32, "OR2": 33},
        "Adder3": {"C2": 16, "AND4": 1, "OR4": 1, "OR3": 1, "OR2": 15},
        "Adder4": {"C2": 1, "AND4": 1, "AND2": 15, "OR4": 1, "OR3": 1, "OR2": 15},
        "Adder5": {"C2": 16, "AND4": 1, "OR4": 1, "OR3": 1, "OR2": 15},
        "Adder6": {"AO21": 15, "C2": 1, "AND4": 1, "OR4": 1, "OR3": 1},
        "Adder7": {"C2": 17, "OR2": 18},
        "Adder8": {"C2": 2, "AND2": 15, "OR2": 18},
        "Adder9": {"AO22": 1, "C2": 16, "OR2": 17},
        "Adder10": {"AO21": 15, "C2": 1, "AND2": 1, "OR4": 1, "OR2": 1},
        "Adder11": {"AO22": 3, "AO21": 14, "C2": 1, "OR3": 1},
        "Adder12": {"AO22": 5, "AO21": 13, "C2": 1, "OR3": 1},
        "Adder13": {"C2": 12, "AO22": 3, "AND4": 1, "OR4": 2, "OR2": 8},
        "Adder14": {"C2": 11, "AO22": 3, "AND4": 1, "OR4": 2, "OR2": 7},
        "Adder15": {"C2": 12, "AO22": 1, "OR2": 9},
        "Adder16": {"C2": 11, "AO22": 1, "OR2": 8},
        "Adder17": {"C2": 6, "AO22": 9, "OR2": 3},
    }
    with report(2, "all 17 embedded latency expressions match their sources"):
        table = latency_expr_table()
        assert sorted(table) == sorted(audit)
        for name, coeffs in audit.items():
            want = {K[k]: v for k, v in coeffs.items()}
            assert table[name].nonzero() == want, name
            assert table[name].includes_buffer and table[name].includes_register


def test_criterion_3_oracle_equivalence():
    with report(3, "oracle equivalence: exhaustive at widths 4 and 8, random at 32"):
        for width, count in ((4, 2 ** 9), (8, 2 ** 17)):
            for s in (0, 2):
                for red in (True, False):
                    stage = gen_stage(gen_hybrid_rca(AdderSpec(width, s, red)))
                    res = exhaustive_verify(stage, width)
                    assert res.passed, (width, s, red, res.first_counterexample)
                    assert res.checked == count
                    assert res.failures == 0
                    assert res.illegal_states == 0
                    assert res.rtz_failures == 0
        stage32 = gen_stage(gen_hybrid_rca(AdderSpec(32, 2, True)))
        res = exhaustive_verify(stage32, 32, mode="random", count=10_000)
        assert res.passed, res.first_counterexample
        assert res.checked == 10_000
        assert res.failures == res.illegal_states == res.rtz_failures == 0


def test_criterion_4_reference_latency_report():
    with report(4, "practical-mode comparison report reductions and flags"):
        rep = compare_report("table2-practical")
        for legend, expect in (("Adder13", 35.3), ("Adder14", 30.5), ("Adder17", 13.0)):
            got = rep.row(legend).reduction_vs_adder11_percent
            assert abs(got - expect) <= 0.1, (legend, got)
        # recomputed figures that contradict the published headline numbers
        for legend, computed, published in (("Adder15", 22.7, 20.2),
                                            ("Adder16", 15.7, 18.7)):
            row = rep.row(legend)
            assert abs(row.reduction_vs_adder11_percent - computed) <= 0.1, legend
            assert row.flag and f"{published}%" in row.flag, legend


def test_criterion_5_redundant_carry_is_faster():
    battery = DOMINANT_TABLES + [
        _table({"BUF": 0, "AND2": 1, "AND4": 1, "OR2": 2, "OR3": 2, "OR4": 2,
                "AO21": 2, "AO22": 2, "AO222": 2, "C2": 1}),
        _table({"BUF": 3, "AND2": 2, "AND4": 2, "OR2": 4, "OR3": 5, "OR4": 5,
                "AO21": 5, "AO22": 5, "AO222": 6, "C2": 2}),
    ]
    with report(5, "carry redundancy beats the shared-gate carry whenever "
                   "T_AO21 < T_C2 + T_OR2"):
        non = gen_stage(gen_hybrid_rca(AdderSpec(32, 0, False)))
        red = gen_stage(gen_hybrid_rca(AdderSpec(32, 0, True)))
        for d in battery:
            assert d[K.AO21] < d[K.C2] + d[K.OR2], "battery precondition"
            assert critical_path(red, d).value < critical_path(non, d).value
        unit = DelayTable.unit()
        assert critical_path(red, unit).value == 20
        assert critical_path(non, unit).value == 35


def test_criterion_6_hybrid_partition_optimum():
    example = _table({"BUF": 0, "AND2": 1, "AND4": 2, "OR2": 1, "OR3": 2,
                      "OR4": 2, "AO21": 3, "AO22": 2, "AO222": 3, "C2": 2})
    with report(6, "partition sweep recovers the 2-single-bit-stage optimum"):
        assert sweep_hybrid(32, example).argmin == (2,)
        assert sweep_hybrid(32, DelayTable.unit()).argmin == (0, 2)


def test_criterion_7_indication_classes():
    with report(7, "timing-class probe: adders early output, detector strong"):
        d = DelayTable.unit()
        blocks = [gen_safa(), gen_dafa(True), gen_dafa(False),
                  gen_hybrid_rca(AdderSpec(32, 2, True))]
        for fb in blocks:
            rep = classify_indication(fb, d, trials=64)
            assert rep.classification == "early", fb.name
            assert len(rep.early_set_witnesses) >= 1, fb.name
            assert len(rep.early_reset_witnesses) >= 1, fb.name
        rep = classify_indication(gen_completion_detector(4), d, trials=64)
        assert rep.classification == "strong"


def test_criterion_8_product_term_properties():
    with report(8, "disjoint-cover properties hold and both checkers agree"):
        for eqs in ALL_EQUATION_SETS:
            dsop = dsop_check(eqs)
            assert dsop.passed and dsop.methods_agree, (eqs.name, dsop.offending)
            cover = monotonic_cover_check(eqs)
            assert cover.passed, (eqs.name, cover.violations[:3])
        rng = random.Random(1011)
        variables = SAFA_EQUATIONS.variables
        for _ in range(1000):
            pair = []
            for _ in range(2):
                prod = set()
                for v in variables:
                    pick = rng.randrange(3)
                    if pick:
                        prod.add(v.rail1 if pick == 1 else v.rail0)
                pair.append(frozenset(prod))
            p, q = pair
            assert (structurally_disjoint(p, q, variables)
                    == semantically_disjoint(p, q, SAFA_EQUATIONS))


def test_criterion_9_worst_case_witness():
    with report(9, "crafted carry-ripple vector meets the static bound exactly"):
        unit = DelayTable.unit()
        stage = gen_stage(gen_hybrid_rca(AdderSpec(32, 2, True)))
        # propagate at every position with a live carry-in, so the carry
        # launches from the carry-in register and ripples through all stages
        vec = ([(f"A{i}", 0, 0) for i in range(32)]
               + [(f"B{i}", 1, 0) for i in range(32)]
               + [("CIN", 1, 0)])
        log = simulate_transaction(stage, unit, vec)
        sta = critical_path(stage, unit)
        assert not log.illegal_seen and log.rtz_complete
        assert log.latency == sta.value == 20
