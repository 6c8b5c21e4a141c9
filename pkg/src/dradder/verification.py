"""Oracles and property checkers for the generated adders.

Two evaluation routes are kept deliberately independent:

* a vectorized steady-state evaluator (numpy, bit-per-vector) used for
  exhaustive and large random sweeps, valid because every generated
  circuit is monotone per handshake phase (a C-element driven from the
  all-zero state settles to the AND of its inputs);
* the event-driven simulator, cross-checked against the oracle on a
  seeded subsample of every sweep.

The ten published sum/carry equations are embedded as product-term data
and checked for disjointness (DSOP) and monotonic cover, both structurally
and by enumeration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .netlist import GateKind, Netlist
from .simulator import DEFAULT_SEED, DelayTable, simulate_transaction

K = GateKind


# ---------------------------------------------------------------------------
# integer oracle


def oracle_add(a: int, b: int, cin: int, width: int) -> tuple[int, int]:
    """Ground-truth addition: ((a + b + cin) mod 2**width, carry-out)."""
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    if not (0 <= a < 2**width and 0 <= b < 2**width):
        raise ValueError(f"operands out of range for width {width}: {a}, {b}")
    if cin not in (0, 1):
        raise ValueError(f"carry-in must be 0 or 1, got {cin}")
    total = a + b + cin
    return total % 2**width, total >> width


# ---------------------------------------------------------------------------
# vectorized steady-state evaluation


def steady_set_levels(n: Netlist, inputs: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Steady levels after a set phase from all-zero, one boolean array per
    net, vectorized across input vectors. C2 settles to AND under monotone
    rising inputs. The ackin net, when present, is held high."""
    levels: dict[str, np.ndarray] = {k: np.asarray(v, dtype=bool) for k, v in inputs.items()}
    shape = next(iter(levels.values())).shape if levels else ()
    for net in n.input_nets:
        if net not in levels:
            levels[net] = np.zeros(shape, dtype=bool)
    if n.ackin is not None:
        levels[n.ackin] = np.ones(shape, dtype=bool)

    for g in n.topo_gates():
        ins = [levels[x] for x in g.inputs]
        k = g.kind
        if k is K.BUF:
            out = ins[0]
        elif k in (K.AND2, K.AND4, K.C2):
            out = np.logical_and.reduce(ins)
        elif k in (K.OR2, K.OR3, K.OR4):
            out = np.logical_or.reduce(ins)
        elif k is K.AO21:
            out = (ins[0] & ins[1]) | ins[2]
        elif k is K.AO22:
            out = (ins[0] & ins[1]) | (ins[2] & ins[3])
        else:  # AO222
            out = (ins[0] & ins[1]) | (ins[2] & ins[3]) | (ins[4] & ins[5])
        levels[g.output] = out
    return levels


def steady_reset_levels(n: Netlist, set_levels: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Steady levels after the return-to-zero phase following `set_levels`:
    all inputs at spacer, C2 holding its set-phase value until both inputs
    are back at zero."""
    shape = next(iter(set_levels.values())).shape
    levels: dict[str, np.ndarray] = {
        net: np.zeros(shape, dtype=bool) for net in n.input_nets
    }
    for g in n.topo_gates():
        ins = [levels[x] for x in g.inputs]
        k = g.kind
        if k is K.C2:
            all1 = np.logical_and.reduce(ins)
            none = ~np.logical_or.reduce(ins)
            held = set_levels[g.output]
            out = np.where(none, False, np.where(all1, True, held))
        elif k is K.BUF:
            out = ins[0]
        elif k in (K.AND2, K.AND4):
            out = np.logical_and.reduce(ins)
        elif k in (K.OR2, K.OR3, K.OR4):
            out = np.logical_or.reduce(ins)
        elif k is K.AO21:
            out = (ins[0] & ins[1]) | ins[2]
        elif k is K.AO22:
            out = (ins[0] & ins[1]) | (ins[2] & ins[3])
        else:
            out = (ins[0] & ins[1]) | (ins[2] & ins[3]) | (ins[4] & ins[5])
        levels[g.output] = out
    return levels


def _adder_input_levels(n: Netlist, width: int, a, b, cin) -> dict[str, np.ndarray]:
    levels: dict[str, np.ndarray] = {}
    for i in range(width):
        for prefix, word in (("A", a), ("B", b)):
            grp = n.group(f"{prefix}{i}")
            bit = ((word >> i) & 1).astype(bool)
            levels[grp.rail1] = bit
            levels[grp.rail0] = ~bit
    cgrp = n.group("CIN")
    cbit = cin.astype(bool)
    levels[cgrp.rail1] = cbit
    levels[cgrp.rail0] = ~cbit
    return levels


@dataclass
class VerifyResult:
    passed: bool
    checked: int
    failures: int
    first_counterexample: dict | None
    illegal_states: int
    rtz_failures: int
    sim_checked: int
    notes: list[str] = field(default_factory=list)


def exhaustive_verify(
    n: Netlist,
    width: int,
    *,
    mode: str = "exhaustive",
    seed: int = DEFAULT_SEED,
    count: int = 10_000,
    sim_sample: int = 32,
    delays: DelayTable | None = None,
) -> VerifyResult:
    """Check an adder netlist against the integer oracle.

    Exhaustive mode sweeps all 2**(2*width+1) transactions (allowed up to
    width 8); random mode draws `count` seeded vectors. The full sweep runs
    through the vectorized steady-state evaluator (set phase decoded and
    compared with the oracle, reset phase checked for return-to-zero); a
    seeded subsample of `sim_sample` vectors is additionally replayed on
    the event-driven simulator and must agree transaction by transaction.
    """
    if mode == "exhaustive":
        if width > 8:
            raise ValueError("exhaustive mode is limited to width <= 8")
        total = 2 ** (2 * width + 1)
        idx = np.arange(total, dtype=np.int64)
        cin = idx & 1
        a = (idx >> 1) & (2**width - 1)
        b = idx >> (1 + width)
    elif mode == "random":
        rng = np.random.default_rng(seed)
        a = rng.integers(0, 2**width, size=count, dtype=np.int64)
        b = rng.integers(0, 2**width, size=count, dtype=np.int64)
        cin = rng.integers(0, 2, size=count, dtype=np.int64)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    levels = steady_set_levels(n, _adder_input_levels(n, width, a, b, cin))

    illegal = 0
    spacerish = 0
    sum_bits = np.zeros(a.shape, dtype=np.int64)
    for i in range(width):
        grp = n.group(f"SUM{i}", output=True)
        r1, r0 = levels[grp.rail1], levels[grp.rail0]
        illegal += int(np.count_nonzero(r1 & r0))
        spacerish += int(np.count_nonzero(~(r1 | r0)))
        sum_bits |= r1.astype(np.int64) << i
    cout_grp = n.group("COUT", output=True)
    r1, r0 = levels[cout_grp.rail1], levels[cout_grp.rail0]
    illegal += int(np.count_nonzero(r1 & r0))
    spacerish += int(np.count_nonzero(~(r1 | r0)))
    cout = r1.astype(np.int64)

    exp_total = a + b + cin
    exp_sum = exp_total & (2**width - 1)
    exp_cout = exp_total >> width
    bad = (sum_bits != exp_sum) | (cout != exp_cout)

    reset = steady_reset_levels(n, levels)
    rtz_bad = np.zeros(a.shape, dtype=bool)
    for arr in reset.values():
        rtz_bad |= arr
    rtz_failures = int(np.count_nonzero(rtz_bad))

    failures = int(np.count_nonzero(bad))
    first = None
    if failures:
        i = int(np.flatnonzero(bad)[0])
        first = {"a": int(a[i]), "b": int(b[i]), "cin": int(cin[i]),
                 "got_sum": int(sum_bits[i]), "got_cout": int(cout[i]),
                 "expected_sum": int(exp_sum[i]), "expected_cout": int(exp_cout[i])}

    notes: list[str] = []
    if spacerish:
        notes.append(f"{spacerish} output pairs never reached a valid codeword")

    # event-driven cross-check on a seeded subsample
    delays = delays or DelayTable.unit()
    rng = random.Random(seed)
    sample = sorted(rng.sample(range(len(a)), min(sim_sample, len(a))))
    sim_checked = 0
    for i in sample:
        ai, bi, ci = int(a[i]), int(b[i]), int(cin[i])
        vec = [(f"A{k}", (ai >> k) & 1, 0) for k in range(width)]
        vec += [(f"B{k}", (bi >> k) & 1, 0) for k in range(width)]
        vec.append(("CIN", ci, 0))
        log = simulate_transaction(n, delays, vec)
        got_sum, got_cout, ok = _decode_adder_log(n, log, width)
        exp = oracle_add(ai, bi, ci, width)
        if not ok or (got_sum, got_cout) != exp or not log.rtz_complete \
                or log.illegal_seen or not log.monotonic:
            failures += 1
            first = first or {"a": ai, "b": bi, "cin": ci, "got_sum": got_sum,
                              "got_cout": got_cout, "expected_sum": exp[0],
                              "expected_cout": exp[1], "via": "event simulator"}
            notes.append(f"event simulator disagreed on vector ({ai}, {bi}, {ci})")
            break
        sim_checked += 1

    passed = failures == 0 and illegal == 0 and rtz_failures == 0 and spacerish == 0
    return VerifyResult(passed, len(a), failures, first, illegal,
                        rtz_failures, sim_checked, notes)


def _decode_adder_log(n: Netlist, log, width: int) -> tuple[int, int, bool]:
    final_of = log.transitions
    def level(net: str) -> int:
        trans = final_of.get(net)
        # level at end of the set phase
        lv = 0
        for t, v in trans or ():
            if t <= log.set_end:
                lv = v
        return lv

    ok = True
    got_sum = 0
    for i in range(width):
        grp = n.group(f"SUM{i}", output=True)
        r1, r0 = level(grp.rail1), level(grp.rail0)
        if r1 + r0 != 1:
            ok = False
        got_sum |= r1 << i
    grp = n.group("COUT", output=True)
    r1, r0 = level(grp.rail1), level(grp.rail0)
    if r1 + r0 != 1:
        ok = False
    return got_sum, r1, ok


# ---------------------------------------------------------------------------
# product-term equations, DSOP and monotonic-cover checks


@dataclass(frozen=True)
class DualRailVar:
    name: str
    rail1: str
    rail0: str


@dataclass(frozen=True)
class OutputPair:
    """A complementary pair of sum-of-products equations (rail1, rail0)."""

    name: str
    products1: tuple[frozenset[str], ...]
    products0: tuple[frozenset[str], ...]

    def all_products(self) -> tuple[frozenset[str], ...]:
        return self.products1 + self.products0


@dataclass(frozen=True)
class EquationSet:
    name: str
    variables: tuple[DualRailVar, ...]
    outputs: tuple[OutputPair, ...]

    def check_product(self, p: frozenset[str]) -> None:
        for v in self.variables:
            if v.rail1 in p and v.rail0 in p:
                raise ValueError(f"product {sorted(p)} contains both rails of {v.name}")

    def valid_assignments(self) -> list[dict[str, int]]:
        names = [v.name for v in self.variables]
        return [dict(zip(names, bits))
                for bits in itertools.product((0, 1), repeat=len(names))]

    def true_rails(self, assignment: dict[str, int]) -> frozenset[str]:
        rails = set()
        for v in self.variables:
            rails.add(v.rail1 if assignment[v.name] else v.rail0)
        return frozenset(rails)


def _dr(name: str) -> DualRailVar:
    return DualRailVar(name, f"{name}1", f"{name}0")


def _products(*terms: str) -> tuple[frozenset[str], ...]:
    return tuple(frozenset(t.split()) for t in terms)


SAFA_EQUATIONS = EquationSet(
    "safa",
    variables=(_dr("A"), _dr("B"), _dr("CIN")),
    outputs=(
        OutputPair(
            "SUM",
            _products("A0 B0 CIN1", "A0 B1 CIN0", "A1 B0 CIN0", "A1 B1 CIN1"),
            _products("A0 B0 CIN0", "A0 B1 CIN1", "A1 B0 CIN1", "A1 B1 CIN0"),
        ),
        OutputPair(
            "COUT",
            _products("A0 B1 CIN1", "A1 B0 CIN1", "A1 B1 CIN0", "A1 B1 CIN1"),
            _products("A0 B0 CIN0", "A0 B0 CIN1", "A0 B1 CIN0", "A1 B0 CIN0"),
        ),
    ),
)

DAFA_EQUATIONS = EquationSet(
    "dafa",
    variables=(_dr("A1"), _dr("A0"), _dr("B1"), _dr("B0"), _dr("CIN")),
    outputs=(
        OutputPair(
            "SUM1",
            _products(
                "A11 A01 B10 B00 CIN0", "A10 A01 B11 B00 CIN0",
                "A11 A00 B10 B01 CIN0", "A10 A00 B11 B01 CIN0",
                "A11 A00 B11 B01 CIN1", "A11 A01 B11 B00 CIN1",
                "A10 A00 B10 B01 CIN1", "A10 A01 B10 B00 CIN1",
                "A10 A01 B10 B01", "A11 A00 B10 B00",
                "A10 A00 B11 B00", "A11 A01 B11 B01",
            ),
            _products(
                "A11 A01 B10 B00 CIN1", "A10 A01 B11 B00 CIN1",
                "A11 A00 B10 B01 CIN1", "A10 A00 B11 B01 CIN1",
                "A10 A01 B10 B00 CIN0", "A10 A00 B10 B01 CIN0",
                "A11 A01 B11 B00 CIN0", "A11 A00 B11 B01 CIN0",
                "A11 A00 B11 B00", "A11 A01 B10 B01",
                "A10 A01 B11 B01", "A10 A00 B10 B00",
            ),
        ),
        OutputPair(
            "SUM0",
            _products("A01 B00 CIN0", "A00 B01 CIN0", "A00 B00 CIN1", "A01 B01 CIN1"),
            _products("A01 B01 CIN0", "A01 B00 CIN1", "A00 B01 CIN1", "A00 B00 CIN0"),
        ),
        OutputPair(
            "COUT2",
            _products(
                "A10 A00 B11 B01 CIN1", "A11 A00 B10 B01 CIN1",
                "A10 A01 B11 B00 CIN1", "A11 A01 B10 B00 CIN1",
                "A10 A01 B11 B01", "A11 A01 B10 B01", "A11 B11",
            ),
            _products(
                "A11 A01 B10 B00 CIN0", "A10 A01 B11 B00 CIN0",
                "A11 A00 B10 B01 CIN0", "A10 A00 B11 B01 CIN0",
                "A11 A00 B10 B00", "A10 A00 B11 B00", "A10 B10",
            ),
        ),
    ),
)

ALL_EQUATION_SETS = (SAFA_EQUATIONS, DAFA_EQUATIONS)


def structurally_disjoint(p: frozenset[str], q: frozenset[str],
                          variables: tuple[DualRailVar, ...]) -> bool:
    """True iff the two products contain opposite rails of some variable."""
    return any(
        (v.rail1 in p and v.rail0 in q) or (v.rail0 in p and v.rail1 in q)
        for v in variables
    )


def semantically_disjoint(p: frozenset[str], q: frozenset[str],
                          eqs: EquationSet) -> bool:
    """True iff no valid (one-hot-per-variable) assignment satisfies both."""
    return not any(
        p <= rails and q <= rails
        for rails in (eqs.true_rails(asg) for asg in eqs.valid_assignments())
    )


@dataclass(frozen=True)
class DsopResult:
    passed: bool
    offending: tuple[str, int, int] | None
    methods_agree: bool


def dsop_check(eqs: EquationSet) -> DsopResult:
    """Every pair of products within each output equation must be disjoint.

    Checked by the structural opposite-rail rule and, independently, by
    enumeration over valid assignments; the two verdicts must agree."""
    offending = None
    agree = True
    for out in eqs.outputs:
        for eq_products in (out.products1, out.products0):
            for prod in eq_products:
                eqs.check_product(prod)
            for (i, p), (j, q) in itertools.combinations(enumerate(eq_products), 2):
                s = structurally_disjoint(p, q, eqs.variables)
                m = semantically_disjoint(p, q, eqs)
                if s != m:
                    agree = False
                if not (s and m) and offending is None:
                    offending = (out.name, i, j)
    return DsopResult(offending is None and agree, offending, agree)


@dataclass(frozen=True)
class MonotonicCoverResult:
    passed: bool
    violations: tuple[tuple[str, dict[str, int], int], ...]


def monotonic_cover_check(eqs: EquationSet) -> MonotonicCoverResult:
    """For each complementary output pair and each valid input assignment,
    exactly one product across the combined product list must hold."""
    violations = []
    for out in eqs.outputs:
        for asg in eqs.valid_assignments():
            rails = eqs.true_rails(asg)
            active = sum(1 for p in out.all_products() if p <= rails)
            if active != 1:
                violations.append((out.name, asg, active))
    return MonotonicCoverResult(not violations, tuple(violations))


def equation_equivalence(n: Netlist, eqs: EquationSet) -> bool:
    """Steady-state netlist outputs equal the equation evaluation over every
    valid input assignment. Netlist input/output group names must match the
    equation variable and output names."""
    assignments = eqs.valid_assignments()
    inputs: dict[str, np.ndarray] = {}
    for v in eqs.variables:
        grp = n.group(v.name)
        bits = np.array([asg[v.name] for asg in assignments], dtype=bool)
        inputs[grp.rail1] = bits
        inputs[grp.rail0] = ~bits
    levels = steady_set_levels(n, inputs)

    for out in eqs.outputs:
        grp = n.group(out.name, output=True)
        for rail_net, products in ((grp.rail1, out.products1), (grp.rail0, out.products0)):
            expect = np.array(
                [any(p <= eqs.true_rails(asg) for p in products) for asg in assignments],
                dtype=bool,
            )
            if not np.array_equal(levels[rail_net], expect):
                return False
    return True
