import itertools

import numpy as np
import pytest

from mpcost import (
    OpKind,
    SolverLimits,
    assignment_to_json,
    best_of,
    bottom_up,
    build,
    check_feasible,
    exhaustive_optimal,
    fixed_sharing,
    gen_biometric,
    gen_chain,
    gen_random,
    hill_climbing,
    top_down,
    total_cost,
)
from mpcost.casegen import BiometricSpec
from mpcost.errors import SearchSpaceTooLarge, UnsupportedScheme
from mpcost.optimizer import total_cents_vector


def brute_force_minimum(circuit, profile):
    """Independent oracle: enumerate every feasible assignment over every
    node (in/out included) with plain itertools + total_cost, and return
    the cheapest, lexicographic on ties."""
    domains = [
        [s for s in profile.schemes if profile.supports(node.op, s)]
        for node in circuit.nodes
    ]
    best = None
    for combo in itertools.product(*domains):
        asg = dict(enumerate(combo))
        total = total_cost(circuit, asg, profile).total
        key = (total, tuple(profile.scheme_index[s] for s in combo))
        if best is None or key < best[0]:
            best = (key, asg)
    return best[1], best[0][0]


# --- fixed sharing -------------------------------------------------------------


def test_fixed_yao_is_always_feasible(inter_m3_medium):
    for seed in range(10):
        c = gen_random(seed, n_ops=8)
        result = fixed_sharing(c, inter_m3_medium, "yao")
        assert check_feasible(c, result.assignment, inter_m3_medium) == []
        assert result.heuristic == "fixed:yao"
        # single scheme, so no conversions anywhere
        assert all(
            rec.conv_compute == 0.0 and rec.conv_network == 0.0
            for rec in result.report.per_node.values()
        )


def test_fixed_arithmetic_rejects_sub(inter_m3_medium):
    c = build([("in", []), ("in", []), ("sub", [0, 1]), ("out", [2])])
    with pytest.raises(UnsupportedScheme, match="sub"):
        fixed_sharing(c, inter_m3_medium, "arithmetic")


def test_fixed_arithmetic_adder_total(adder, inter_m3_medium):
    result = fixed_sharing(adder, inter_m3_medium, "arithmetic")
    assert result.report.total == pytest.approx(2.90e-6, abs=1e-15)


def test_fixed_rejects_undeclared_scheme(adder, inter_m3_medium):
    with pytest.raises(UnsupportedScheme):
        fixed_sharing(adder, inter_m3_medium, "shamir")


# --- bottom-up -------------------------------------------------------------------


def test_bottom_up_mul_chain_picks_arithmetic(inter_m3_medium):
    # one mul: arithmetic 2209.86 beats yao 6629.18 and boolean 7609.61
    # (stored units 1e-6 cents), and the free inputs follow the mul
    c = gen_chain(OpKind.MUL, 1)
    result = bottom_up(c, inter_m3_medium)
    assert set(result.assignment.values()) == {"arithmetic"}
    assert result.report.total == pytest.approx(2209.86e-6, rel=1e-12)


def test_bottom_up_single_op_is_per_op_minimum(all_profiles):
    for prof in all_profiles.values():
        for op in (OpKind.ADD, OpKind.MUL, OpKind.SUB, OpKind.GE):
            c = gen_chain(op, 1)
            result = bottom_up(c, prof)
            per_scheme = []
            for s in prof.schemes_for(op):
                p, n = prof.op_cost_cents(op, s)
                per_scheme.append(p + n)
            assert result.report.total == pytest.approx(min(per_scheme), rel=1e-12)


def test_bottom_up_add_chain_all_arithmetic(all_profiles):
    c = gen_chain(OpKind.ADD, 5)
    for prof in all_profiles.values():
        result = bottom_up(c, prof)
        assert set(result.assignment.values()) == {"arithmetic"}, prof.name


def test_bottom_up_unconsumed_input_defaults_to_first_scheme(inter_m3_medium):
    c = build([("in", []), ("in", []), ("in", []), ("add", [0, 1]), ("out", [3])])
    result = bottom_up(c, inter_m3_medium)
    assert result.assignment[2] == "arithmetic"


# --- top-down --------------------------------------------------------------------


def test_top_down_single_op_matches_bottom_up(all_profiles):
    for prof in all_profiles.values():
        for op in (OpKind.ADD, OpKind.MUL, OpKind.GE):
            c = gen_chain(op, 1)
            assert (
                top_down(c, prof).report.total
                == bottom_up(c, prof).report.total
            )


def test_top_down_beats_pure_yao_on_biometric(inter_m3_medium):
    c = gen_biometric(BiometricSpec(10, 3))
    td = top_down(c, inter_m3_medium)
    pure = fixed_sharing(c, inter_m3_medium, "yao")
    assert check_feasible(c, td.assignment, inter_m3_medium) == []
    assert td.report.total <= pure.report.total


def test_top_down_out_nodes_follow_their_input(inter_m3_medium):
    for seed in range(10):
        c = gen_random(seed, n_ops=6)
        result = top_down(c, inter_m3_medium)
        for i in c.out_ids:
            src = c.nodes[i].inputs[0]
            assert result.assignment[i] == result.assignment[src]


# --- hill climbing ----------------------------------------------------------------


def test_hill_climbing_add_chain_stays_in_yao_local_optimum(inter_m3_medium):
    # arithmetic add is far cheaper per op (2.90 vs 114.02 stored units),
    # but flipping one node in a yao chain pays two yao->arithmetic
    # conversions in and one arithmetic->yao out (553.66 together), more
    # than the 111.12 saved. Single-move search therefore stays all-yao
    # while the exact solver reaches all-arithmetic.
    c = gen_chain(OpKind.ADD, 5)
    result = hill_climbing(c, inter_m3_medium, "yao")
    assert set(result.assignment.values()) == {"yao"}
    assert result.iterations == 1
    ex = exhaustive_optimal(c, inter_m3_medium)
    assert set(ex.assignment.values()) == {"arithmetic"}
    assert ex.report.total < result.report.total


def test_hill_climbing_stops_immediately_when_optimal(inter_m3_medium):
    # ge is cheapest under yao and every conversion costs something, so
    # the yao start is already a local (and here global) optimum
    c = build([("in", []), ("in", []), ("ge", [0, 1]), ("out", [2])])
    result = hill_climbing(c, inter_m3_medium, "yao")
    assert result.iterations == 1
    assert set(result.assignment.values()) == {"yao"}


def test_hill_climbing_total_non_increasing(all_profiles):
    for seed in range(20):
        c = gen_random(seed, n_ops=1 + seed % 10)
        for prof in all_profiles.values():
            result = hill_climbing(c, prof, "yao")
            totals = result.sweep_totals
            assert len(totals) == result.iterations + 1
            assert all(a >= b for a, b in zip(totals, totals[1:]))
            assert not result.limit_exceeded
            assert check_feasible(c, result.assignment, prof) == []


def test_hill_climbing_rejects_partial_init(inter_m3_medium):
    c = build([("in", []), ("in", []), ("sub", [0, 1]), ("out", [2])])
    with pytest.raises(UnsupportedScheme):
        hill_climbing(c, inter_m3_medium, "arithmetic")


def test_hill_climbing_pass_cap_sets_flag(inter_m3_medium):
    c = gen_chain(OpKind.MUL, 1)
    full = hill_climbing(c, inter_m3_medium, "yao")
    assert full.iterations > 1  # needs several sweeps to settle
    capped = hill_climbing(c, inter_m3_medium, "yao",
                           SolverLimits(max_passes=1))
    assert capped.limit_exceeded
    assert capped.iterations == 1
    assert check_feasible(c, capped.assignment, inter_m3_medium) == []


def test_hill_climbing_node_objective_variant(inter_m3_medium):
    # the reduced per-node objective ignores consumer-side conversions;
    # it must still terminate and return a feasible assignment
    for seed in range(10):
        c = gen_random(seed, n_ops=6)
        result = hill_climbing(c, inter_m3_medium, "yao", objective="node")
        assert check_feasible(c, result.assignment, inter_m3_medium) == []
    with pytest.raises(ValueError):
        hill_climbing(c, inter_m3_medium, "yao", objective="bogus")


# --- exhaustive --------------------------------------------------------------------


def test_exhaustive_minimal_adder(adder, inter_m3_medium):
    result = exhaustive_optimal(adder, inter_m3_medium)
    assert result.assignment == {i: "arithmetic" for i in range(4)}
    assert result.report.total == pytest.approx(2.90e-6, abs=1e-15)


def test_exhaustive_matches_brute_force_enumeration(all_profiles):
    profs = [all_profiles["inter-m3.medium"], all_profiles["intra-c4.large"]]
    for seed in range(14):
        c = gen_random(seed, n_ops=1 + seed % 3)
        if len(c.nodes) > 8:
            continue
        for prof in profs:
            got = exhaustive_optimal(c, prof)
            want_asg, want_total = brute_force_minimum(c, prof)
            assert got.report.total == want_total
            assert got.assignment == want_asg


def test_exhaustive_matmul2_all_arithmetic(inter_m3_medium):
    from mpcost import MatMulSpec, gen_matmul

    c = gen_matmul(MatMulSpec(2))
    result = exhaustive_optimal(c, inter_m3_medium)
    assert set(result.assignment.values()) == {"arithmetic"}


def test_exhaustive_space_cap(inter_m3_medium):
    c = gen_chain(OpKind.ADD, 3)  # 3 op nodes, 27 assignments
    with pytest.raises(SearchSpaceTooLarge) as info:
        exhaustive_optimal(c, inter_m3_medium, SolverLimits(max_space=10))
    assert info.value.space == 27
    exhaustive_optimal(c, inter_m3_medium, SolverLimits(max_space=27))


def test_exhaustive_dominates_heuristics(all_profiles):
    for seed in range(25):
        c = gen_random(seed, n_ops=1 + seed % 6)
        for prof in all_profiles.values():
            ex = exhaustive_optimal(c, prof)
            for result in (
                fixed_sharing(c, prof, "yao"),
                bottom_up(c, prof),
                top_down(c, prof),
                hill_climbing(c, prof, "yao"),
            ):
                assert ex.report.total <= result.report.total


def test_exhaustive_assignment_invariant_under_profile_scaling(inter_m3_medium):
    from mpcost.cost_model import CostProfile

    scaled = CostProfile(
        "scaled", inter_m3_medium.scale * 12.5, inter_m3_medium.schemes,
        inter_m3_medium.op_costs, inter_m3_medium.conversions,
    )
    for seed in range(10):
        c = gen_random(seed, n_ops=5)
        a = exhaustive_optimal(c, inter_m3_medium).assignment
        b = exhaustive_optimal(c, scaled).assignment
        assert a == b


# --- vectorized totals ----------------------------------------------------------------


def test_vectorized_totals_bitwise_match_scalar(all_profiles):
    rng = np.random.default_rng(42)
    for seed in range(15):
        c = gen_random(seed, n_ops=1 + seed % 8)
        for prof in (all_profiles["inter-m3.large"], all_profiles["intra-m3.medium"]):
            domains = [
                [prof.scheme_index[s] for s in prof.schemes_for(node.op)]
                for node in c.nodes
            ]
            batch = np.stack([
                np.array([dom[rng.integers(len(dom))] for dom in domains])
                for _ in range(16)
            ])
            totals = total_cents_vector(c, prof, batch)
            for k in range(batch.shape[0]):
                asg = {
                    i: prof.schemes[batch[k, i]] for i in range(len(c.nodes))
                }
                assert totals[k] == total_cost(c, asg, prof).total


# --- best-of ---------------------------------------------------------------------------


def test_best_of_bounds(all_profiles):
    for seed in range(15):
        c = gen_random(seed, n_ops=1 + seed % 6)
        for prof in all_profiles.values():
            best = best_of(c, prof)
            pure = fixed_sharing(c, prof, "yao")
            ex = exhaustive_optimal(c, prof)
            assert ex.report.total <= best.report.total <= pure.report.total
            assert check_feasible(c, best.assignment, prof) == []


def test_best_of_records_winner(inter_m3_medium):
    c = gen_chain(OpKind.MUL, 1)
    best = best_of(c, inter_m3_medium)
    # fixed arithmetic and bottom-up tie here; the fixed run wins the tie
    # because it is evaluated first
    assert best.heuristic == "fixed:arithmetic"


def test_best_of_accepts_explicit_hill_init(inter_m3_medium):
    c = gen_chain(OpKind.ADD, 3)
    best = best_of(c, inter_m3_medium, hill_init="boolean")
    assert check_feasible(c, best.assignment, inter_m3_medium) == []


# --- determinism ------------------------------------------------------------------------


def test_all_heuristics_are_deterministic(all_profiles):
    c = gen_random(3, n_ops=9)
    for prof in all_profiles.values():
        runs = []
        for _ in range(2):
            runs.append([
                assignment_to_json(fixed_sharing(c, prof, "yao").assignment),
                assignment_to_json(bottom_up(c, prof).assignment),
                assignment_to_json(top_down(c, prof).assignment),
                assignment_to_json(hill_climbing(c, prof, "yao").assignment),
                assignment_to_json(exhaustive_optimal(c, prof).assignment),
                assignment_to_json(best_of(c, prof).assignment),
            ])
        assert runs[0] == runs[1]
