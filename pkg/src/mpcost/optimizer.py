"""Scheme-assignment strategies.

Four heuristics (fixed scheme, bottom-up, top-down, hill climbing), a
meta-selector that keeps the cheapest of their results, and an exact
enumeration solver that serves as the correctness oracle on small
circuits.

Determinism: every strategy breaks ties the same way, schemes in the
profile's declaration order first, then ascending node id. Reports are
always recomputed with :func:`mpcost.cost_model.total_cost`, so totals
from different strategies (including the exact solver) compare without
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .circuit import Circuit, OpKind
from .cost_model import (
    Assignment,
    CostProfile,
    CostReport,
    total_cost,
)
from .errors import SearchSpaceTooLarge, UnsupportedScheme


@dataclass(frozen=True)
class SolverLimits:
    """Caps that keep the solvers bounded.

    ``max_space`` limits the exact solver's enumeration (the product of
    the candidate-scheme counts over the priced nodes). ``max_passes``
    caps hill-climbing sweeps; ``None`` means ``m * len(schemes)``.
    """

    max_space: int = 10**7
    max_passes: int | None = None

    def __post_init__(self):
        if self.max_space < 1:
            raise ValueError("max_space must be positive")
        if self.max_passes is not None and self.max_passes < 1:
            raise ValueError("max_passes must be positive")


@dataclass(frozen=True)
class OptimizeResult:
    """Outcome of one optimization run.

    ``iterations`` counts hill-climbing sweeps (1 for the other
    strategies). ``sweep_totals`` records the total cost in cents before
    the first sweep and after each sweep; ``limit_exceeded`` is set when
    hill climbing was cut off by ``max_passes`` while still improving.
    """

    assignment: Assignment
    report: CostReport
    heuristic: str
    iterations: int = 1
    limit_exceeded: bool = False
    sweep_totals: tuple[float, ...] = ()


def _require_support(circuit: Circuit, profile: CostProfile, scheme: str) -> None:
    if scheme not in profile.scheme_index:
        raise UnsupportedScheme(
            f"scheme {scheme!r} is not declared by profile {profile.name!r}"
        )
    for node in circuit.nodes:
        if not profile.supports(node.op, scheme):
            raise UnsupportedScheme(
                f"scheme {scheme!r} does not support op {node.op} (node {node.id})"
            )


def fixed_sharing(
    circuit: Circuit, profile: CostProfile, scheme: str
) -> OptimizeResult:
    """Assign one scheme to every node.

    The scheme must support every operation in the circuit; with a single
    scheme there are no conversions, so the report's conversion columns
    are exactly zero.
    """
    _require_support(circuit, profile, scheme)
    assignment = {node.id: scheme for node in circuit.nodes}
    return OptimizeResult(
        assignment, total_cost(circuit, assignment, profile), f"fixed:{scheme}"
    )


def bottom_up(circuit: Circuit, profile: CostProfile) -> OptimizeResult:
    """Greedy pass in topological order.

    Each priced node (and each ``out`` node) picks the supported scheme
    minimizing its own operation cost plus the conversions from inputs
    that already have a scheme. ``in`` nodes are free and unconstrained,
    so they are left open and adopt the scheme of the first consumer that
    gets processed, which makes that edge conversion-free.
    """
    assignment: Assignment = {}
    for node in circuit.nodes:  # node order is topological
        if node.op is OpKind.IN:
            continue
        best_scheme = None
        best_cost = None
        for scheme in profile.schemes_for(node.op):
            p, n = profile.op_cost_cents(node.op, scheme)
            cost = p + n
            for j in node.inputs:
                src = assignment.get(j)
                if src is not None:
                    cp, cn = profile.conv_cost_cents(src, scheme)
                    cost += cp + cn
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_scheme = scheme
        assignment[node.id] = best_scheme
        for j in node.inputs:
            if j not in assignment:  # a still-open in node
                assignment[j] = best_scheme
    for i in circuit.in_ids:  # ins nobody consumes
        if i not in assignment:
            assignment[i] = profile.schemes[0]
    return OptimizeResult(
        assignment, total_cost(circuit, assignment, profile), "bottom-up"
    )


def top_down(circuit: Circuit, profile: CostProfile) -> OptimizeResult:
    """Greedy pass in reverse topological order.

    Each node picks the supported scheme minimizing its own operation
    cost plus the conversions of its result into the consumers assigned
    so far. ``out`` nodes are skipped during the pass and finalized to
    their input's scheme at the end (which makes that edge free).
    """
    assignment: Assignment = {}
    for node in reversed(circuit.nodes):
        if node.op is OpKind.OUT:
            continue
        best_scheme = None
        best_cost = None
        for scheme in profile.schemes_for(node.op):
            p, n = profile.op_cost_cents(node.op, scheme)
            cost = p + n
            for c in circuit.consumer_edges[node.id]:
                dst = assignment.get(c)
                if dst is not None:
                    cp, cn = profile.conv_cost_cents(scheme, dst)
                    cost += cp + cn
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_scheme = scheme
        assignment[node.id] = best_scheme
    for i in circuit.out_ids:
        assignment[i] = assignment[circuit.nodes[i].inputs[0]]
    return OptimizeResult(
        assignment, total_cost(circuit, assignment, profile), "top-down"
    )


def hill_climbing(
    circuit: Circuit,
    profile: CostProfile,
    init_scheme: str,
    limits: SolverLimits | None = None,
    objective: str = "delta",
) -> OptimizeResult:
    """Local search from a uniform starting assignment.

    Every node starts on ``init_scheme`` (which must support all ops in
    the circuit). Sweeps visit nodes in ascending id order; a node moves
    to the scheme minimizing the cost terms it participates in, and only
    on strict improvement. The search stops after a sweep with no change
    or after ``max_passes`` sweeps.

    ``objective`` selects the per-node score:

    * ``"delta"`` (default): operation cost, conversions from inputs and
      conversions into consumers. A move then changes the circuit total
      by exactly the score difference, so the total is non-increasing
      across sweeps.
    * ``"node"``: operation cost and input-side conversions only. Cheaper
      per step but blind to the conversions a move inflicts on consumers,
      so the total may go up; kept for comparison experiments.
    """
    if objective not in ("delta", "node"):
        raise ValueError(f"unknown objective {objective!r}")
    limits = limits or SolverLimits()
    _require_support(circuit, profile, init_scheme)
    max_passes = limits.max_passes
    if max_passes is None:
        max_passes = max(1, len(circuit.nodes) * len(profile.schemes))

    assignment: Assignment = {n.id: init_scheme for n in circuit.nodes}
    consumers = circuit.consumer_edges

    def score(node, scheme: str) -> float:
        p, n = profile.op_cost_cents(node.op, scheme)
        cost = p + n
        for j in node.inputs:
            cp, cn = profile.conv_cost_cents(assignment[j], scheme)
            cost += cp + cn
        if objective == "delta":
            for c in consumers[node.id]:
                cp, cn = profile.conv_cost_cents(scheme, assignment[c])
                cost += cp + cn
        return cost

    sweep_totals = [total_cost(circuit, assignment, profile).total]
    sweeps = 0
    limit_exceeded = False
    while True:
        sweeps += 1
        changed = False
        for node in circuit.nodes:
            current = assignment[node.id]
            best_scheme = current
            best_cost = score(node, current)
            for scheme in profile.schemes_for(node.op):
                if scheme == current:
                    continue
                cost = score(node, scheme)
                if cost < best_cost:
                    best_cost = cost
                    best_scheme = scheme
            if best_scheme != current:
                assignment[node.id] = best_scheme
                changed = True
        sweep_totals.append(total_cost(circuit, assignment, profile).total)
        if not changed:
            break
        if sweeps >= max_passes:
            limit_exceeded = True
            break
    return OptimizeResult(
        assignment,
        total_cost(circuit, assignment, profile),
        "hill-climbing",
        iterations=sweeps,
        limit_exceeded=limit_exceeded,
        sweep_totals=tuple(sweep_totals),
    )


# --- exact solver ------------------------------------------------------------


def total_cents_vector(
    circuit: Circuit, profile: CostProfile, schemes: np.ndarray
) -> np.ndarray:
    """Total cost in cents for a batch of assignments.

    ``schemes`` has shape ``(k, m)`` holding a scheme index per node for
    each of ``k`` assignments (all must be feasible). The accumulation
    order per assignment matches :func:`mpcost.cost_model.total_cost`
    term for term, so the results are bit-identical to the scalar path.
    """
    op_p, op_n, conv_p, conv_n = profile.cent_tables()
    k = schemes.shape[0]
    tc = np.zeros(k)
    tn = np.zeros(k)
    for node in circuit.nodes:
        gi = schemes[:, node.id]
        row = profile.op_row(node.op)
        cc = np.zeros(k)
        cn = np.zeros(k)
        for j in node.inputs:
            gj = schemes[:, j]
            cc = cc + conv_p[gj, gi]
            cn = cn + conv_n[gj, gi]
        tc = tc + op_p[row, gi]
        tc = tc + cc
        tn = tn + op_n[row, gi]
        tn = tn + cn
    return tc + tn


def exhaustive_optimal(
    circuit: Circuit,
    profile: CostProfile,
    limits: SolverLimits | None = None,
) -> OptimizeResult:
    """Exact minimum-cost assignment by enumeration.

    The enumeration ranges over the priced nodes only: ``in`` and ``out``
    nodes are free under every scheme and their cost terms touch nothing
    but their own edges, so for any fixed choice on the priced nodes each
    of them can be settled independently and exactly (an ``in`` node
    minimizes its summed conversions into consumers, an ``out`` node its
    single incoming conversion). The search-space size checked against
    ``max_space`` is therefore the product of candidate counts over
    priced nodes, e.g. ``3**k`` for ``k`` add/mul nodes under the bundled
    profiles.

    Ties are broken lexicographically: schemes in declaration order,
    nodes by ascending id.
    """
    limits = limits or SolverLimits()
    m = len(circuit.nodes)
    n_schemes = len(profile.schemes)
    op_ids = circuit.op_node_ids
    domains = [
        [profile.scheme_index[s] for s in profile.schemes_for(circuit.nodes[i].op)]
        for i in op_ids
    ]
    space = prod(len(d) for d in domains)
    if space > limits.max_space:
        raise SearchSpaceTooLarge(space, limits.max_space)

    base = np.arange(space)
    schemes = np.zeros((space, m), dtype=np.int64)
    stride = space
    for node_id, domain in zip(op_ids, domains):
        stride //= len(domain)
        digits = (base // stride) % len(domain)
        schemes[:, node_id] = np.asarray(domain, dtype=np.int64)[digits]

    _, _, conv_p, conv_n = profile.cent_tables()
    conv_total = conv_p + conv_n

    for i in circuit.in_ids:
        edges = [
            c
            for c in circuit.consumer_edges[i]
            if circuit.nodes[c].op is not OpKind.OUT
        ]
        if not edges:
            schemes[:, i] = 0
            continue
        objective = np.zeros((n_schemes, space))
        for s in range(n_schemes):
            acc = np.zeros(space)
            for c in edges:
                acc = acc + conv_total[s, schemes[:, c]]
            objective[s] = acc
        schemes[:, i] = np.argmin(objective, axis=0)  # first minimum wins

    for i in circuit.out_ids:
        src = schemes[:, circuit.nodes[i].inputs[0]]
        schemes[:, i] = np.argmin(conv_total[src, :], axis=1)

    totals = total_cents_vector(circuit, profile, schemes)
    best = totals.min()
    candidates = np.nonzero(totals == best)[0]
    if len(candidates) == 1:
        pick = int(candidates[0])
    else:
        rows = schemes[candidates]
        order = np.lexsort(rows[:, ::-1].T)  # primary key: node 0's scheme
        pick = int(candidates[order[0]])

    assignment = {
        i: profile.schemes[int(schemes[pick, i])] for i in range(m)
    }
    return OptimizeResult(
        assignment, total_cost(circuit, assignment, profile), "exhaustive"
    )


# --- meta-selector -----------------------------------------------------------


def best_of(
    circuit: Circuit,
    profile: CostProfile,
    limits: SolverLimits | None = None,
    hill_init: str | None = None,
) -> OptimizeResult:
    """Run every heuristic and keep the cheapest result.

    Candidates, in tie-break order: a fixed assignment for each scheme
    that supports every operation in the circuit, bottom-up, top-down,
    and hill climbing. Hill climbing starts from ``hill_init``; the
    default is ``"yao"`` when it covers the circuit, otherwise the first
    declared scheme that does. The winning candidate's result (including
    its ``heuristic`` label) is returned unchanged.
    """
    limits = limits or SolverLimits()
    circuit_ops = circuit.ops_present()
    universal = profile.universal_schemes(circuit_ops)
    results = [fixed_sharing(circuit, profile, s) for s in universal]
    results.append(bottom_up(circuit, profile))
    results.append(top_down(circuit, profile))
    if hill_init is None:
        hill_init = "yao" if "yao" in universal else universal[0]
    results.append(hill_climbing(circuit, profile, hill_init, limits))
    best = results[0]
    for r in results[1:]:
        if r.report.total < best.report.total:
            best = r
    return best
