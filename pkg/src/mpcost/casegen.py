"""Circuit generators: the two case studies, benchmark chains, and seeded
random DAGs for property tests.

The biometric-matching circuit scores a client record against every row
of a server dataset by squared Euclidean distance and folds the rows
down to the minimal distance and its row index. The matrix product
circuit is the schoolbook n^3 algorithm. Both come with input-packing
helpers so a generated circuit can be fed straight into the plaintext
evaluator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .circuit import COMPUTE_OPS, Circuit, OpKind, build
from .errors import NonBinaryOp


@dataclass(frozen=True)
class BiometricSpec:
    """Dataset shape for biometric matching: ``rows`` server records with
    ``attrs`` attributes each."""

    rows: int = 30
    attrs: int = 5
    bitwidth: int = 32

    def __post_init__(self):
        if self.rows < 1 or self.attrs < 1:
            raise ValueError("rows and attrs must be at least 1")


@dataclass(frozen=True)
class MatMulSpec:
    """Operand shape for the matrix product: two n-by-n matrices."""

    n: int = 5
    bitwidth: int = 32

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")


def gen_biometric(spec: BiometricSpec) -> Circuit:
    """Build the biometric matching circuit.

    Inputs: the server's ``rows x attrs`` dataset, the client's ``attrs``
    record, and one server-held constant per row carrying its index. Per
    row the distance is ``sum((s_k - c_k)^2)``; rows are folded with a
    strictly-greater comparison and two multiplexers so that on ties the
    earlier row wins. Two outputs: the minimal distance (``min_dist``)
    and its row index (``min_index``).
    """
    entries: list[tuple] = []
    server = [
        [len(entries) for _ in range(spec.attrs)] for _ in range(spec.rows)
    ]
    for r in range(spec.rows):
        for k in range(spec.attrs):
            server[r][k] = len(entries)
            entries.append((OpKind.IN, [], "server", f"s[{r},{k}]"))
    client = []
    for k in range(spec.attrs):
        client.append(len(entries))
        entries.append((OpKind.IN, [], "client", f"c[{k}]"))
    index_const = []
    for r in range(spec.rows):
        index_const.append(len(entries))
        entries.append((OpKind.IN, [], "server", f"idx[{r}]"))

    dist = []
    for r in range(spec.rows):
        subs = []
        for k in range(spec.attrs):
            subs.append(len(entries))
            entries.append((OpKind.SUB, [server[r][k], client[k]]))
        squares = []
        for k in range(spec.attrs):
            squares.append(len(entries))
            entries.append((OpKind.MUL, [subs[k], subs[k]]))
        acc = squares[0]
        for k in range(1, spec.attrs):
            nxt = len(entries)
            entries.append((OpKind.ADD, [acc, squares[k]]))
            acc = nxt
        dist.append(acc)

    min_dist = dist[0]
    min_index = index_const[0]
    for r in range(1, spec.rows):
        # ge = 1 when the running minimum is strictly above row r
        ge = len(entries)
        entries.append((OpKind.GE, [min_dist, dist[r]]))
        new_dist = len(entries)
        entries.append((OpKind.MUX, [ge, dist[r], min_dist]))
        new_index = len(entries)
        entries.append((OpKind.MUX, [ge, index_const[r], min_index]))
        min_dist, min_index = new_dist, new_index

    entries.append((OpKind.OUT, [min_dist], None, "min_dist"))
    entries.append((OpKind.OUT, [min_index], None, "min_index"))
    return build(entries, bitwidth=spec.bitwidth)


def biometric_inputs(
    spec: BiometricSpec,
    server_rows: Sequence[Sequence[int]],
    client: Sequence[int],
) -> dict[int, int]:
    """Pack a dataset and a client record into evaluator inputs for
    :func:`gen_biometric` (row-index constants included)."""
    if len(server_rows) != spec.rows or any(
        len(row) != spec.attrs for row in server_rows
    ):
        raise ValueError("server data does not match the spec shape")
    if len(client) != spec.attrs:
        raise ValueError("client record does not match the spec shape")
    inputs: dict[int, int] = {}
    nid = 0
    for row in server_rows:
        for v in row:
            inputs[nid] = v
            nid += 1
    for v in client:
        inputs[nid] = v
        nid += 1
    for r in range(spec.rows):
        inputs[nid] = r
        nid += 1
    return inputs


def gen_matmul(spec: MatMulSpec) -> Circuit:
    """Build the n^3 matrix product circuit for C = A x B.

    A is the server's matrix, B the client's, both row-major. Each of the
    n^2 outputs is a row-times-column inner product (n multiplications
    and n-1 additions).
    """
    n = spec.n
    entries: list[tuple] = []
    a = [[0] * n for _ in range(n)]
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a[i][j] = len(entries)
            entries.append((OpKind.IN, [], "server", f"a[{i},{j}]"))
    for i in range(n):
        for j in range(n):
            b[i][j] = len(entries)
            entries.append((OpKind.IN, [], "client", f"b[{i},{j}]"))
    outs = []
    for i in range(n):
        for j in range(n):
            terms = []
            for k in range(n):
                terms.append(len(entries))
                entries.append((OpKind.MUL, [a[i][k], b[k][j]]))
            acc = terms[0]
            for k in range(1, n):
                nxt = len(entries)
                entries.append((OpKind.ADD, [acc, terms[k]]))
                acc = nxt
            outs.append((acc, f"c[{i},{j}]"))
    for acc, name in outs:
        entries.append((OpKind.OUT, [acc], None, name))
    return build(entries, bitwidth=spec.bitwidth)


def matmul_inputs(
    spec: MatMulSpec,
    a: Sequence[Sequence[int]],
    b: Sequence[Sequence[int]],
) -> dict[int, int]:
    """Pack two matrices into evaluator inputs for :func:`gen_matmul`."""
    n = spec.n
    if len(a) != n or len(b) != n or any(len(r) != n for r in a) or any(
        len(r) != n for r in b
    ):
        raise ValueError("matrices do not match the spec shape")
    inputs: dict[int, int] = {}
    nid = 0
    for row in a:
        for v in row:
            inputs[nid] = v
            nid += 1
    for row in b:
        for v in row:
            inputs[nid] = v
            nid += 1
    return inputs


def gen_chain(op: OpKind, length: int, bitwidth: int = 32) -> Circuit:
    """Build a chain of ``length`` sequential two-input operations, the
    shape used for unit-cost benchmarking. Each link combines the
    previous result with one fresh input, so the chain's depth equals its
    length."""
    if op.arity != 2:
        raise NonBinaryOp(f"chain links must be binary ops, got {op}")
    if length < 1:
        raise ValueError("length must be at least 1")
    entries: list[tuple] = [(OpKind.IN, [], None, "x[0]")]
    prev = 0
    for i in range(1, length + 1):
        fresh = len(entries)
        entries.append((OpKind.IN, [], None, f"x[{i}]"))
        link = len(entries)
        entries.append((op, [prev, fresh]))
        prev = link
    entries.append((OpKind.OUT, [prev], None, "result"))
    return build(entries, bitwidth=bitwidth)


def gen_random(
    seed: int,
    n_ops: int,
    op_weights: Mapping[OpKind, float] | None = None,
    bitwidth: int = 32,
) -> Circuit:
    """Build a reproducible random DAG with ``n_ops`` priced nodes.

    Operations are drawn from ``op_weights`` (uniform over all priced ops
    by default); every op node draws its inputs from the nodes emitted
    before it, so each is reachable from an input, and every op node
    nobody consumes gets its own ``out`` node. Identical arguments yield
    identical circuits.
    """
    if n_ops < 1:
        raise ValueError("n_ops must be at least 1")
    rng = random.Random(seed)
    if op_weights is None:
        ops = list(COMPUTE_OPS)
        weights = [1.0] * len(ops)
    else:
        ops = [op for op in COMPUTE_OPS if op_weights.get(op, 0) > 0]
        if not ops:
            raise ValueError("op_weights leaves no op to draw from")
        weights = [float(op_weights[op]) for op in ops]

    entries: list[tuple] = []
    n_in = rng.randint(1, min(6, n_ops + 1))
    for i in range(n_in):
        party = rng.choice((None, "server", "client"))
        entries.append((OpKind.IN, [], party, None))
    op_ids = []
    for _ in range(n_ops):
        op = rng.choices(ops, weights)[0]
        inputs = [rng.randrange(len(entries)) for _ in range(op.arity)]
        op_ids.append(len(entries))
        entries.append((op, inputs))
    consumed = {j for e in entries for j in e[1]}
    for i in op_ids:
        if i not in consumed:
            entries.append((OpKind.OUT, [i]))
    return build(entries, bitwidth=bitwidth)


def node_count_summary(circuit: Circuit) -> dict[str, int]:
    """Count nodes per operation name (used by the CLI's gen summary)."""
    counts: dict[str, int] = {}
    for node in circuit.nodes:
        counts[node.op.value] = counts.get(node.op.value, 0) + 1
    return counts
