"""Epoch-driven simulation of coded sharding over N node state machines.

Each epoch: blocks are proposed per shard, every node encodes its own view,
verifies the coded block against its stored coded chain, broadcasts the
result, and decodes everyone's results to learn which blocks every shard
accepted. Delivery is a synchronous round; the state is owned by the driver
and mutated in node-index order, so identical seeds give identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .adversary import AdversaryConfig, assign_versions, corrupt_results, forge_versions
from .decoder import (
    FAILURE,
    BroadcastEntry,
    BroadcastSet,
    DecodeOutcome,
    InsufficientEvaluations,
    accept_bits,
    recover_outputs,
    rs_decode,
)
from .field_poly import FieldElement, Polynomial
from .lcc import EncodingParams, build_coded_poly, compose_verification, encode_at_node


@dataclass(frozen=True)
class VerificationFn:
    """A total-degree-d check of a proposed block against its shard history.

    `evaluate` works on field values, `compose` performs the same computation
    symbolically on coded polynomials, and `valid_block`, when present,
    constructs a block the check accepts for a given history.
    """

    degree: int
    evaluate: Callable[[FieldElement, Sequence[FieldElement]], FieldElement]
    compose: Callable[[Polynomial, Sequence[Polynomial]], Polynomial]
    valid_block: Callable[[Sequence[FieldElement]], FieldElement] | None = None


def power_check(d: int) -> VerificationFn:
    """History-free check f(x) = x^d; accepts exactly x = 0 when the accept set is {0}."""
    return VerificationFn(
        degree=d,
        evaluate=lambda x, history: x**d,
        compose=lambda q, history: q**d,
        valid_block=lambda history: history[0].field.zero,
    )


def history_power_check(d: int, a: FieldElement) -> VerificationFn:
    """f(x, history) = (x - a*last)^d: zero iff the block extends the chain by factor a.

    In a field the d-th power vanishes only at x = a*last, so validity is a
    single point and honest proposers can always construct a valid block.
    """
    return VerificationFn(
        degree=d,
        evaluate=lambda x, history: (x - a * history[-1]) ** d,
        compose=lambda q, history: (q - Polynomial.constant(a) * history[-1]) ** d,
        valid_block=lambda history: a * history[-1],
    )


class ShardChain:
    """One shard's accepted blocks; entry 0 is the public genesis constant."""

    __slots__ = ("shard", "genesis", "blocks")

    def __init__(self, shard: int, genesis: FieldElement):
        self.shard = shard
        self.genesis = genesis
        self.blocks: list[FieldElement] = []

    def history(self) -> tuple[FieldElement, ...]:
        return (self.genesis, *self.blocks)


class NodeState:
    """One node: its evaluation point, its coded chain, and (driver bookkeeping)
    the accepted-block tuples its coded entries are evaluations of."""

    __slots__ = ("node", "alpha", "role", "coded_chain", "chain_basis")

    def __init__(self, node: int, alpha: FieldElement, coded_genesis: FieldElement,
                 genesis_basis: tuple[int, ...]):
        self.node = node
        self.alpha = alpha
        self.role = "honest"
        self.coded_chain: list[FieldElement] = [coded_genesis]
        self.chain_basis: list[tuple[int, ...]] = [genesis_basis]

    def fingerprint(self) -> tuple[tuple[int, ...], ...]:
        """Identity of the chain the node is on: one block tuple per epoch.

        Two nodes share a fingerprint iff their coded entries are evaluations
        of the same accepted-block polynomials, which is what diverges under
        an attack; the raw entries differ between nodes by construction.
        """
        return tuple(self.chain_basis)


@dataclass
class EpochReport:
    """Outcome of one epoch: decode statuses, accept bits, divergence, traffic.

    recovered_values holds the decoded per-shard verification values (as plain
    residues) when the epoch decoded, for checking against direct evaluation.
    """

    epoch: int
    statuses: dict[int, str]
    accepted: dict[int, list[int] | None]
    chain_divergence: int
    messages: dict[str, int]
    stalled: bool
    recovered_values: list[int] | None = None
    diagnostics: str = ""

    def to_json_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "statuses": {str(n): s for n, s in self.statuses.items()},
            "accepted": {
                str(n): bits for n, bits in self.accepted.items()
            },
            "chain_divergence": self.chain_divergence,
            "messages": dict(self.messages),
            "stalled": self.stalled,
            "recovered_values": self.recovered_values,
            "diagnostics": self.diagnostics,
        }


class Simulation:
    """Driver state: encoding constants, chains, nodes, and epoch policies."""

    def __init__(
        self,
        params: EncodingParams,
        fn: VerificationFn,
        *,
        accept_set=None,
        invalid_proposer_shards: frozenset[int] = frozenset(),
        failure_policy: str = "stall",
    ):
        if params.N < params.composed_degree + 1:
            raise ValueError(
                f"N={params.N} cannot determine a degree-{params.composed_degree} polynomial"
            )
        if failure_policy not in ("stall", "append_own_view"):
            raise ValueError(f"unknown failure policy {failure_policy!r}")
        field = params.field
        self.params = params
        self.fn = fn
        self.accept_set = {field.zero} if accept_set is None else accept_set
        self.invalid_proposer_shards = invalid_proposer_shards
        self.failure_policy = failure_policy
        self.epoch = 0
        # genesis block of shard k is the public constant k
        self.chains = [ShardChain(k, field(k)) for k in range(1, params.K + 1)]
        genesis_blocks = tuple(c.genesis for c in self.chains)
        p0 = build_coded_poly(genesis_blocks, params)
        self.history_polys: list[Polynomial] = [p0]
        genesis_basis = tuple(b.value for b in genesis_blocks)
        self.nodes = [
            NodeState(n, params.alphas[n - 1], p0(params.alphas[n - 1]), genesis_basis)
            for n in range(1, params.N + 1)
        ]

    def honest_nodes(self) -> list[NodeState]:
        return [node for node in self.nodes if node.role == "honest"]

    def chain_divergence(self) -> int:
        return len({node.fingerprint() for node in self.honest_nodes()})


def propose_blocks(
    chains: Sequence[ShardChain],
    fn: VerificationFn,
    rng: random.Random,
    invalid_shards: frozenset[int] = frozenset(),
) -> list[FieldElement]:
    """One proposal per shard: valid proposers solve the check, invalid ones draw noise."""
    proposals = []
    for chain in chains:
        if chain.shard in invalid_shards:
            proposals.append(chain.genesis.field.random(rng))
        else:
            if fn.valid_block is None:
                raise ValueError("verification fn cannot construct valid blocks")
            proposals.append(fn.valid_block(chain.history()))
    return proposals


def run_epoch(
    sim: Simulation,
    adversary: AdversaryConfig | None = None,
    rng: random.Random | int = 0,
) -> EpochReport:
    """Advance the simulation by one epoch and report what every node saw.

    Delivery, encoding, broadcast corruption, decoding and appends happen in
    node-index order; decode failure is recorded, never raised.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    params, fn, field = sim.params, sim.fn, sim.params.field
    t = sim.epoch + 1
    producers = adversary.adversarial_producers if adversary else ()
    adv_nodes = adversary.adversarial_nodes if adversary else frozenset()
    for node in sim.nodes:
        node.role = "adversarial" if node.node in adv_nodes else "honest"
    honest_ids = [node.node for node in sim.nodes if node.role == "honest"]

    # 1. proposals: honest shards broadcast one block; captured shards unicast versions
    base = propose_blocks(sim.chains, fn, rng, sim.invalid_proposer_shards)
    versions: dict[int, list[FieldElement]] = {}
    for k in producers:
        versions[k] = forge_versions(
            sim.chains[k - 1].history(), adversary.v, rng,
            fn=fn, valid_first=adversary.valid_first,
        )
    assignment = None
    default_tuple = (1,) * len(producers)
    if producers:
        assignment = assign_versions(honest_ids, adversary, cap=None, rng=rng)

    def view_for(node_id: int) -> tuple[FieldElement, ...]:
        if assignment is not None and node_id in assignment.node_tuples:
            tup = assignment.node_tuples[node_id]
        else:
            tup = default_tuple
        view = []
        for k in range(1, params.K + 1):
            if k in producers:
                view.append(versions[k][tup[producers.index(k)] - 1])
            else:
                view.append(base[k - 1])
        return tuple(view)

    views = {node.node: view_for(node.node) for node in sim.nodes}
    for k in producers:
        delivered = {views[n][k - 1].value for n in views}
        assert len(delivered) <= adversary.v, "injection cap violated"

    # 2. each honest node encodes its view and verifies against its coded chain
    results: dict[int, FieldElement | None] = {}
    for node in sim.nodes:
        if node.role == "honest":
            coded = encode_at_node(views[node.node], params, node.node)
            results[node.node] = fn.evaluate(coded, tuple(node.coded_chain))

    # 3. adversarial nodes broadcast per strategy
    n_silent = 0
    if adv_nodes:
        target_poly = None
        if adversary.broadcast_strategy == "honest_looking":
            view0 = tuple(
                versions[k][0] if k in producers else base[k - 1]
                for k in range(1, params.K + 1)
            )
            target_poly = compose_verification(
                build_coded_poly(view0, params), sim.history_polys, fn
            )
        corrupted = corrupt_results(
            [(n, params.alphas[n - 1]) for n in sorted(adv_nodes)],
            adversary.broadcast_strategy,
            rng,
            field=field,
            poly=target_poly,
        )
        results.update(corrupted)
        n_silent = sum(1 for v in corrupted.values() if v is None)

    broadcast = BroadcastSet(
        [
            BroadcastEntry(node.node, node.alpha, results[node.node])
            for node in sim.nodes
        ]
    )

    # 4. every honest node decodes the same broadcast set
    degree_bound = params.composed_degree
    present = len(broadcast.present())
    max_errors = (present - degree_bound - 1) // 2
    try:
        outcome = rs_decode(broadcast, degree_bound, max(max_errors, 0))
    except InsufficientEvaluations as exc:
        outcome = DecodeOutcome(status=FAILURE, diagnostics=str(exc))
    diagnostics = outcome.diagnostics

    # 5. appends
    bits: list[int] | None = None
    recovered_values: list[int] | None = None
    stalled = False
    if outcome.recovered:
        h = recover_outputs(outcome.poly, params)
        recovered_values = [value.value for value in h]
        bits = accept_bits(h, sim.accept_set)
        canonical = _canonical_blocks(sim, outcome.poly, base, versions, views, producers)
        _append_epoch(sim, canonical, bits, views)
    elif sim.failure_policy == "append_own_view":
        canonical = [
            versions[k][0] if k in producers else base[k - 1]
            for k in range(1, params.K + 1)
        ]
        _append_epoch(sim, canonical, [1] * params.K, views)
    else:
        stalled = True

    sim.epoch = t
    statuses = {
        node.node: ("adversarial" if node.role == "adversarial" else outcome.status)
        for node in sim.nodes
    }
    accepted = {
        node.node: (list(bits) if bits is not None else None)
        for node in sim.nodes
        if node.role == "honest"
    }
    messages = {
        "unicast": len(producers) * params.N,
        "broadcast": (params.K - len(producers)) * params.N
        + (params.N - n_silent) * params.N,
    }
    return EpochReport(
        epoch=t,
        statuses=statuses,
        accepted=accepted,
        chain_divergence=sim.chain_divergence(),
        messages=messages,
        stalled=stalled,
        recovered_values=recovered_values,
        diagnostics=diagnostics,
    )


def _canonical_blocks(sim, decoded_poly, base, versions, views, producers):
    """Blocks the network as a whole accepted, identified from the decoded polynomial.

    Under an attack that still decodes (a dominant version absorbing the rest
    as errors), the decoded polynomial singles out one realized version tuple.
    """
    if not producers:
        return list(base)
    params, fn = sim.params, sim.fn
    realized = {views[n] for n in views}
    for view in realized:
        composed = compose_verification(
            build_coded_poly(view, params), sim.history_polys, fn
        )
        if composed == decoded_poly:
            return list(view)
    # freak alignment with no realized view; keep first versions for bookkeeping
    return [
        versions[k][0] if k in producers else base[k - 1]
        for k in range(1, params.K + 1)
    ]


def _append_epoch(sim, canonical, bits, views):
    """Append e_k * X_k per shard and the matching coded entries per node.

    Honest nodes encode *their own* received view, so a node whose view lost
    the decode silently diverges; adversarial nodes track the canonical chain.
    """
    params = sim.params
    accepted = [b * x for b, x in zip(bits, canonical)]
    for chain, block in zip(sim.chains, accepted):
        chain.blocks.append(block)
    p_t = build_coded_poly(tuple(accepted), params)
    sim.history_polys.append(p_t)
    canonical_basis = tuple(b.value for b in accepted)
    for node in sim.nodes:
        if node.role == "honest":
            masked = tuple(b * x for b, x in zip(bits, views[node.node]))
            node.coded_chain.append(encode_at_node(masked, params, node.node))
            node.chain_basis.append(tuple(b.value for b in masked))
        else:
            node.coded_chain.append(p_t(node.alpha))
            node.chain_basis.append(canonical_basis)


@dataclass(frozen=True)
class CommLoad:
    """Delivery counts: unicast = proposal deliveries, broadcast = result deliveries."""

    unicast: int
    broadcast: int

    @property
    def total(self) -> int:
        return self.unicast + self.broadcast


def comm_load(params: EncodingParams, mitigation: str = "none") -> CommLoad:
    """Analytic per-epoch delivery counts, exact integers.

    Baseline: K*N proposal deliveries plus N result broadcasts reaching N
    recipients each. full_rebroadcast additionally has every node broadcast
    its K received blocks: N*K*N more deliveries.
    """
    if mitigation not in ("none", "full_rebroadcast"):
        raise ValueError(f"unknown mitigation {mitigation!r}")
    unicast = params.K * params.N
    broadcast = params.N * params.N
    if mitigation == "full_rebroadcast":
        broadcast += params.N * params.K * params.N
    return CommLoad(unicast=unicast, broadcast=broadcast)
