"""Lagrange coded computing with distributed encoding.

K shard payloads become evaluations of their degree-(K-1) interpolant; every
node stores and verifies one evaluation point of the global polynomials. Block
payloads are single field elements; coding a vector payload would act
componentwise and adds nothing to the phenomena studied here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .field_poly import (
    FieldElement,
    Polynomial,
    PrimeField,
    lagrange_interpolate,
)

# One block version index per adversarial producer, ordered by producer index.
VersionTuple = tuple[int, ...]

# Per-shard payloads (index k-1 = shard k) as seen by one node; adversarial
# shards may show different nodes different payloads.
ReceivedProposals = tuple[FieldElement, ...]


class DegreeOverflow(ValueError):
    """A composed verification polynomial exceeded its declared degree bound."""


def all_version_tuples(v: int, producers: int) -> list[VersionTuple]:
    """All version tuples in [1..v]^producers, lexicographic order."""
    return list(itertools.product(range(1, v + 1), repeat=producers))


@dataclass(frozen=True)
class EncodingParams:
    """Public encoding constants: shard points, node points, verification degree."""

    K: int
    N: int
    omegas: tuple[FieldElement, ...]
    alphas: tuple[FieldElement, ...]
    d: int

    def __post_init__(self):
        if self.K < 1 or self.N < 1 or self.d < 1:
            raise ValueError("K, N and d must all be >= 1")
        if len(self.omegas) != self.K or len(self.alphas) != self.N:
            raise ValueError("point counts must match K and N")
        points = [x.value for x in self.omegas + self.alphas]
        if len(set(points)) != len(points):
            raise ValueError("shard and node evaluation points must be pairwise distinct")

    @property
    def field(self) -> PrimeField:
        return self.omegas[0].field

    @property
    def composed_degree(self) -> int:
        """Degree bound d(K-1) of a verification polynomial composed with coded blocks."""
        return self.d * (self.K - 1)

    @classmethod
    def default(cls, K: int, N: int, d: int, field: PrimeField) -> "EncodingParams":
        """Canonical layout: shard k at k, node n at K+n (distinct by construction)."""
        return cls(
            K=K,
            N=N,
            omegas=tuple(field(k) for k in range(1, K + 1)),
            alphas=tuple(field(K + n) for n in range(1, N + 1)),
            d=d,
        )


def lagrange_basis(params: EncodingParams, k: int, z: FieldElement) -> FieldElement:
    """Evaluate the k-th shard basis polynomial at z: 1 at omega_k, 0 at the others."""
    if not 1 <= k <= params.K:
        raise ValueError(f"shard index {k} out of range 1..{params.K}")
    field = params.field
    omega_k = params.omegas[k - 1]
    num = field.one
    den = field.one
    for j, omega_j in enumerate(params.omegas, start=1):
        if j == k:
            continue
        num = num * (z - omega_j)
        den = den * (omega_k - omega_j)
    return num / den


def encode_at_node(received: ReceivedProposals, params: EncodingParams, n: int) -> FieldElement:
    """Coded block at node n: sum of received payloads weighted by basis values at alpha_n."""
    if not 1 <= n <= params.N:
        raise ValueError(f"node index {n} out of range 1..{params.N}")
    if len(received) != params.K:
        raise ValueError("a view must contain exactly one payload per shard")
    alpha = params.alphas[n - 1]
    acc = params.field.zero
    for k in range(1, params.K + 1):
        acc = acc + received[k - 1] * lagrange_basis(params, k, alpha)
    return acc


def build_coded_poly(view: ReceivedProposals, params: EncodingParams) -> Polynomial:
    """The degree-(K-1) polynomial taking value view[k-1] at omega_k for every shard."""
    if len(view) != params.K:
        raise ValueError("a view must contain exactly one payload per shard")
    return lagrange_interpolate(list(zip(params.omegas, view)))


def compose_verification(q: Polynomial, coded_history: Sequence[Polynomial], f) -> Polynomial:
    """Symbolically compose the verification function with coded polynomials.

    `f` must expose `degree` and `compose(q, history) -> Polynomial`. The result
    is checked against the total-degree bound implied by the inputs; exceeding
    it signals a verification function whose declared degree is wrong.
    """
    composed = f.compose(q, tuple(coded_history))
    input_degree = max(
        [q.degree or 0] + [h.degree or 0 for h in coded_history] or [0]
    )
    bound = f.degree * input_degree
    actual = composed.degree or 0
    if actual > bound:
        raise DegreeOverflow(
            f"composition has degree {actual}, exceeding the bound {bound} "
            f"for a degree-{f.degree} verification function"
        )
    return composed
