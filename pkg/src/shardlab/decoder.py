"""Recovery of the composed verification polynomial from node broadcasts.

Decoding is a single linear solve (error locator times received value equals
error-adjusted numerator), so a broadcast set that mixes evaluations of
several polynomials fails cleanly instead of producing a silent wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Container, Sequence

from .adversary import VersionAssignment
from .field_poly import FieldElement, Matrix, Polynomial, solve_linear
from .lcc import EncodingParams, all_version_tuples

RECOVERED = "recovered"
FAILURE = "failure"

# Membership test for verification outputs that affirm a block.
AcceptSet = Container[FieldElement]


class InsufficientEvaluations(ValueError):
    """Too few present evaluations to attempt a decode at the requested radius."""


@dataclass(frozen=True)
class BroadcastEntry:
    """One node's broadcast result; value None models a silent adversary."""

    node: int
    point: FieldElement
    value: FieldElement | None


class BroadcastSet:
    """The results every node holds after the broadcast round."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[BroadcastEntry]):
        nodes = [e.node for e in entries]
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node index in broadcast set")
        self.entries = tuple(entries)

    def present(self) -> list[BroadcastEntry]:
        return [e for e in self.entries if e.value is not None]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DecodeOutcome:
    status: str
    poly: Polynomial | None = None
    error_positions: frozenset[int] = frozenset()
    diagnostics: str = ""

    @property
    def recovered(self) -> bool:
        return self.status == RECOVERED


def _failure(reason: str) -> DecodeOutcome:
    return DecodeOutcome(status=FAILURE, diagnostics=reason)


def rs_decode(b: BroadcastSet, degree_bound: int, max_errors: int) -> DecodeOutcome:
    """Decode a polynomial of degree <= degree_bound from b, tolerating max_errors.

    Solves for a monic error locator E of degree max_errors and a numerator Q
    of degree <= degree_bound + max_errors with Q(a) = y*E(a) at every present
    entry; the codeword is Q/E when the division is exact. Missing entries are
    dropped first (shortening), so max_errors counts among the present ones.
    """
    if degree_bound < 0 or max_errors < 0:
        raise ValueError("degree_bound and max_errors must be >= 0")
    present = b.present()
    m = len(present)
    needed = degree_bound + 1 + 2 * max_errors
    if m < needed:
        raise InsufficientEvaluations(
            f"{m} present evaluations, {needed} required for degree {degree_bound} "
            f"with {max_errors} errors"
        )
    field = present[0].point.field
    p = field.modulus
    e = max_errors
    qn = degree_bound + e + 1  # numerator coefficient count
    rows = []
    rhs = []
    for entry in present:
        x = entry.point.value
        y = entry.value.value
        powers = [1]
        for _ in range(degree_bound + e):
            powers.append(powers[-1] * x % p)
        #   Q(x) - y*(E_0 + ... + E_{e-1} x^{e-1}) = y*x^e
        row = [(-y * powers[j]) % p for j in range(e)]
        row += powers[:qn]
        rows.append(row)
        rhs.append(field(y * pow(x, e, p)))
    solution = solve_linear(Matrix(field, rows, ncols=e + qn), rhs)
    if solution is None:
        return _failure("no error locator explains the broadcast values")
    locator = Polynomial(field, list(solution[:e]) + [1])
    numerator = Polynomial(field, solution[e:])
    quotient, remainder = divmod(numerator, locator)
    if not remainder.is_zero:
        return _failure("error locator does not divide the numerator")
    if (quotient.degree or 0) > degree_bound:
        return _failure(
            f"candidate polynomial has degree {quotient.degree}, bound is {degree_bound}"
        )
    bad = frozenset(
        entry.node for entry in present if quotient(entry.point) != entry.value
    )
    if len(bad) > max_errors:
        return _failure(
            f"candidate polynomial disagrees with {len(bad)} entries, only "
            f"{max_errors} errors allowed"
        )
    return DecodeOutcome(
        status=RECOVERED,
        poly=quotient,
        error_positions=bad,
        diagnostics=f"{len(bad)} corrected among {m} present entries",
    )


def recover_outputs(poly: Polynomial, params: EncodingParams) -> list[FieldElement]:
    """Per-shard verification values: the decoded polynomial at every shard point."""
    if (poly.degree or 0) > params.composed_degree:
        raise ValueError(
            f"polynomial degree {poly.degree} exceeds the composed bound "
            f"{params.composed_degree}"
        )
    return [poly(omega) for omega in params.omegas]


def accept_bits(h: Sequence[FieldElement], accept_set: AcceptSet) -> list[int]:
    """Bit per shard: 1 iff the shard's verification value lies in the accept set."""
    return [1 if value in accept_set else 0 for value in h]


def known_behavior_decode(
    b: BroadcastSet,
    assignment: VersionAssignment,
    degree_bound: int,
    max_errors: int,
    params: EncodingParams,
) -> DecodeOutcome:
    """Decode assuming the version each node received is known.

    Entries are partitioned by full version tuple; each cell large enough to
    interpolate is decoded on its own with an error budget scaled to the cell.
    A cell's answer counts only when it fits at least degree_bound+1+max_errors
    of the cell's entries: a wrong polynomial can fit at most degree_bound plus
    the corruptions inside the cell, so every certified answer is the cell's
    true polynomial. Certified cells must still agree at every honest shard
    point; disagreement means max_errors understated the corruption and is a
    diagnosed failure, not an answer.
    """
    by_tuple: dict[tuple, list[BroadcastEntry]] = {}
    for entry in b:
        try:
            tup = assignment.tuple_for(entry.node)
        except KeyError:
            raise ValueError(f"assignment does not cover node {entry.node}") from None
        by_tuple.setdefault(tup, []).append(entry)

    attempted = 0
    certified: list[tuple[tuple, DecodeOutcome]] = []
    for tup in all_version_tuples(assignment.v, len(assignment.producers)):
        cell = by_tuple.get(tup, [])
        present = sum(1 for entry in cell if entry.value is not None)
        budget = min(max_errors, (present - degree_bound - 1) // 2)
        if budget < 0:
            continue
        attempted += 1
        out = rs_decode(BroadcastSet(cell), degree_bound, budget)
        if not out.recovered:
            continue
        fit = present - len(out.error_positions)
        if fit >= degree_bound + 1 + max_errors:
            certified.append((tup, out))
    if not attempted:
        raise InsufficientEvaluations(
            f"no version cell holds {degree_bound + 1} present evaluations"
        )
    if not certified:
        return _failure("no version cell produced a certified decode")

    honest_shards = [k for k in range(1, params.K + 1) if k not in assignment.producers]
    ref_tuple, ref = certified[0]
    for tup, out in certified[1:]:
        for k in honest_shards:
            omega = params.omegas[k - 1]
            if out.poly(omega) != ref.poly(omega):
                return _failure(
                    f"cells {ref_tuple} and {tup} disagree at honest shard {k}"
                )
    return ref
