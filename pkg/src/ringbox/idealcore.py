"""Additive-generator accumulation and basis representations of ideals.

Starting from ideal generators, the accumulation loop grows an additive
generating set: for each ring generator r it swap-tests whether r*B equals B;
on failure it draws uniform elements of r*B until one fails the membership
swap test and adjoins it.  A full scan in which every ring generator either
fixes B or yields no fresh element certifies that B is closed under
multiplication, hence equals the ideal.  Each adjoined element at least
doubles the generated group, so the number of augmentations is at most
log2 of the ideal order.

Every accumulated element carries a provenance expression over the original
ideal generators (integer scaling, sums, and one-sided products with ring
generators); re-evaluating the expression through the oracles reproduces the
element's code exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2

from .abelian import InvariantFactorBasis, combine_codes, decompose_element, decompose_group
from .blackbox import ElementCode, RingOracle
from .errors import ClosureError, MembershipError, PreconditionError
from .qsim import PrimitiveProvider, SubgroupDescriptor

__all__ = [
    "IdealSpec",
    "Provenance",
    "GenRef",
    "ScaledSum",
    "SideProduct",
    "AccumulationResult",
    "BasisRepresentation",
    "accumulate_additive_generators",
    "find_basis_representation",
    "representation_from_additive",
    "multiplication_tensor",
    "membership_witness",
]

SIDES = ("left", "right", "two")


@dataclass(frozen=True)
class IdealSpec:
    """An ideal given by generators and a sidedness."""

    side: str
    generators: tuple[ElementCode, ...]

    def __post_init__(self):
        if self.side not in SIDES:
            raise PreconditionError(f"side must be one of {SIDES}, got {self.side!r}")
        if not self.generators:
            raise PreconditionError("an ideal spec needs at least one generator")


class Provenance:
    """Formal expression over the original ideal generators."""

    def evaluate(self, chan, ideal_gens, ring_gens, zero: ElementCode) -> ElementCode:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


@dataclass(frozen=True)
class GenRef(Provenance):
    index: int

    def evaluate(self, chan, ideal_gens, ring_gens, zero):
        return ideal_gens[self.index]

    def to_json(self):
        return {"op": "gen", "index": self.index}

    def __str__(self):
        return f"i{self.index + 1}"


@dataclass(frozen=True)
class ScaledSum(Provenance):
    """sum_j coeff_j * term_j with integer coefficients >= 0."""

    coeffs: tuple[int, ...]
    terms: tuple[Provenance, ...]

    def evaluate(self, chan, ideal_gens, ring_gens, zero):
        codes = [t.evaluate(chan, ideal_gens, ring_gens, zero) for t in self.terms]
        return combine_codes(chan, codes, self.coeffs, zero=zero)

    def to_json(self):
        return {
            "op": "sum",
            "coeffs": list(self.coeffs),
            "terms": [t.to_json() for t in self.terms],
        }

    def __str__(self):
        parts = [
            f"{c}*{t}" if c != 1 else str(t)
            for c, t in zip(self.coeffs, self.terms)
            if c != 0
        ]
        return "(" + " + ".join(parts) + ")" if parts else "0"


@dataclass(frozen=True)
class SideProduct(Provenance):
    """Product of a ring generator with a sub-expression, on one side."""

    side: str  # "left": r * expr, "right": expr * r
    ring_gen_index: int
    inner: Provenance

    def evaluate(self, chan, ideal_gens, ring_gens, zero):
        val = self.inner.evaluate(chan, ideal_gens, ring_gens, zero)
        r = ring_gens[self.ring_gen_index]
        return chan.mul(r, val) if self.side == "left" else chan.mul(val, r)

    def to_json(self):
        return {
            "op": "lmul" if self.side == "left" else "rmul",
            "ring_gen": self.ring_gen_index,
            "inner": self.inner.to_json(),
        }

    def __str__(self):
        r = f"r{self.ring_gen_index + 1}"
        return f"{r}*{self.inner}" if self.side == "left" else f"{self.inner}*{r}"


@dataclass
class AccumulationResult:
    """Additive generators of (I,+) with provenance and loop telemetry."""

    entries: tuple[tuple[ElementCode, Provenance], ...]
    basis: InvariantFactorBasis
    rounds: int
    sizes: tuple[int, ...]  # group order after the initial set and each augmentation
    decisions: int

    @property
    def codes(self) -> tuple[ElementCode, ...]:
        return tuple(c for c, _ in self.entries)


@dataclass(frozen=True)
class BasisRepresentation:
    """Invariant-factor generators, their orders, the multiplication tensor
    M[i][j][k] with h_i h_j = sum_k M[i][j][k] h_k, and per-generator
    provenance over the original ideal generators."""

    basis: InvariantFactorBasis
    tensor: tuple[tuple[tuple[int, ...], ...], ...]
    provenance: tuple[Provenance, ...]
    trace: AccumulationResult | None = None

    @property
    def orders(self) -> tuple[int, ...]:
        return self.basis.s

    def order(self) -> int:
        return self.basis.order()


def _mul_side(ring: RingOracle, side: str, r: ElementCode, x: ElementCode) -> ElementCode:
    return ring.mul(r, x) if side == "left" else ring.mul(x, r)


def _scan_plan(ring: RingOracle, side: str, ring_generators):
    gens = tuple(ring_generators) if ring_generators is not None else ring.generators
    if side == "left":
        return [("left", i) for i in range(len(gens))], gens
    if side == "right":
        return [("right", i) for i in range(len(gens))], gens
    plan = []
    for i in range(len(gens)):
        plan.append(("left", i))
        plan.append(("right", i))
    return plan, gens


def accumulate_additive_generators(
    ring: RingOracle,
    ideal: IdealSpec,
    provider: PrimitiveProvider,
    ring_generators=None,
) -> AccumulationResult:
    """Grow the ideal generators into an additive generating set of (I,+).

    Scan order over the ring generators is fixed and restarts after every
    augmentation.  Membership sampling for one scan entry is capped at
    ceil(log2(1/epsilon)) + 4 draws; exhausting the cap leaves that entry for
    the next scan (statistically it certifies r*B inside B, the closure
    condition).  Termination: a complete scan with no augmentation.
    """
    plan, ring_gens = _scan_plan(ring, ideal.side, ring_generators)
    entries: list[tuple[ElementCode, Provenance]] = [
        (code, GenRef(i)) for i, code in enumerate(ideal.generators)
    ]
    basis = decompose_group(ring, [c for c, _ in entries], provider)
    sizes = [basis.order()]
    rounds = 0
    cap = ceil(log2(1.0 / provider.config.epsilon)) + 4
    decisions_before = provider.stats["decisions"]
    while True:
        augmented = False
        for side, gi in plan:
            r = ring_gens[gi]
            scaled = tuple(_mul_side(ring, side, r, h) for h in basis.h)
            b_desc = SubgroupDescriptor(ring, basis.h, basis=basis)
            rb_desc = SubgroupDescriptor(ring, scaled)
            if provider.is_subset_decision(rb_desc, b_desc):
                continue
            for _ in range(cap):
                x, coeffs = provider.sample_uniform(b_desc)
                cand = _mul_side(ring, side, r, x)
                if provider.membership(cand, b_desc):
                    continue
                prov = _compose_provenance(side, gi, coeffs, basis, entries)
                entries.append((cand, prov))
                basis = decompose_group(ring, [c for c, _ in entries], provider)
                sizes.append(basis.order())
                rounds += 1
                augmented = True
                break
            if augmented:
                break
        if not augmented:
            break
    return AccumulationResult(
        entries=tuple(entries),
        basis=basis,
        rounds=rounds,
        sizes=tuple(sizes),
        decisions=provider.stats["decisions"] - decisions_before,
    )


def _compose_provenance(side, ring_gen_index, coeffs, basis, entries):
    """Provenance of r * (sum_t coeffs_t h_t) over the accumulated entries."""
    # express the sampled element over the entry list through to_original
    entry_coeffs = [0] * len(entries)
    for t, c in enumerate(coeffs):
        if c == 0:
            continue
        for j, w in enumerate(basis.to_original[t]):
            entry_coeffs[j] += c * w
    terms = []
    weights = []
    for j, w in enumerate(entry_coeffs):
        if w:
            weights.append(w)
            terms.append(entries[j][1])
    inner = ScaledSum(tuple(weights), tuple(terms))
    return SideProduct(side, ring_gen_index, inner)


def multiplication_tensor(
    ring: RingOracle,
    basis: InvariantFactorBasis,
    provider: PrimitiveProvider,
):
    """M[i][j][k] in [0, s_k) with h_i h_j = sum_k M[i][j][k] h_k.

    One oracle multiplication plus one decomposition per (i, j) pair; a
    product falling outside the span means the basis is not multiplicatively
    closed.
    """
    l = len(basis.h)
    tensor = []
    for i in range(l):
        row = []
        for j in range(l):
            prod = ring.mul(basis.h[i], basis.h[j])
            try:
                coords = decompose_element(ring, prod, basis, provider)
            except MembershipError as exc:
                raise ClosureError(
                    f"h_{i + 1} * h_{j + 1} escapes the span; "
                    "the basis does not span a multiplicatively closed set"
                ) from exc
            row.append(coords)
        tensor.append(tuple(row))
    return tuple(tensor)


def representation_from_additive(
    ring: RingOracle,
    entries,
    provider: PrimitiveProvider,
    basis: InvariantFactorBasis | None = None,
    trace: AccumulationResult | None = None,
) -> BasisRepresentation:
    """Basis representation of the multiplicatively closed set additively
    generated by ``entries`` (pairs of code and provenance)."""
    entries = tuple(entries)
    if basis is None:
        basis = decompose_group(ring, [c for c, _ in entries], provider)
    tensor = multiplication_tensor(ring, basis, provider)
    provenance = []
    for i in range(len(basis.h)):
        weights = []
        terms = []
        for j, w in enumerate(basis.to_original[i]):
            if w:
                weights.append(w)
                terms.append(entries[j][1])
        provenance.append(ScaledSum(tuple(weights), tuple(terms)))
    return BasisRepresentation(basis, tensor, tuple(provenance), trace)


def find_basis_representation(
    ring: RingOracle,
    ideal: IdealSpec,
    provider: PrimitiveProvider,
    ring_generators=None,
) -> BasisRepresentation:
    """Accumulate additive generators, then attach orders, tensor, and
    provenance (composed recursively through the accumulation steps)."""
    trace = accumulate_additive_generators(ring, ideal, provider, ring_generators)
    return representation_from_additive(
        ring, trace.entries, provider, basis=trace.basis, trace=trace
    )


def membership_witness(
    ring: RingOracle,
    r: ElementCode,
    ideal: IdealSpec,
    basisrep: BasisRepresentation,
    provider: PrimitiveProvider,
) -> Provenance:
    """Expression for a member r over the original ideal generators."""
    basis = basisrep.basis
    desc = SubgroupDescriptor(ring, basis.h, basis=basis)
    if not provider.membership(r, desc):
        raise MembershipError("element is not in the ideal")
    coords = decompose_element(ring, r, basis, provider)
    weights = []
    terms = []
    for i, c in enumerate(coords):
        if c:
            weights.append(c)
            terms.append(basisrep.provenance[i])
    return ScaledSum(tuple(weights), tuple(terms))
