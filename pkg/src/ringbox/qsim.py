"""Quantum-subroutine layer: overlap decisions, hidden-subgroup sampling,
order finding, uniform subgroup sampling.

Two backends share one interface.  The *exact* backend answers from ground
truth (set algebra over the ring construction).  The *sampled* backend
consults the same ground truth internally but exposes only measurement-shaped
data: swap-test shots with the correct Bernoulli law, characters drawn
uniformly from the annihilator dual, and period-finding outcomes concentrated
near multiples of q/c followed by continued-fraction reconstruction.
Consumers are written against the sample interface and never receive the
hidden structure directly.

All ground-truth queries run on the ring's unmetered channel: a stand-in
quantum device's internal oracle calls are not classical algorithm queries.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, lcm, log, sqrt
from random import Random

from .blackbox import ElementCode, RingOracle
from .errors import (
    HidingContractError,
    LowConfidenceError,
    PreconditionError,
)
from .intlinalg import (
    IntMatrix,
    LatticeBuilder,
    lattice_kernel_mod,
    subgroup_of_torus,
)

__all__ = [
    "ProviderConfig",
    "SubgroupDescriptor",
    "CoordSubgroup",
    "HidingFunction",
    "CharacterSample",
    "PrimitiveProvider",
    "fork_seed",
]

# character sample: one dual vector y with y_j in Z_{s_j}
CharacterSample = tuple[int, ...]


def fork_seed(seed: int, label: str) -> int:
    digest = hashlib.blake2b(f"{seed}|{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class ProviderConfig:
    """Backend selection and sampling budgets."""

    backend: str = "exact"  # "exact" | "sampled"
    swap_samples: int = 48
    character_batch: int | None = None  # None -> ambient rank + 32
    epsilon: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.backend not in ("exact", "sampled"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.swap_samples < 1:
            raise ValueError("swap_samples must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class SubgroupDescriptor:
    """A subgroup of (R,+) given by generators, optionally shifted to a coset.

    ``basis`` carries the invariant-factor structure once computed; uniform
    sampling requires it.
    """

    ring: RingOracle
    generators: tuple[ElementCode, ...]
    offset: ElementCode | None = None
    basis: object | None = None  # InvariantFactorBasis, once known

    def cache_key(self):
        return (self.ring._key, self.generators, self.offset)


@dataclass(frozen=True)
class CoordSubgroup:
    """A subgroup of Z_{s_1} x ... x Z_{s_l}, as produced by the hidden
    subgroup solver: independent generators plus the full relation lattice."""

    moduli: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    lattice: tuple[tuple[int, ...], ...]  # HNF columns spanning the lift in Z^l
    order: int

    def contains(self, vec) -> bool:
        lat = LatticeBuilder(len(self.moduli), seed_moduli=self.moduli)
        for col in self.lattice:
            lat.add(col)
        return lat.contains(vec)


@dataclass(frozen=True)
class HidingFunction:
    """Function on Z_{s_1} x ... x Z_{s_l} that is constant and distinct on
    cosets of a hidden subgroup.

    Every hiding map used here has the shape z -> post(sum_j z_j * g_j); the
    combo form lets the solver walk the coset graph with one group operation
    per edge.  ``post`` defaults to the identity (labels are element codes).
    """

    ring: RingOracle
    moduli: tuple[int, ...]
    combo_generators: tuple[ElementCode, ...]
    post: object = None  # callable code -> hashable label
    name: str = ""

    def label_of(self, code: ElementCode):
        return code if self.post is None else self.post(code)

    def evaluate(self, z) -> object:
        """Label at coordinate vector z (used for spot checks)."""
        chan = self.ring.unmetered
        acc = None
        for zj, g, s in zip(z, self.combo_generators, self.moduli):
            k = zj % s
            if k == 0:
                continue
            term = _scalar_mul(chan, g, k)
            acc = term if acc is None else chan.add(acc, term)
        if acc is None:
            acc = self.ring._zero_code()
        return self.label_of(acc)


def _scalar_mul(chan, code: ElementCode, k: int) -> ElementCode:
    """k*code for k >= 1 by doubling."""
    if k < 1:
        raise ValueError("scalar_mul needs k >= 1")
    acc = None
    base = code
    while k:
        if k & 1:
            acc = base if acc is None else chan.add(acc, base)
        k >>= 1
        if k:
            base = chan.add(base, base)
    return acc


class PrimitiveProvider:
    """One seeded provider per task; fork for concurrent/derived streams."""

    def __init__(self, config: ProviderConfig):
        self.config = config
        self.rng = Random(fork_seed(config.seed, "provider"))
        self.stats = {"decisions": 0, "characters": 0, "orders": 0, "samples": 0}
        self._closure_cache: dict = {}
        self._span_maps: dict = {}
        self.decomp_memo: dict = {}

    def fork(self, label: str) -> "PrimitiveProvider":
        cfg = ProviderConfig(
            backend=self.config.backend,
            swap_samples=self.config.swap_samples,
            character_batch=self.config.character_batch,
            epsilon=self.config.epsilon,
            seed=fork_seed(self.config.seed, label),
        )
        return PrimitiveProvider(cfg)

    @property
    def sampled(self) -> bool:
        return self.config.backend == "sampled"

    def _decision_shots(self) -> int:
        # false acceptance of "overlap 1" when the true overlap is <= 1/2 has
        # per-shot probability at most (1+1/4)/2 = 5/8
        need = ceil(log(1.0 / self.config.epsilon) / log(8.0 / 5.0))
        return max(self.config.swap_samples, need, 1)

    # ---- set algebra over descriptors (ground truth) ----

    def _subgroup_elements(self, desc: SubgroupDescriptor) -> frozenset:
        key = (desc.ring._key, desc.generators)
        cached = self._closure_cache.get(key)
        if cached is None:
            chan = desc.ring.unmetered
            zero = desc.ring._zero_code()
            seen = {zero}
            frontier = [zero]
            gens = [g for g in desc.generators]
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = chan.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
            cached = frozenset(seen)
            self._closure_cache[key] = cached
        return cached

    def _coset_elements(self, desc: SubgroupDescriptor) -> frozenset:
        base = self._subgroup_elements(desc)
        if desc.offset is None:
            return base
        chan = desc.ring.unmetered
        return frozenset(chan.add(desc.offset, x) for x in base)

    def _exact_overlap(self, a: SubgroupDescriptor, b: SubgroupDescriptor) -> Fraction:
        if a.ring is not b.ring:
            raise PreconditionError("descriptors live in different rings")
        sa = self._coset_elements(a)
        sb = self._coset_elements(b)
        return Fraction(len(sa & sb), max(len(sa), len(sb)))

    # ---- swap-test interface ----

    def swap_shots(self, overlap: Fraction, shots: int) -> int:
        """Simulated swap-test shots; returns the count of 0 outcomes.

        One shot reads 0 with probability (1 + c^2) / 2.
        """
        p0 = float((1 + overlap * overlap) / 2)
        return sum(1 for _ in range(shots) if self.rng.random() < p0)

    def coset_overlap(self, a: SubgroupDescriptor, b: SubgroupDescriptor) -> float:
        """Overlap |A∩B| / max(|A|,|B|) of two coset states."""
        c = self._exact_overlap(a, b)
        if not self.sampled:
            return float(c)
        t = self.config.swap_samples
        zeros = self.swap_shots(c, t)
        return sqrt(max(0.0, 2.0 * zeros / t - 1.0))

    def is_subset_decision(self, a: SubgroupDescriptor, b: SubgroupDescriptor) -> bool:
        """True iff the two coset states coincide (overlap exactly 1).

        Under the sampled backend a single ancilla-1 shot certifies overlap
        < 1; accepting after t all-zero shots errs with probability <=
        (5/8)^t when the true overlap is at most 1/2.
        """
        self.stats["decisions"] += 1
        c = self._exact_overlap(a, b)
        if not self.sampled:
            return c == 1
        p0 = float((1 + c * c) / 2)
        for _ in range(self._decision_shots()):
            if self.rng.random() >= p0:
                return False
        return True

    def membership(self, x: ElementCode, sub: SubgroupDescriptor) -> bool:
        """Swap-test membership: compare |B> against |x+B>."""
        coset = SubgroupDescriptor(sub.ring, sub.generators, offset=x)
        return self.is_subset_decision(coset, sub)

    # ---- hidden subgroup machinery ----

    def _coset_transversal(self, hiding: HidingFunction):
        """Walk the label graph; returns (reps, lattice) where reps maps each
        label to one coordinate representative and lattice spans all relations
        discovered (Schreier generators plus ambient s_j e_j)."""
        k = len(hiding.moduli)
        chan = hiding.ring.unmetered
        zero_code = hiding.ring._zero_code()
        zero = (0,) * k
        lattice = LatticeBuilder(k, seed_moduli=hiding.moduli)
        reps = {hiding.label_of(zero_code): (zero, zero_code)}
        queue = [(zero, zero_code)]
        while queue:
            z, code = queue.pop()
            for j in range(k):
                if hiding.moduli[j] == 1:
                    continue
                w = list(z)
                w[j] += 1
                nxt_code = chan.add(code, hiding.combo_generators[j])
                lab = hiding.label_of(nxt_code)
                known = reps.get(lab)
                if known is None:
                    reps[lab] = (tuple(w), nxt_code)
                    queue.append((tuple(w), nxt_code))
                else:
                    rel = [a - b for a, b in zip(w, known[0])]
                    if any(rel):
                        lattice.add(rel)
        return reps, lattice

    def _spot_check(self, hiding: HidingFunction, lattice: LatticeBuilder, checks=6):
        k = len(hiding.moduli)
        cols = lattice.basis_columns()
        for _ in range(checks):
            z = tuple(self.rng.randrange(s) for s in hiding.moduli)
            h = [0] * k
            for col in cols:
                c = self.rng.randrange(0, 3)
                if c:
                    h = [a + c * b for a, b in zip(h, col)]
            zh = tuple((a + b) % s for a, b, s in zip(z, h, hiding.moduli))
            if hiding.evaluate(z) != hiding.evaluate(zh):
                raise HidingContractError(
                    f"hiding {hiding.name or '<anonymous>'} is not constant on cosets"
                )

    def _hidden_subgroup_exact(self, hiding: HidingFunction):
        reps, lattice = self._coset_transversal(hiding)
        self._spot_check(hiding, lattice)
        return reps, lattice

    def _coord_subgroup_from_lattice(self, moduli, lattice: LatticeBuilder) -> CoordSubgroup:
        cols = lattice.basis_columns()
        ambient = 1
        for s in moduli:
            ambient *= s
        order = ambient // lattice.determinant() if moduli else 1
        reduced = []
        for col in cols:
            vec = tuple(v % s for v, s in zip(col, moduli))
            if any(vec):
                reduced.append(vec)
        gens, orders = subgroup_of_torus(reduced, moduli) if reduced else ((), ())
        # independent generators are the canonical output; keep full lattice too
        return CoordSubgroup(tuple(moduli), gens, cols, order)

    def sample_hidden_subgroup_characters(
        self, hiding: HidingFunction, batch: int | None = None
    ) -> list[CharacterSample]:
        """Independent uniform samples from the character group annihilating
        the hidden subgroup."""
        moduli = hiding.moduli
        l = len(moduli)
        if batch is None:
            batch = self.config.character_batch or (l + 32)
        _, lattice = self._hidden_subgroup_exact(hiding)
        big = lcm(*moduli) if moduli else 1
        rows = []
        for col in lattice.basis_columns():
            rows.append([(col[j] % moduli[j]) * (big // moduli[j]) for j in range(l)])
        if rows:
            dual_basis = lattice_kernel_mod(
                IntMatrix.from_rows(rows), [big] * len(rows)
            )
        else:
            dual_basis = tuple(
                tuple(1 if i == j else 0 for j in range(l)) for i in range(l)
            )
        dual_vecs = [tuple(v % s for v, s in zip(col, moduli)) for col in dual_basis]
        dual_gens, dual_orders = subgroup_of_torus(
            [v for v in dual_vecs if any(v)], moduli
        )
        out = []
        for _ in range(batch):
            y = [0] * l
            for g, o in zip(dual_gens, dual_orders):
                c = self.rng.randrange(o)
                if c:
                    y = [a + c * b for a, b in zip(y, g)]
            out.append(tuple(a % s for a, s in zip(y, moduli)))
        self.stats["characters"] += batch
        return out

    def solve_ahsp(self, hiding: HidingFunction) -> CoordSubgroup:
        """Generators of the hidden subgroup.

        Exact backend: certain.  Sampled backend: reconstructed as the joint
        kernel of a batch of sampled characters; the batch size makes the
        failure probability negligible against the configured epsilon.
        """
        moduli = hiding.moduli
        l = len(moduli)
        if not self.sampled:
            _, lattice = self._hidden_subgroup_exact(hiding)
            return self._coord_subgroup_from_lattice(moduli, lattice)
        extra = max(32, ceil(log(1.0 / self.config.epsilon, 2)) + 8)
        batch = self.config.character_batch or (l + extra)
        samples = self.sample_hidden_subgroup_characters(hiding, batch)
        big = lcm(*moduli) if moduli else 1
        rows = [
            [y[j] * (big // moduli[j]) for j in range(l)] for y in samples
        ]
        lattice = LatticeBuilder(l, seed_moduli=moduli)
        if rows:
            for col in lattice_kernel_mod(IntMatrix.from_rows(rows), [big] * len(rows)):
                lattice.add(col)
        return self._coord_subgroup_from_lattice(moduli, lattice)

    # ---- order finding ----

    def find_additive_order(self, ring: RingOracle, a: ElementCode) -> int:
        """Smallest c >= 1 with c*a = 0.

        The sampled backend draws period-finding outcomes y ~ round(j*q/c)
        for uniform j, reconstructs candidate periods from continued-fraction
        convergents, and verifies the accumulated lcm through the metered
        addition oracle.
        """
        self.stats["orders"] += 1
        c = ring._additive_order(a)
        if not self.sampled:
            return c
        if c == 1:
            return 1
        q = 1 << (c * c).bit_length()  # smallest power of two with q > c^2
        acc = 1
        chan = ring.metered
        for _ in range(64):
            j = self.rng.randrange(c)
            y = (2 * j * q + c) // (2 * c)  # round(j*q/c)
            den = Fraction(y % q, q).limit_denominator(c).denominator
            acc = lcm(acc, den)
            # acc divides c; acc*a = 0 certifies acc = c
            if chan.add(_scalar_mul(chan, a, acc), a) == a:
                return acc
        raise LowConfidenceError("additive order did not stabilize")

    def find_multiplicative_order_in_quotient(self, quotient, r: ElementCode):
        """Period of the power sequence of r's image in the quotient, or None
        when the sequence has a preperiod (image not invertible).

        ``quotient`` must expose label_of(code), mul_cheat(code, code),
        mul(code, code) [metered], and size.
        """
        self.stats["orders"] += 1
        if quotient.label_of(r) == quotient.zero_label():
            raise PreconditionError("element lies in the ideal")
        seen = {}
        code = r
        k = 1
        while True:
            lab = quotient.label_of(code)
            if lab in seen:
                first = seen[lab]
                period = k - first
                if first > 1:
                    return None  # eventually periodic only
                break
            seen[lab] = k
            code = quotient.mul_cheat(code, r)
            k += 1
        if not self.sampled:
            return period
        size = quotient.size
        q = 1 << (size * size).bit_length()
        acc = 1
        for _ in range(64):
            j = self.rng.randrange(period)
            y = (2 * j * q + period) // (2 * period)
            den = Fraction(y % q, q).limit_denominator(size).denominator
            acc = lcm(acc, den)
            if acc == period:
                # verify r^(acc+1) = r through the metered oracle
                p = quotient.pow(r, acc + 1)
                if quotient.label_of(p) == quotient.label_of(r):
                    return acc
        raise LowConfidenceError("multiplicative order did not stabilize")

    # ---- uniform subgroup sampling ----

    def sample_uniform(self, sub: SubgroupDescriptor):
        """(element, coefficient vector) uniform over the subgroup; the
        coefficients decompose the element over the descriptor's basis."""
        basis = sub.basis
        if basis is None:
            raise PreconditionError("sample_uniform needs a computed basis")
        self.stats["samples"] += 1
        chan = sub.ring.unmetered
        coeffs = tuple(self.rng.randrange(s) for s in basis.s)
        acc = None
        for c, h in zip(coeffs, basis.h):
            if c == 0:
                continue
            term = _scalar_mul(chan, h, c)
            acc = term if acc is None else chan.add(acc, term)
        if acc is None:
            acc = sub.ring._zero_code()
        return acc, coeffs

    # ---- coordinate spans (cheat-layer service for decomposition) ----

    def span_coordinates(self, ring: RingOracle, basis) -> dict:
        """code -> coordinate tuple over an invariant-factor basis, for every
        element the basis spans.  Computed once per basis and cached."""
        key = (ring._key, basis.h, basis.s)
        cached = self._span_maps.get(key)
        if cached is not None:
            return cached
        chan = ring.unmetered
        zero = ring._zero_code()
        coords = {zero: (0,) * len(basis.s)}
        frontier = [(zero, (0,) * len(basis.s))]
        while frontier:
            code, vec = frontier.pop()
            for j, (h, s) in enumerate(zip(basis.h, basis.s)):
                nxt = chan.add(code, h)
                if nxt not in coords:
                    w = list(vec)
                    w[j] = (w[j] + 1) % s
                    coords[nxt] = tuple(w)
                    frontier.append((nxt, tuple(w)))
        self._span_maps[key] = coords
        return coords
