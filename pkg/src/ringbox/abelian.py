"""Finite abelian group structure over black-box ring elements.

Given additive generators, this module finds the invariant-factor form of the
group they span (additive orders, hidden-subgroup relation finding, Smith
reduction), decomposes individual elements over such a basis, and
canonicalizes cosets modulo a sub-lattice so quotient arithmetic can run on
small coordinate labels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blackbox import ElementCode, RingOracle
from .errors import LowConfidenceError, MembershipError, PreconditionError
from .intlinalg import IntMatrix, LatticeBuilder, egcd, smith_normal_form
from .qsim import HidingFunction, PrimitiveProvider, SubgroupDescriptor, _scalar_mul

__all__ = [
    "AbelianPresentation",
    "InvariantFactorBasis",
    "present_group",
    "decompose_group",
    "decompose_element",
    "coset_canonical_form",
    "subgroup_order",
    "ideal_lattice",
    "QuotientView",
    "combine_codes",
]


def _product(vals) -> int:
    out = 1
    for v in vals:
        out *= v
    return out


@dataclass(frozen=True)
class AbelianPresentation:
    """Generators with their additive orders and the lattice of relations
    among them (canonical column Hermite basis)."""

    generators: tuple[ElementCode, ...]
    orders: tuple[int, ...]
    relation_lattice: tuple[tuple[int, ...], ...]

    def group_order(self) -> int:
        # the group is Z^k modulo the relation lattice, so its order is the
        # lattice index in Z^k
        if not self.orders:
            return 1
        lat = LatticeBuilder(len(self.orders), seed_moduli=self.orders)
        for col in self.relation_lattice:
            lat.add(col)
        return lat.determinant()


@dataclass(frozen=True)
class InvariantFactorBasis:
    """Independent generators h_1..h_l with orders s_1 | s_2 | ... | s_l.

    to_original[i] expresses h_i over the input generators; from_original[j]
    expresses input generator j over the h_i (entries reduced mod orders).
    """

    h: tuple[ElementCode, ...]
    s: tuple[int, ...]
    to_original: tuple[tuple[int, ...], ...]
    from_original: tuple[tuple[int, ...], ...]

    def order(self) -> int:
        return _product(self.s)


def combine_codes(chan, codes, coeffs, zero: ElementCode | None = None) -> ElementCode:
    """sum_j coeffs[j] * codes[j] through the oracle channel.

    The empty combination needs an explicit zero code.
    """
    acc = None
    for c, code in zip(coeffs, codes):
        if c == 0:
            continue
        term = _scalar_mul(chan, code, c)
        acc = term if acc is None else chan.add(acc, term)
    if acc is None:
        if zero is None:
            raise PreconditionError("empty combination without a zero code")
        return zero
    return acc


def present_group(
    ring: RingOracle, gens, provider: PrimitiveProvider
) -> AbelianPresentation:
    """Orders plus relation lattice of a generator list.

    The relation lattice is the hidden subgroup of z -> code(sum_j z_j g_j)
    on Z_{s_1} x ... x Z_{s_k}.
    """
    gens = tuple(gens)
    if not gens:
        raise PreconditionError("present_group needs at least one generator")
    orders = tuple(provider.find_additive_order(ring, g) for g in gens)
    hiding = HidingFunction(
        ring=ring, moduli=orders, combo_generators=gens, name="relation-lattice"
    )
    hidden = provider.solve_ahsp(hiding)
    return AbelianPresentation(gens, orders, hidden.lattice)


def decompose_group(
    ring: RingOracle, gens, provider: PrimitiveProvider
) -> InvariantFactorBasis:
    """Invariant-factor basis of the group additively generated by ``gens``.

    Smith reduction of the relation lattice gives the change of basis; unit
    factors are dropped and the surviving orders ascend, each dividing the
    next.
    """
    pres = present_group(ring, gens, provider)
    k = len(pres.generators)
    rel_cols = pres.relation_lattice
    rel = (
        IntMatrix.from_rows([[col[i] for col in rel_cols] for i in range(k)])
        if rel_cols
        else IntMatrix.zeros(k, 0)
    )
    snf = smith_normal_form(rel)
    chan = ring.metered
    h_list: list[ElementCode] = []
    s_list: list[int] = []
    to_orig = []
    kept = []
    for i in range(k):
        d = snf.D.at(i, i) if i < min(snf.D.rows, snf.D.cols) else 0
        if d == 1:
            continue
        if d == 0:
            raise PreconditionError("generators do not span a finite group")
        coeffs = tuple(snf.u_inv.at(j, i) % pres.orders[j] for j in range(k))
        code = combine_codes(chan, pres.generators, coeffs)
        h_list.append(code)
        s_list.append(d)
        to_orig.append(coeffs)
        kept.append(i)
    from_orig = tuple(
        tuple(snf.U.at(i, j) % s_list[t] for t, i in enumerate(kept))
        for j in range(k)
    )
    return InvariantFactorBasis(tuple(h_list), tuple(s_list), tuple(to_orig), from_orig)


def _basis_descriptor(ring: RingOracle, basis: InvariantFactorBasis) -> SubgroupDescriptor:
    return SubgroupDescriptor(ring, basis.h, basis=basis)


def decompose_element(
    ring: RingOracle,
    x: ElementCode,
    basis: InvariantFactorBasis,
    provider: PrimitiveProvider,
) -> tuple[int, ...]:
    """Coefficients n with x = sum_j n_j h_j and 0 <= n_j < s_j.

    Solves the hidden-subgroup instance on Z_{s_1} x ... x Z_{s_l} x Z_s,
    s the additive order of x, whose kernel is the cyclic subgroup generated
    by the coefficient vector extended by -1; a combination with unit last
    coordinate reads off the coefficients.  Answers are memoized per basis.
    """
    memo = provider.decomp_memo.setdefault((ring._key, basis.h, basis.s), {})
    hit = memo.get(x)
    if hit is not None:
        return hit
    desc = _basis_descriptor(ring, basis)
    if not provider.membership(x, desc):
        raise MembershipError("element lies outside the spanned group")
    l = len(basis.s)
    if l == 0:
        memo[x] = ()
        return ()
    s = provider.find_additive_order(ring, x)
    retries = 1 if not provider.sampled else _log2_ceil(1.0 / provider.config.epsilon) + 2
    chan = ring.metered
    for _ in range(retries):
        vec = _decompose_via_hidden_cycle(ring, x, basis, s, provider)
        if vec is None:
            continue
        if any(vec):
            ok = combine_codes(chan, basis.h, vec) == x
        else:
            ok = chan.add(x, basis.h[0]) == basis.h[0]  # x must be the zero element
        if ok:
            memo[x] = vec
            return vec
    raise LowConfidenceError("element decomposition did not verify")


def _log2_ceil(v: float) -> int:
    out = 0
    acc = 1.0
    while acc < v:
        acc *= 2
        out += 1
    return out


def _decompose_via_hidden_cycle(ring, x, basis, s, provider):
    l = len(basis.s)
    if s == 1:  # x is the additive identity
        return (0,) * l
    hiding = HidingFunction(
        ring=ring,
        moduli=basis.s + (s,),
        combo_generators=basis.h + (x,),
        name="element-decomposition",
    )
    hidden = provider.solve_ahsp(hiding)
    # combine lattice generators into one with last coordinate 1 (mod s)
    g = s
    acc = None
    for col in hidden.lattice:
        m = col[l] % s
        if m == 0:
            continue
        gg, u, v = egcd(g, m)
        if acc is None:
            acc = [v * t for t in col]
        else:
            acc = [u * a + v * t for a, t in zip(acc, col)]
        g = gg
        if g == 1:
            break
    if acc is None or g != 1:
        return None
    # (acc_1..acc_l, 1) lies in the kernel: x = -sum acc_j h_j
    return tuple((-a) % sj for a, sj in zip(acc[:l], basis.s))


def subgroup_order(basis: InvariantFactorBasis) -> int:
    """Product of the invariant-factor orders."""
    return basis.order()


def ideal_lattice(
    ring: RingOracle,
    members,
    ring_basis: InvariantFactorBasis,
    provider: PrimitiveProvider,
) -> LatticeBuilder:
    """Coordinate lattice (over the ambient basis) spanned by ``members``
    plus the ambient order relations."""
    lat = LatticeBuilder(len(ring_basis.s), seed_moduli=ring_basis.s)
    for m in members:
        lat.add(decompose_element(ring, m, ring_basis, provider))
    return lat


def coset_canonical_form(
    ring: RingOracle,
    x: ElementCode,
    ring_basis: InvariantFactorBasis,
    sub_lattice: LatticeBuilder,
    provider: PrimitiveProvider,
) -> tuple[int, ...]:
    """Label equal for two elements iff they lie in the same coset of the
    sub-lattice's subgroup.

    Coordinates come from the provider's harvested span map (this label
    function sits inside hiding maps, so lookups must be cheap).
    """
    coords = provider.span_coordinates(ring, ring_basis).get(x)
    if coords is None:
        raise MembershipError("element lies outside the ambient basis span")
    return sub_lattice.reduce(coords)


class QuotientView:
    """Arithmetic on R/I through canonical coset labels.

    Labels are coordinate reductions over the ambient basis; products are
    computed on representatives through the ring oracle and re-reduced.
    ``mul``/``pow`` run metered (classical algorithm work); the ``*_cheat``
    twins serve the simulation layer.
    """

    def __init__(
        self,
        ring: RingOracle,
        ring_basis: InvariantFactorBasis,
        sub_lattice: LatticeBuilder,
        provider: PrimitiveProvider,
    ):
        self.ring = ring
        self.basis = ring_basis
        self.lattice = sub_lattice
        self._coords = provider.span_coordinates(ring, ring_basis)
        # residues modulo the sub-lattice are the quotient's elements
        self.size = sub_lattice.determinant()

    def label_of(self, code: ElementCode) -> tuple[int, ...]:
        coords = self._coords.get(code)
        if coords is None:
            raise MembershipError("element lies outside the ambient basis span")
        return self.lattice.reduce(coords)

    def zero_label(self) -> tuple[int, ...]:
        return self.lattice.reduce((0,) * len(self.basis.s))

    def mul(self, a: ElementCode, b: ElementCode) -> ElementCode:
        return self.ring.mul(a, b)

    def mul_cheat(self, a: ElementCode, b: ElementCode) -> ElementCode:
        return self.ring.unmetered.mul(a, b)

    def pow(self, code: ElementCode, k: int) -> ElementCode:
        """code^k for k >= 1 by repeated squaring (metered)."""
        return self._pow(code, k, self.ring.metered)

    def pow_cheat(self, code: ElementCode, k: int) -> ElementCode:
        return self._pow(code, k, self.ring.unmetered)

    @staticmethod
    def _pow(code, k, chan):
        if k < 1:
            raise ValueError("pow needs k >= 1")
        acc = None
        base = code
        while k:
            if k & 1:
                acc = base if acc is None else chan.mul(acc, base)
            k >>= 1
            if k:
                base = chan.mul(base, base)
        return acc
