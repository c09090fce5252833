import math
from fractions import Fraction

import pytest

from ringbox.blackbox import MatrixSpec, ModularSpec, PolyQuotSpec, make_ring, parse_element_literal
from ringbox.errors import HidingContractError, PreconditionError
from ringbox.qsim import (
    HidingFunction,
    PrimitiveProvider,
    ProviderConfig,
    SubgroupDescriptor,
)


def ring_z12(seed=7):
    return make_ring(ModularSpec(12), seed)


def codes(ring, *lits):
    return tuple(parse_element_literal(ring, str(v)) for v in lits)


def provider(backend="exact", seed=1, **kw):
    return PrimitiveProvider(ProviderConfig(backend=backend, seed=seed, **kw))


def scaled_descriptor(ring, prov, gens, r):
    chan = ring.unmetered
    return SubgroupDescriptor(ring, tuple(chan.mul(r, g) for g in gens))


def test_coset_overlap_examples():
    r = ring_z12()
    p = provider()
    (four,) = codes(r, 4)
    a = SubgroupDescriptor(r, (four,))
    five, three = codes(r, 5, 3)
    b = scaled_descriptor(r, p, (four,), five)  # 5*<4> = <4>
    assert p.coset_overlap(a, b) == 1.0
    c = scaled_descriptor(r, p, (four,), three)  # 3*<4> = {0}
    assert p.coset_overlap(a, c) == pytest.approx(1 / 3)
    assert p.coset_overlap(a, a) == 1.0


def test_subset_decision_examples():
    r = ring_z12()
    p = provider()
    (four,) = codes(r, 4)
    sub = SubgroupDescriptor(r, (four,))
    assert p.membership(four, sub)
    (two,) = codes(r, 2)
    assert not p.membership(two, sub)
    evens = SubgroupDescriptor(r, codes(r, 2))
    five_evens = scaled_descriptor(r, p, codes(r, 2), codes(r, 5)[0])
    assert p.is_subset_decision(five_evens, evens)


def test_sampled_decisions_agree_with_exact():
    r = ring_z12()
    pe = provider("exact")
    ps = provider("sampled", seed=9, epsilon=1e-3)
    gens_pool = codes(r, 0, 1, 2, 3, 4, 6, 8, 9)
    for g1 in gens_pool:
        for g2 in gens_pool:
            a = SubgroupDescriptor(r, (g1,))
            b = SubgroupDescriptor(r, (g2,))
            assert pe.is_subset_decision(a, b) == ps.is_subset_decision(a, b)
            for x in gens_pool:
                assert pe.membership(x, a) == ps.membership(x, a)


def test_swap_shot_law():
    p = provider("sampled", seed=5)
    shots = 10_000
    for c in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
        zeros = p.swap_shots(c, shots)
        want = float((1 + c * c) / 2)
        sigma = math.sqrt(want * (1 - want) / shots)
        assert abs(zeros / shots - want) <= max(3 * sigma, 1e-12)


def hiding_for_kernel(ring, gens, moduli):
    return HidingFunction(ring=ring, moduli=moduli, combo_generators=gens)


def test_characters_annihilate_hidden_subgroup():
    # G = Z_4 with hiding through 2*z mod 4 wait-free: use ring Z_4, gen 2
    r = make_ring(ModularSpec(4), 3)
    (two,) = codes(r, 2)
    p = provider("sampled", seed=2)
    hiding = hiding_for_kernel(r, (two,), (4,))  # kernel of z -> 2z: {0, 2}
    samples = p.sample_hidden_subgroup_characters(hiding, 64)
    assert set(samples) <= {(0,), (2,)}
    assert len(set(samples)) == 2  # both characters appear over 64 draws

    r12 = ring_z12()
    (one,) = codes(r12, 1)
    hiding = hiding_for_kernel(r12, (one,), (12,))  # injective: H={0}, dual full
    samples = p.sample_hidden_subgroup_characters(hiding, 200)
    assert len(set(samples)) > 6


def test_characters_z2xz2_diagonal():
    from ringbox.blackbox import ProductSpec

    r = make_ring(ProductSpec((ModularSpec(2), ModularSpec(2))), 1)
    chan = r.unmetered
    a = parse_element_literal(r, "(1, 1)")
    p = provider("sampled", seed=4)
    # hiding z1*(1,1) + z2*(1,1): kernel = {(0,0),(1,1)}
    hiding = hiding_for_kernel(r, (a, a), (2, 2))
    samples = p.sample_hidden_subgroup_characters(hiding, 64)
    assert set(samples) <= {(0, 0), (1, 1)}


def test_solve_ahsp_examples():
    r = ring_z12()
    (four,) = codes(r, 4)
    for backend in ("exact", "sampled"):
        p = provider(backend, seed=11)
        # hiding m -> 4m on Z_12: kernel <3>
        hiding = hiding_for_kernel(r, (four,), (12,))
        sub = p.solve_ahsp(hiding)
        assert sub.order == 4
        assert sub.contains((3,)) and not sub.contains((1,))

        (one,) = codes(r, 1)
        hiding = hiding_for_kernel(r, (one,), (12,))
        sub = p.solve_ahsp(hiding)
        assert sub.order == 1


def test_solve_ahsp_constant_function():
    r = make_ring(ModularSpec(6), 2)
    (one,) = codes(r, 1)
    zero_label = object()
    hiding = HidingFunction(
        ring=r, moduli=(6,), combo_generators=(one,), post=lambda c: zero_label
    )
    p = provider()
    sub = p.solve_ahsp(hiding)
    assert sub.order == 6


def test_hiding_contract_violation_detected():
    r = ring_z12()
    (one,) = codes(r, 1)
    # labels collapse non-coset-consistently: distinguish only codes of 0..5
    chan = r.verification
    lits = {codes(r, v)[0]: v for v in range(12)}
    bad_post = lambda c: lits[c] // 5  # not constant on cosets of any subgroup
    hiding = HidingFunction(
        ring=r, moduli=(12,), combo_generators=(one,), post=bad_post
    )
    p = provider()
    with pytest.raises(HidingContractError):
        p.solve_ahsp(hiding)


def test_find_additive_order_examples():
    r = ring_z12()
    four, one = codes(r, 4, 1)
    for backend in ("exact", "sampled"):
        p = provider(backend, seed=3)
        assert p.find_additive_order(r, four) == 3
        assert p.find_additive_order(r, one) == 12
    m = make_ring(MatrixSpec(2, ModularSpec(2)), 1)
    e11 = parse_element_literal(m, "1,0;0,0")
    assert provider().find_additive_order(m, e11) == 2
    assert provider("sampled").find_additive_order(m, e11) == 2


def test_additive_order_matches_brute_force_both_backends():
    from ringbox.blackbox import brute_force_enumerate

    for spec in (ModularSpec(36), PolyQuotSpec(2, (1, 1, 1))):
        r = make_ring(spec, 5)
        elems = sorted(brute_force_enumerate(r), key=lambda c: c.bits)
        chan = r.verification
        for backend in ("exact", "sampled"):
            p = provider(backend, seed=8)
            for a in elems:
                got = p.find_additive_order(r, a)
                # repeated addition: k*a == 0 iff (k*a) + a == a
                k = 1
                cur = a
                while chan.add(cur, a) != a:
                    cur = chan.add(cur, a)
                    k += 1
                assert got == k


def test_sample_uniform_chi_square():
    from ringbox.abelian import decompose_group

    r = ring_z12()
    p = provider(seed=6)
    (four,) = codes(r, 4)
    basis = decompose_group(r, (four,), p)
    desc = SubgroupDescriptor(r, (four,), basis=basis)
    counts = {}
    draws = 3000
    for _ in range(draws):
        code, coeffs = p.sample_uniform(desc)
        counts[code] = counts.get(code, 0) + 1
    assert len(counts) == 3
    expected = draws / 3
    chi2 = sum((n - expected) ** 2 / expected for n in counts.values())
    assert chi2 < 16.27  # chi-square 2 dof, p ~ 3e-4

    trivial_basis = decompose_group(r, codes(r, 0), p)
    desc0 = SubgroupDescriptor(r, codes(r, 0), basis=trivial_basis)
    code, coeffs = p.sample_uniform(desc0)
    assert coeffs == ()
    assert p.membership(code, desc0)


def test_multiplicative_order_in_quotient():
    from ringbox.abelian import QuotientView, decompose_group, ideal_lattice

    r = ring_z12()
    p = provider(seed=13)
    ring_basis = decompose_group(r, r.generators, p)
    three, four, two = codes(r, 3, 4, 2)
    for backend in ("exact", "sampled"):
        pb = provider(backend, seed=14)
        lat3 = ideal_lattice(r, (three,), ring_basis, pb)
        qv = QuotientView(r, ring_basis, lat3, pb)
        assert pb.find_multiplicative_order_in_quotient(qv, two) == 2

        lat4 = ideal_lattice(r, (four,), ring_basis, pb)
        qv4 = QuotientView(r, ring_basis, lat4, pb)
        assert pb.find_multiplicative_order_in_quotient(qv4, two) is None

    f4 = make_ring(PolyQuotSpec(2, (1, 1, 1)), 2)
    pf = provider(seed=15)
    f4_basis = decompose_group(f4, f4.generators, pf)
    x = parse_element_literal(f4, "[0, 1]")
    zero_lat = ideal_lattice(f4, (), f4_basis, pf)
    qv = QuotientView(f4, f4_basis, zero_lat, pf)
    assert pf.find_multiplicative_order_in_quotient(qv, x) == 3


def test_mult_order_precondition():
    from ringbox.abelian import QuotientView, decompose_group, ideal_lattice

    r = ring_z12()
    p = provider(seed=16)
    ring_basis = decompose_group(r, r.generators, p)
    three, six = codes(r, 3, 6)
    lat = ideal_lattice(r, (three,), ring_basis, p)
    qv = QuotientView(r, ring_basis, lat, p)
    with pytest.raises(PreconditionError):
        p.find_multiplicative_order_in_quotient(qv, six)  # 6 in (3)


def test_provider_fork_determinism():
    p1 = provider("sampled", seed=42)
    p2 = provider("sampled", seed=42)
    f1 = p1.fork("task")
    f2 = p2.fork("task")
    assert [f1.rng.random() for _ in range(5)] == [f2.rng.random() for _ in range(5)]
    assert p1.fork("other").rng.random() != p1.fork("task2").rng.random()
