import math
import random

import pytest

from confcohom.exactalg import ExactMatrix, GradedComplex, cohomology
from confcohom.partitions import (
    SetPartition,
    act,
    enumerate_partitions,
    named_upset,
    perm_from_cycles,
)
from confcohom.posetcx import (
    BarComplex,
    FinitePoset,
    FunctorError,
    PosetError,
    PosetFunctor,
    bar_complex,
    constant_functor,
    order_complex,
    smash_check,
)


def chain_poset(k):
    """Total order 0 < 1 < ... < k-1."""
    return FinitePoset(list(range(k)), lambda a, b: a <= b)


def partition_poset(n, without_bottom=False):
    parts = enumerate_partitions(n)
    if without_bottom:
        parts = [p for p in parts if p != SetPartition.bottom(n)]
    return FinitePoset.from_partitions(parts)


def test_poset_validation():
    with pytest.raises(PosetError):
        FinitePoset([0, 1], lambda a, b: True)  # not antisymmetric


def test_one_point_hatcheck_is_sphere_zero():
    p = chain_poset(1)
    h = cohomology(order_complex(p, "hatcheck"))
    assert h.free_rank(0) == 1 and h.degrees() == [0]


def test_pi2_hatcheck_is_circle():
    p = partition_poset(2)
    h = cohomology(order_complex(p, "hatcheck"))
    assert h.degrees() == [1] and h.free_rank(1) == 1


def test_pi4_hatcheck():
    h = cohomology(order_complex(partition_poset(4), "hatcheck"))
    assert h.degrees() == [3]
    assert h.free_rank(3) == 6
    assert h.is_torsion_free()


def test_partition_hatcheck_factorial_ranks():
    for n in (2, 3, 4, 5):
        h = cohomology(order_complex(partition_poset(n), "hatcheck"))
        assert h.degrees() == [n - 1]
        assert h.free_rank(n - 1) == math.factorial(n - 1)
        assert h.is_torsion_free()


def test_plain_with_top_is_acyclic():
    # the order complex of a poset with a top element is a cone
    p = partition_poset(3, without_bottom=True)
    h = cohomology(order_complex(p, "plain"))
    assert h.data == {}


def test_hat_variant_suspends():
    # P with top: hat complex is the suspension of P minus its top
    p = chain_poset(3)
    h = cohomology(order_complex(p, "hat"))
    assert h.data == {}  # suspension of a contractible complex
    two = FinitePoset(["a", "b", "t"], lambda x, y: x == y or y == "t")
    h2 = cohomology(order_complex(two, "hat"))
    # suspension of two points: one circle
    assert h2.degrees() == [1] and h2.free_rank(1) == 1


def test_check_variant():
    two = FinitePoset(["b", "x", "y"], lambda s, t: s == t or s == "b")
    h = cohomology(order_complex(two, "check"))
    assert h.degrees() == [1] and h.free_rank(1) == 1


def test_missing_extremes_rejected():
    p = FinitePoset(["a", "b"], lambda x, y: x == y)  # antichain
    for variant in ("hat", "check", "hatcheck"):
        with pytest.raises(PosetError):
            order_complex(p, variant)


def test_smash_examples():
    point = chain_poset(1)
    assert smash_check(point, point)
    p2 = partition_poset(2)
    assert smash_check(p2, p2)
    prod = p2.product(p2)
    h = cohomology(order_complex(prod, "hatcheck", "Q"))
    assert h.degrees() == [2] and h.free_rank(2) == 1
    p3 = partition_poset(3)
    assert smash_check(p3, p2)
    assert smash_check(p3, p3)


def formal_one_dim_functor(carrier, degree, ring="Q"):
    """Each element carries one basis vector in a fixed degree; all maps zero
    except identities (used to mimic a multiplication-free coefficient)."""
    value = GradedComplex(ring, {degree: 1})
    zero = {}
    maps = {}
    for x in carrier.elements:
        for y in carrier.elements:
            if x != y and carrier.leq(x, y):
                maps[(x, y)] = zero
    return PosetFunctor(carrier, {x: value for x in carrier.elements}, maps, validate=False)


def test_bar_constant_full_upset():
    # constant coefficients, flavor B: cohomology of the order complex of U;
    # U = everything above bottom has a top element, hence contractible
    for n in (2, 3):
        carrier = partition_poset(n)
        u = [p for p in carrier.elements if p != SetPartition.bottom(n)]
        bar = bar_complex(u, constant_functor(carrier), "B")
        h = bar.cohomology()
        assert h.degrees() == [0] and h.free_rank(0) == 1
        tilde = bar_complex(u, constant_functor(carrier), "Btilde")
        assert tilde.cohomology().data == {}


def test_bar_constant_matches_order_complex_ranks():
    # flavor B with constant coefficients reproduces (unreduced) cohomology of
    # the order complex of U; check on upsets of Pi_3 and Pi_4
    rng = random.Random(4)
    for n in (3, 4):
        carrier = partition_poset(n)
        parts = enumerate_partitions(n)
        for _ in range(4):
            seed = rng.sample(parts, 2)
            u = sorted(
                {q for q in parts for g in seed if g != q and _leq(g, q) or q in seed},
                key=lambda p: p.rgs,
            )
            u = [q for q in parts if any(_leq(g, q) for g in seed)]
            if not u:
                continue
            bar = bar_complex(u, constant_functor(carrier), "B")
            h = bar.cohomology()
            sub = carrier.subposet(u)
            plain = cohomology(order_complex(sub, "plain", "Q"))
            # plain is reduced; unreduced adds one to degree 0
            for d in set(h.degrees()) | set(plain.degrees()) | {0}:
                expected = plain.free_rank(d) + (1 if d == 0 else 0)
                assert h.free_rank(d) == expected


def _leq(a, b):
    from confcohom.partitions import leq

    return leq(a, b)


def test_bar_two_term_formal():
    # U = {top} in Pi_2; coefficients mimic a multiplication-free tensor
    # functor: rank one in degree 4 at the bottom, degree 2 at the top
    carrier = partition_poset(2)
    bottom, top = SetPartition.bottom(2), SetPartition.top(2)
    at = {bottom: GradedComplex("Q", {4: 1}), top: GradedComplex("Q", {2: 1})}
    functor = PosetFunctor(carrier, at, {(bottom, top): {}}, validate=False)
    bar = bar_complex([top], functor, "Btilde")
    # empty chain in total degree 4, chain (top) in total degree 3
    assert bar.total.rank(4) == 1 and bar.total.rank(3) == 1
    assert bar.total.differentials == {}
    h = bar.cohomology()
    assert h.free_rank(3) == 1 and h.free_rank(4) == 1


def test_bar_rejects_non_upward_closed():
    carrier = partition_poset(3)
    with pytest.raises(PosetError):
        bar_complex([SetPartition.bottom(3)], constant_functor(carrier), "B")


def test_functor_validation_catches_broken_functoriality():
    carrier = chain_poset(3)
    value = GradedComplex("Q", {0: 1})
    ident = {0: ExactMatrix.identity("Q", 1)}
    twice = {0: ExactMatrix.from_rows("Q", [[2]])}
    maps = {(0, 1): ident, (1, 2): ident, (0, 2): twice}
    with pytest.raises(FunctorError):
        PosetFunctor(carrier, {x: value for x in carrier.elements}, maps)


def test_equivariance_identity_and_involution():
    carrier = partition_poset(2)
    value = GradedComplex("Q", {1: 1})
    maps = {}
    for x in carrier.elements:
        for y in carrier.elements:
            if x != y and carrier.leq(x, y):
                maps[(x, y)] = {}
    swap_sign = {1: ExactMatrix.from_rows("Q", [[-1]])}

    def action(perm, x):
        if perm == (1, 2) or x == SetPartition.top(2):
            return {1: ExactMatrix.identity("Q", 1)}
        return swap_sign

    functor = PosetFunctor(
        carrier,
        {x: value for x in carrier.elements},
        maps,
        action=action,
        act_on_element=act,
        validate=False,
    )
    bar = bar_complex([SetPartition.top(2)], functor, "Btilde")
    ident = bar.equivariant_action((1, 2))
    for d, m in ident.items():
        assert m == ExactMatrix.identity("Q", bar.total.rank(d))
    swap = bar.equivariant_action(perm_from_cycles(2, [(1, 2)]))
    # square of an involution is the identity
    for d, m in swap.items():
        assert (m @ m) == ExactMatrix.identity("Q", bar.total.rank(d))
    # the sign shows up on the empty-chain summand (coefficient at the bottom),
    # which sits in total degree 1
    assert swap[1][(0, 0)] == -1
    assert swap[2][(0, 0)] == 1


def test_chain_enumeration_order_deterministic():
    carrier = partition_poset(3)
    u = [p for p in carrier.elements if p != SetPartition.bottom(3)]
    b1 = bar_complex(u, constant_functor(carrier), "Btilde")
    b2 = bar_complex(u, constant_functor(carrier), "Btilde")
    assert b1.chains == b2.chains
    assert b1.total.basis_labels == b2.total.basis_labels


def test_debug_json_round_trippable():
    import json

    carrier = partition_poset(2)
    u = [SetPartition.top(2)]
    bar = bar_complex(u, constant_functor(carrier), "Btilde")
    dump = bar.debug_json()
    json.dumps(dump)  # serializable
    assert dump["flavor"] == "Btilde"
    degrees = {entry["degree"] for entry in dump["degrees"]}
    assert 0 in degrees and 1 in degrees
