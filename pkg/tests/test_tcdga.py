import pytest

from confcohom.tcdga import (
    FiniteCdga,
    FiniteTcdga,
    GradedModuleInput,
    TcdgaError,
    acyclic_cdga,
    box_permutation,
    constant_tcdga,
    decompose_into_adjacent,
    formal_tcdga,
    point_cdga,
    shuffle_forget,
    suspension,
    tcdga_from_json,
    tcdga_to_json,
)


def test_decompose_into_adjacent():

    def compose(p, q):
        return tuple(p[q[i] - 1] for i in range(len(p)))

    for perm in [(2, 1, 3), (3, 1, 2), (2, 3, 1), (3, 2, 1), (1, 2, 3), (4, 3, 2, 1)]:
        word = decompose_into_adjacent(perm)
        n = len(perm)
        acc = tuple(range(1, n + 1))
        for i in word:
            s = list(range(1, n + 1))
            s[i - 1], s[i] = s[i], s[i - 1]
            acc = compose(acc, tuple(s))
        assert acc == perm


def test_point_and_acyclic_cdgas_validate():
    assert point_cdga().validate().ok
    assert acyclic_cdga().validate().ok
    # Leibniz for the acyclic one: d(c*c) = 0 = cw + wc holds since products vanish
    omega = acyclic_cdga()
    assert omega.product({"c": 1}, {"c": 1}) == {}


def test_formal_tcdga_validates():
    for ring, ranks in (("Q", {2: 1}), ("Z", {1: 1, 2: 1}), ("Q", {})):
        a = formal_tcdga(GradedModuleInput(ring, ranks), 4)
        assert a.validate().ok


def test_constant_tcdga_validates():
    for omega in (point_cdga(), acyclic_cdga()):
        a = constant_tcdga(omega, 4)
        report = a.validate()
        assert report.ok, report.failures[:3]


def test_constant_degree_one_square_zero():
    # one generator x in degree 1 with x*x = 0 (forced over Q by commutativity)
    omega = FiniteCdga("Q", [("x", 1)], {}, {})
    assert omega.validate().ok
    a = constant_tcdga(omega, 3)
    assert a.validate().ok


def test_corrupted_sign_fails_validation():
    omega = point_cdga()
    a = constant_tcdga(omega, 3)
    # corrupt one multiplication sign
    a.mult[(1, 2)][("e", "e")] = {"e": -1}
    report = a.validate()
    assert not report.ok
    assert any("commutativity" in f or "associativity" in f for f in report.failures)


def test_arity_one_products_match_omega():
    omega = point_cdga()
    a = constant_tcdga(omega, 3)
    assert a.multiply(1, 1, {"e": 1}, {"e": 1}) == {"e": 1}
    assert a.multiply(1, 2, {"e": 1}, {"e": 1}) == {"e": 1}


def test_suspension_of_formal():
    h = GradedModuleInput("Q", {2: 1})
    a = formal_tcdga(h, 3)
    sa = suspension(a)
    assert sa.validate().ok
    # SA(2) sits in degree 4, with the sign action
    (name, deg), = sa.components[2]
    assert deg == 4
    assert sa.action[2][1][name] == {name: -1}


def test_suspension_of_point_constant():
    a = constant_tcdga(point_cdga(), 4)
    sa = suspension(a)
    assert sa.validate().ok
    # arity n component is one-dimensional in degree n with the sign action
    for n in range(1, 5):
        (name, deg), = sa.components[n]
        assert deg == n
        for i in range(1, n):
            assert sa.action[n][i][name] == {name: -1}


def test_suspension_of_acyclic_constant():
    a = constant_tcdga(acyclic_cdga(), 4)
    sa = suspension(a)
    assert sa.validate().ok


def test_suspension_involutive_on_dimensions():
    a = constant_tcdga(acyclic_cdga(), 3)
    ssa = suspension(suspension(a))
    for n in a.components:
        assert [(nm, d + 2 * n) for nm, d in a.components[n]] == ssa.components[n]
        for i in range(1, n):
            assert ssa.action[n][i] == a.action[n][i]


def test_shuffle_forget():
    a = formal_tcdga(GradedModuleInput("Q", {1: 1}), 3)
    s = shuffle_forget(a)
    assert s.mode == "shuffle"
    assert s.validate().ok
    s2 = shuffle_forget(constant_tcdga(point_cdga(), 3))
    assert s2.validate().ok
    with pytest.raises(TcdgaError):
        s2.act(2, (2, 1), {"e": 1})


def test_box_permutation():
    assert box_permutation(2, 1) == (2, 3, 1)
    assert box_permutation(1, 2) == (3, 1, 2)


def test_perm_action_composition():
    a = suspension(constant_tcdga(point_cdga(), 4))
    # sign representation: an arbitrary permutation acts by its sign
    name = a.components[4][0][0]
    assert a.act(4, (2, 3, 4, 1), {name: 1}) == {name: -1}  # 4-cycle, odd
    assert a.act(4, (2, 1, 4, 3), {name: 1}) == {name: 1}


def test_json_round_trip():
    a = constant_tcdga(acyclic_cdga(), 3)
    data = tcdga_to_json(a)
    b = tcdga_from_json(data)
    assert b.components == a.components
    assert b.diff == a.diff
    assert b.mult == a.mult
    assert b.validate().ok


def test_validate_is_pure():
    a = constant_tcdga(acyclic_cdga(), 3)
    r1 = a.validate()
    r2 = a.validate()
    assert r1.ok and r2.ok


def test_component_complex():
    a = constant_tcdga(acyclic_cdga(), 2)
    cx = a.component_complex(1)
    from confcohom.exactalg import cohomology

    h = cohomology(cx)
    assert h.data == {}  # dc = w: acyclic
