import random

import pytest

from confcohom.ainfty import (
    AInftyError,
    FiniteDga,
    IdealData,
    build_morphism,
    hypothesis_check,
    random_dga_fixture,
    truncated_word_dga,
    verify_morphism,
)
from confcohom.tcdga import acyclic_cdga


def cw_fixture():
    """dc = w, all products zero; the ideal is spanned by w."""
    return FiniteDga.from_cdga(acyclic_cdga()), IdealData(["w"])


def sx_fixture():
    """s in degree 1 with ds = x; the ideal (x, sx, x^2) has nonvanishing
    products of representatives, which is what exercises the signs."""
    algebra = FiniteDga(
        "Q",
        [("s", 1), ("x", 2), ("sx", 3), ("x2", 4)],
        {"s": {"x": 1}, "sx": {"x2": 1}},
        {("s", "x"): {"sx": 1}, ("x", "s"): {"sx": 1}, ("x", "x"): {"x2": 1}},
    )
    return algebra, IdealData(["x", "sx", "x2"])


def test_dga_validation():
    algebra, _ = sx_fixture()
    assert algebra.validate().ok
    broken = FiniteDga("Q", [("a", 0), ("b", 1)], {"a": {"b": 1}}, {("a", "a"): {"b": 1}})
    assert not broken.validate().ok  # product not degree-additive


def test_ideal_validation():
    algebra, ideal = sx_fixture()
    assert ideal.validate(algebra).ok
    assert not IdealData(["s"]).validate(algebra).ok  # d(s) = x leaves the span
    assert not IdealData(["x"]).validate(algebra).ok  # s*x = sx leaves the span


def test_hypothesis_cw():
    algebra, ideal = cw_fixture()
    rep = hypothesis_check(algebra, ideal)
    assert rep.ok
    assert rep.h_ideal.free_rank(1) == 1
    assert rep.h_ambient.data == {}


def test_hypothesis_vacuous_when_ambient_acyclic():
    # I = A with H(A) = 0: nothing to check
    algebra, _ = cw_fixture()
    rep = hypothesis_check(algebra, IdealData(["c", "w"]))
    assert rep.ok


def test_hypothesis_negative_fixture():
    # w not a boundary: d = 0 everywhere
    algebra = FiniteDga("Q", [("c", 0), ("w", 1)], {}, {})
    rep = hypothesis_check(algebra, IdealData(["w"]))
    assert not rep.ok
    assert any("does not bound" in f for f in rep.failures)


def test_build_morphism_cw():
    algebra, ideal = cw_fixture()
    m = build_morphism(algebra, ideal)
    (cid, deg), = m.classes
    assert deg == 1
    assert m.f_map[cid] == {"w": 1}
    assert m.g_map[cid] == {"c": -1}
    # f_2 = +- w * (-c) = 0 since all products vanish
    assert m.f_n((cid, cid)) == {}
    assert verify_morphism(m, 6).ok


def test_build_morphism_zero_products():
    algebra, ideal = cw_fixture()
    m = build_morphism(algebra, ideal)
    for n in range(2, 5):
        assert m.f_n(tuple([m.classes[0][0]] * n)) == {}


def test_verify_sx_fixture():
    algebra, ideal = sx_fixture()
    m = build_morphism(algebra, ideal)
    (cid, deg), = m.classes
    assert deg == 2 and m.f_map[cid] == {"x": 1}
    assert m.f_n((cid, cid)) == {"sx": -1}  # (-1)^{|x|} x * (-s)
    report = verify_morphism(m, 6)
    assert report.ok


def test_corrupted_sign_fails_at_two():
    algebra, ideal = sx_fixture()
    m = build_morphism(algebra, ideal)
    m.g_map = {k: {n: -c for n, c in v.items()} for k, v in m.g_map.items()}
    report = verify_morphism(m, 4)
    assert not report.ok
    assert report.first_failure[0] == 2


def test_random_fixtures():
    rng = random.Random(99)
    for _ in range(8):
        algebra, ideal = random_dga_fixture(rng)
        assert hypothesis_check(algebra, ideal).ok
        m = build_morphism(algebra, ideal)
        assert verify_morphism(m, 4).ok


def test_word_dga_structure():
    algebra, ideal = truncated_word_dga([0], extra_cocycles=[1], max_word_length=2)
    assert algebra.validate().ok
    assert ideal.validate(algebra).ok
    # d is a derivation taking s0 to x0
    assert algebra.d({"s0": 1}) == {"x0": 1}
    assert algebra.product({"s0": 1}, {"x0": 1}) == {"s0_x0": 1}


def test_build_requires_hypotheses():
    algebra = FiniteDga("Q", [("c", 0), ("w", 1)], {}, {})
    with pytest.raises(AInftyError):
        build_morphism(algebra, IdealData(["w"]))
