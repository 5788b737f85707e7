import math

import pytest

import oracles
from discwall.central_charge import central_charge
from discwall.charges import Charge
from discwall.errors import UnsupportedClassError, WallAmbiguityError
from discwall.tropical import (CLAUSES, Edge, TropicalDisc, WeightVector, affine_length, balanced,
                               count_tropical, relative_class, tropicalize, validate)

G1, G2 = Charge(1, 0), Charge(0, 1)


def test_balanced_vectors():
    assert balanced([(1, 1 + 0j), (1, 1j), (1, -1 - 1j)])
    assert not balanced([(1, 1 + 0j), (1, 1j), (3, -1 - 1j)])


def test_single_leg_ov(ov):
    (d,) = tropicalize(G1, 2j, 6, ov)
    assert validate(d, ov).ok
    assert d.vertices[1] == pytest.approx(0)
    assert relative_class(d, ov) == G1
    assert affine_length(d, ov) == pytest.approx(2.0)


def test_double_cover_class(ov):
    d = TropicalDisc((2j, 0j), (Edge(1, 0, G1 * 2, 2),), ((1, 0),), 0.0)
    assert validate(d, ov).ok
    assert relative_class(d, ov) == G1 * 2
    assert affine_length(d, ov) == pytest.approx(4.0)


def test_pentagon_y_disc(pentagon):
    (d,) = tropicalize(G1 + G2, 2j, 6, pentagon)
    assert d.vertices[1] == pytest.approx(1j)
    assert sorted(v for _, v in d.leaves) == [0, 1]
    rep = validate(d, pentagon)
    assert rep.ok, rep.violations
    assert relative_class(d, pentagon) == G1 + G2
    assert affine_length(d, pentagon) == pytest.approx(abs(central_charge(G1 + G2, 2j, pentagon)))


def test_no_disc_inside_chamber(pentagon):
    assert tropicalize(G1 + G2, 0.5j, 6, pentagon) == []


def test_tropicalize_errors(pentagon):
    with pytest.raises(UnsupportedClassError):
        tropicalize(Charge(0, 0), 2j, 6, pentagon)
    with pytest.raises(WallAmbiguityError):
        tropicalize(G1 + G2, 1j, 6, pentagon)


def test_validate_reports_each_clause(pentagon):
    (good,) = tropicalize(G1 + G2, 2j, 6, pentagon)
    bent = TropicalDisc((2j, 0.9j + 0.1) + good.vertices[2:], good.edges, good.leaves, good.phase)
    assert CLAUSES[1] in validate(bent, pentagon).clauses()
    off = TropicalDisc((5j,) + good.vertices[1:], good.edges, good.leaves, good.phase)
    assert CLAUSES[2] in validate(off, pentagon).clauses()
    short = TropicalDisc(good.vertices[:2] + (0.5 + 0.5j, -0.5 + 0.5j), good.edges, (), good.phase)
    assert CLAUSES[3] in validate(short, pentagon).clauses()
    heavy = TropicalDisc(good.vertices, (good.edges[0],) + tuple(Edge(e.child, e.parent, e.charge, 3)
                                                                for e in good.edges[1:]),
                         good.leaves, good.phase)
    assert CLAUSES[4] in validate(heavy, pentagon).clauses()


def test_disc_dict_round_trip(pentagon):
    (d,) = tropicalize(G1 + G2, 2j, 6, pentagon)
    back = TropicalDisc.from_dict(d.to_dict())
    assert back.key() == d.key()
    assert validate(back, pentagon).ok


def test_weight_vector():
    w = WeightVector(((1, 2, 1), (3,)))
    assert w.parts == ((2, 1, 1), (3,))
    assert w.sizes() == (4, 3)
    assert w.aut() == 2
    with pytest.raises(ValueError):
        WeightVector(((0,),))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_counts_match_hand_enumeration(k):
    for w, expected in oracles.hand_tropical_counts(k).items():
        assert count_tropical(w, [G1, Charge(0, k)]) == expected, w


def test_counts_edge_cases():
    assert count_tropical(((1,), ()), [G1, G2]) == 0
    assert count_tropical(((1,),), [G1]) == 0
    assert count_tropical(((1,), (1,)), [G1, Charge(0, 2)]) == 2
    # independent of the generic offsets
    assert {count_tropical(((1, 1), (2,)), [G1, G2], seed=s) for s in range(5)} == {4}
    with pytest.raises(ValueError):
        count_tropical(((1,),), [G1, G2])


def test_count_symmetric_in_directions():
    a = count_tropical(((2,), (1, 1)), [G1, G2])
    b = count_tropical(((1, 1), (2,)), [G2, G1])
    assert a == b == 4
    assert math.isclose(a / WeightVector(((1, 1), (2,))).aut(), 2)
