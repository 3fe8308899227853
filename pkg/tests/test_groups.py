import pickle

import numpy as np
import pytest

from groups import (AutomorphismError, EnumerationLimitError, GroupError, NotAHomomorphismError,
                    NotBijectiveError, automorphism_from_generator_images, automorphism_group_orders,
                    automorphisms_of_order, conjugacy_representatives, count_automorphisms, cycle_of,
                    cyclic_group,
                    enumerate_automorphisms, identity_automorphism, inversion_automorphism, make_group,
                    multiplication_automorphism, parse_automorphism, parse_descriptor,
                    verify_group_axioms, Automorphism)


@pytest.mark.parametrize("text,name,order", [
    ("Z6", "Z6", 6),
    ("z6", "Z6", 6),
    ("Z4xZ2", "Z4xZ2", 8),
    ("Z2^3", "Z2^3", 8),
    ("Z3xZ3", "Z3^2", 9),
    ("d8", "D8", 8),
    ("D10", "D10", 10),
    ("Q8", "Q8", 8),
])
def test_descriptors(text, name, order):
    descriptor = parse_descriptor(text)
    assert descriptor.name == name
    assert descriptor.order == order


@pytest.mark.parametrize("text", ["", "S3", "D7", "Q16", "Z1xZ4", "Zx"])
def test_bad_descriptors(text):
    with pytest.raises(GroupError):
        parse_descriptor(text)


@pytest.mark.parametrize("name", ["Z1", "Z6", "Z3xZ3", "Z4xZ2", "Z2^3", "D6", "D8", "D10", "Q8"])
def test_group_axioms(name):
    assert verify_group_axioms(make_group(name)) == []


def test_order_limit():
    with pytest.raises(GroupError):
        make_group("Z20000")
    assert make_group("Z20000", max_order=20000).order == 20000


def test_groups_are_cached_and_picklable():
    assert make_group("Z6") is make_group("z6")
    assert make_group("Z6") == cyclic_group(6)
    q8 = make_group("Q8")
    assert pickle.loads(pickle.dumps(q8)) == q8


def test_cyclic_without_table_matches_table():
    big = make_group("Z300")
    xs = np.arange(300)
    assert np.array_equal(big.multiply_many(xs, xs[::-1]), (xs + xs[::-1]) % 300)
    assert big.quotient(7, 3) == 296


def test_dihedral_relations():
    d8 = make_group("D8")
    u, v = d8.parse_element("u"), d8.parse_element("v")
    assert d8.element_order(u) == 4
    assert d8.element_order(v) == 2
    # v u v = u^-1
    assert d8.multiply(d8.multiply(v, u), v) == d8.inverse(u)
    assert not d8.is_abelian


def test_quaternion_relations():
    q8 = make_group("Q8")
    u, v = q8.parse_element("u"), q8.parse_element("v")
    assert q8.multiply(v, v) == q8.power(u, 2)
    assert q8.element_order(v) == 4
    assert q8.multiply(q8.multiply(v, u), q8.inverse(v)) == q8.inverse(u)
    assert sorted(q8.element_order(x) for x in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_element_notation():
    d8 = make_group("D8")
    assert d8.format_element(0) == "e"
    assert d8.format_element(7) == "u3v"
    assert d8.parse_element("u^3v") == 7
    assert d8.parse_element("{u}^{3}v") == 7
    assert d8.parse_element("uv") == 5

    z42 = make_group("Z4xZ2")
    assert z42.format_element(6) == "30"
    assert z42.parse_element("30") == 6

    z311 = make_group("Z3xZ11")
    assert z311.format_element(12) == "1.1"
    assert z311.parse_element("1.1") == 12

    assert make_group("Z6").parse_sequence("(0, 4, 5, 2, 1, 3)") == [0, 4, 5, 2, 1, 3]


@pytest.mark.parametrize("group,token", [("Z6", "6"), ("Z6", "u"), ("Z4xZ2", "40"), ("D8", "w"), ("Q8", "")])
def test_bad_tokens(group, token):
    with pytest.raises(GroupError):
        make_group(group).parse_element(token)


def test_multiplication_automorphism_cycles(z7):
    times2 = parse_automorphism(z7, "1->2")
    assert times2 == multiplication_automorphism(z7, 2)
    assert times2.order == 3
    assert times2.cycles == [(0,), (1, 2, 4), (3, 6, 5)]
    assert cycle_of(times2, 3) == frozenset({3, 5, 6})


def test_vectorised_cycle_data_matches_generic():
    group = make_group("Z13")
    fast = multiplication_automorphism(group, 3)
    slow = Automorphism(group, fast.perm)
    assert np.array_equal(fast.cycle_representatives, slow.cycle_representatives)
    assert fast.order == slow.order == 3


def test_presented_automorphisms():
    d6 = make_group("D6")
    assert parse_automorphism(d6, "u->u^2, v->v").order == 2
    assert parse_automorphism(d6, "u->u, v->u^2v").order == 3
    assert parse_automorphism(d6, "u ↦ u, v ↦ u^2v").describe() == "u->u, v->u2v"

    z22 = make_group("Z2^2")
    assert parse_automorphism(z22, "01->10, 10->11").order == 3


def test_automorphism_errors(z6):
    with pytest.raises(NotBijectiveError):
        parse_automorphism(z6, "1->2")
    with pytest.raises(NotAHomomorphismError):
        parse_automorphism(make_group("D6"), "u->v, v->v")
    with pytest.raises(AutomorphismError):
        parse_automorphism(z6, "2->4")
    with pytest.raises(AutomorphismError):
        parse_automorphism(z6, "1")
    with pytest.raises(AutomorphismError):
        multiplication_automorphism(z6, 2)
    with pytest.raises(NotAHomomorphismError):
        inversion_automorphism(make_group("D6"))
    with pytest.raises(NotAHomomorphismError):
        Automorphism(z6, [1, 0, 2, 3, 4, 5])


def test_generator_images_as_mapping(z6):
    d6 = make_group("D6")
    aut = automorphism_from_generator_images(d6, {'u': 'u2', 'v': 'v'})
    assert aut.perm == parse_automorphism(d6, "u->u^2, v->v").perm
    assert automorphism_from_generator_images(z6, {1: 5}).perm == (0, 5, 4, 3, 2, 1)
    with pytest.raises(NotBijectiveError):
        automorphism_from_generator_images(z6, {1: 3})
    with pytest.raises(AutomorphismError):
        automorphism_from_generator_images(d6, {'u': 'u'})


def test_identity_and_inversion(z6):
    assert parse_automorphism(z6, "id").is_identity
    assert identity_automorphism(z6).order == 1
    neg = inversion_automorphism(z6)
    assert neg.perm == (0, 5, 4, 3, 2, 1)
    assert neg.compose(neg).is_identity
    assert neg.inverse() == neg
    assert multiplication_automorphism(make_group("Z7"), 3).power(6).is_identity


@pytest.mark.parametrize("name,count", [
    ("Z7", 6), ("Z9", 6), ("D6", 6), ("D8", 8), ("Q8", 24), ("Z2^3", 168), ("Z3xZ3", 48),
])
def test_automorphism_counts(name, count):
    automorphisms = enumerate_automorphisms(make_group(name))
    assert len(automorphisms) == count
    assert len({aut.perm for aut in automorphisms}) == count


def test_no_odd_order_automorphisms():
    for name in ("Z3", "Z15"):
        orders = automorphism_group_orders(make_group(name))
        assert all(o == 1 or o % 2 == 0 for o in orders)


def test_enumeration_limit():
    with pytest.raises(EnumerationLimitError):
        enumerate_automorphisms(make_group("Z64"))
    with pytest.raises(EnumerationLimitError):
        enumerate_automorphisms(make_group("Z2^5"))


@pytest.mark.parametrize("name,count", [
    ("Z7", 6), ("D8", 8), ("Q8", 24), ("Z2^3", 168), ("Z3xZ3", 48), ("Z4xZ2", 8), ("Z2^4", 20160),
])
def test_counts_without_enumeration(name, count):
    assert count_automorphisms(make_group(name)) == count


def test_elementary_abelian_16_enumerates():
    automorphisms = enumerate_automorphisms(make_group("Z2^4"))
    assert len(automorphisms) == 20160
    assert automorphisms == sorted(automorphisms, key=lambda aut: aut.perm)
    sample = automorphisms[::997]
    assert all(Automorphism(aut.group, aut.perm, check_homomorphism=True) == aut for aut in sample)


@pytest.mark.slow
def test_elementary_abelian_32_count():
    assert count_automorphisms(make_group("Z2^5")) == 9999360


def test_conjugacy_representatives():
    z7 = make_group("Z7")
    everything = enumerate_automorphisms(z7)
    assert len(conjugacy_representatives(automorphisms_of_order(z7, 3), everything)) == 2

    z33 = make_group("Z3xZ3")
    everything = enumerate_automorphisms(z33)
    of_order_3 = automorphisms_of_order(z33, 3)
    assert len(of_order_3) == 8
    assert len(conjugacy_representatives(of_order_3, everything)) == 1
