from itertools import permutations

import pytest

from designs import balance_report, design_from_tuple
from golden_tables import load_published_tables
from groups import inversion_automorphism, make_group, multiplication_automorphism, parse_automorphism
from search import (MODE_ANY, MODE_GIVEN, MODE_TUPLE, STATUS_BUDGET_EXHAUSTED, STATUS_COMPLETE,
                    STATUS_WITNESS_LIMIT, SearchBudgetExhausted, SearchError, SearchSpec,
                    checked_design, fold_multipliers, iter_pseudoterraces, iter_tuples, primitive_root_family,
                    search_pseudoterraces, search_tuples, sweep_prime, sweep_primes,
                    verify_group_witness, verify_prime_witness, verify_table_witness)
from triangles import Arrangement, pseudoterrace_k, roman_k


def witnesses_as_text(result):
    return [w.arrangement.to_text() for w in result.witnesses]


def test_given_automorphism_finds_printed_example(z7):
    spec = SearchSpec(group=z7, ell=3, automorphism=multiplication_automorphism(z7, 2),
                      max_witnesses=None)
    result = search_pseudoterraces(spec)
    assert result.status == STATUS_COMPLETE
    assert "0,1,5,4,2,3,6" in witnesses_as_text(result)
    assert all(w.k == 6 for w in result.witnesses)
    assert witnesses_as_text(result) == sorted(witnesses_as_text(result))


def test_table_row_z6_is_found(z6):
    spec = SearchSpec(group=z6, ell=2, automorphism=parse_automorphism(z6, "1->5"),
                      max_witnesses=None)
    assert "0,1,4,2,3,5" in witnesses_as_text(search_pseudoterraces(spec))


def test_any_mode_z5(z5):
    spec = SearchSpec(group=z5, ell=2, mode=MODE_ANY, max_witnesses=None)
    result = search_pseudoterraces(spec)
    found = witnesses_as_text(result)
    assert "0,1,3,2,4" in found
    assert "0,1,3,4,2" in found
    assert {w.automorphism.perm for w in result.witnesses} == {(0, 4, 3, 2, 1)}


def test_witness_limit(z7):
    spec = SearchSpec(group=z7, ell=3, automorphism=multiplication_automorphism(z7, 2))
    result = search_pseudoterraces(spec)
    assert result.status == STATUS_WITNESS_LIMIT
    assert len(result.witnesses) == 1
    assert result.witnesses[0].family().ell == 3


@pytest.mark.parametrize("name,ell", [("Z3xZ3", 2), ("Z9", 3), ("Z3xZ3", 3)])
def test_published_nonexistence(name, ell):
    spec = SearchSpec(group=make_group(name), ell=ell, mode=MODE_ANY)
    result = search_pseudoterraces(spec)
    assert result.witnesses == []
    assert result.proves_nonexistence


def test_no_automorphism_of_requested_order():
    result = search_pseudoterraces(SearchSpec(group=make_group("Z3"), ell=3, mode=MODE_ANY, k=1))
    assert result.complete
    assert result.partitions == 0
    assert result.warnings


def test_small_budget_is_not_a_proof():
    spec = SearchSpec(group=make_group("Z17"), ell=2, mode=MODE_ANY, node_budget=1000)
    result = search_pseudoterraces(spec)
    assert result.status == STATUS_BUDGET_EXHAUSTED
    assert result.exhausted
    assert not result.proves_nonexistence
    assert result.nodes <= 1000 + result.partitions

    with pytest.raises(SearchBudgetExhausted):
        list(iter_pseudoterraces(spec))


@pytest.mark.slow
def test_z17_pairs_with_default_budget():
    spec = SearchSpec(group=make_group("Z17"), ell=2, mode=MODE_ANY)
    result = search_pseudoterraces(spec, workers=2)
    assert result.witnesses == []
    assert result.proves_nonexistence or result.exhausted


def test_workers_do_not_change_results(z7):
    spec = SearchSpec(group=z7, ell=3, mode=MODE_ANY, max_witnesses=None)
    serial = search_pseudoterraces(spec, workers=1)
    parallel = search_pseudoterraces(spec, workers=2)
    assert witnesses_as_text(serial) == witnesses_as_text(parallel)
    assert serial.nodes == parallel.nodes


def test_iter_matches_batch(z7):
    spec = SearchSpec(group=z7, ell=3, automorphism=multiplication_automorphism(z7, 2),
                      max_witnesses=None)
    streamed = [w.arrangement.to_text() for w in iter_pseudoterraces(spec)]
    assert streamed == witnesses_as_text(search_pseudoterraces(spec))


def test_vatican_singleton_search():
    z10 = make_group("Z10")
    result = search_pseudoterraces(SearchSpec(group=z10, ell=1, mode=MODE_ANY))
    assert len(result.witnesses) == 1
    witness = result.witnesses[0]
    assert witness.automorphism.is_identity
    assert witness.k == 9


def test_tuple_search_with_fixed_member(z5):
    fixed = Arrangement.parse(z5, "0,1,3,4,2")
    spec = SearchSpec(group=z5, ell=2, k=4, mode=MODE_TUPLE, fixed_members=(fixed,),
                      max_witnesses=None)
    result = search_tuples(spec)
    partners = [family.members[1].to_text() for family in result.witnesses]
    assert "0,4,2,1,3" in partners
    assert all(family.members[0] == fixed for family in result.witnesses)
    assert all(roman_k(family) == 4 for family in result.witnesses)


def test_tuple_search_free_members_are_ordered(z5):
    spec = SearchSpec(group=z5, ell=2, k=4, mode=MODE_TUPLE, max_witnesses=None)
    families = search_tuples(spec).witnesses
    assert families
    for family in families:
        first, second = family.members
        assert first.elements <= second.elements
    assert [f.to_text() for f in iter_tuples(spec)] == [f.to_text() for f in families]


@pytest.mark.parametrize("kwargs", [
    dict(ell=0, mode=MODE_ANY),
    dict(ell=2, mode=MODE_ANY, k=7),
    dict(ell=2, mode=MODE_ANY, k=0),
    dict(ell=3, mode=MODE_GIVEN),
    dict(ell=2, mode="bogus"),
    dict(ell=2, mode=MODE_ANY, node_budget=0),
    dict(ell=2, mode=MODE_ANY, max_witnesses=0),
])
def test_spec_validation(z7, kwargs):
    with pytest.raises(SearchError):
        SearchSpec(group=z7, **kwargs)


def test_spec_validation_with_automorphisms_and_members(z7):
    times2 = multiplication_automorphism(z7, 2)
    member = Arrangement(z7, tuple(range(7)))
    with pytest.raises(SearchError):
        SearchSpec(group=z7, ell=2, automorphism=times2)
    with pytest.raises(SearchError):
        SearchSpec(group=z7, ell=3, mode=MODE_ANY, automorphism=times2)
    with pytest.raises(SearchError):
        SearchSpec(group=make_group("Z6"), ell=3, automorphism=times2)
    with pytest.raises(SearchError):
        SearchSpec(group=z7, ell=3, automorphism=times2, fixed_members=(member,))
    with pytest.raises(SearchError):
        SearchSpec(group=z7, ell=2, mode=MODE_TUPLE, fixed_members=(member, member))
    with pytest.raises(SearchError):
        SearchSpec(group=make_group("Z19"), ell=2, mode=MODE_ANY)
    with pytest.raises(SearchError):
        SearchSpec(group=make_group("Z13"), ell=2, mode=MODE_TUPLE)
    assert SearchSpec(group=z7, ell=3, automorphism=times2).vatican


def test_fold_multipliers():
    assert fold_multipliers(11, 5) == [3, 4, 5, 9]
    assert fold_multipliers(11, 2) == [10]
    assert fold_multipliers(13, 4) == [5, 8]


def test_sweep_single_primes():
    assert [row.quadruple() for row in sweep_prime(11)] == ["(2,1,6,10)", "(5,10,8,9)"]
    assert [row.quadruple() for row in sweep_prime(7)] == ["(2)", "(3)"]
    assert not sweep_prime(7)[0].found
    assert [row.ell for row in sweep_prime(13, ell_max=4)] == [2, 3, 4]


def test_sweep_range():
    rows = sweep_primes(5, 13)
    assert [(row.p, row.quadruple()) for row in rows] == [
        (5, "(2,4,3,4)"),
        (7, "(2)"),
        (7, "(3)"),
        (11, "(2,1,6,10)"),
        (11, "(5,10,8,9)"),
        (13, "(2,1,7,12)"),
        (13, "(3,1,6,9)"),
        (13, "(4,1,11,5)"),
        (13, "(6)"),
    ]
    assert [row.listing() for row in sweep_primes(5, 13, k_min=2)] == [
        "(5; 2, 4, 3, 4)",
        "(11; 5, 10, 8, 9)",
    ]
    assert sweep_primes(5, 13, k_min=2)[1].vatican


def test_sweep_in_parallel_matches_serial():
    assert sweep_primes(5, 61, workers=2) == sweep_primes(5, 61)


def test_sweep_rejects_bad_ranges():
    with pytest.raises(SearchError):
        sweep_primes(5, 20000)
    with pytest.raises(SearchError):
        sweep_primes(13, 11)


def test_verify_prime_witness():
    assert verify_prime_witness(11, 5, 10, 8, 9)
    assert verify_table_witness(11, 5, 10, 8, 9).achieved_k == 10

    wrong_r = verify_prime_witness(11, 5, 10, 8, 8)
    assert not wrong_r
    assert any("r=8" in f for f in wrong_r.failures)

    assert not verify_prime_witness(11, 5, 10, 3, 9)
    assert not verify_prime_witness(12, 5, 10, 8, 9)
    assert not verify_prime_witness(11, 2, 10, 8, 9)


def test_verify_group_witness():
    d6 = make_group("D6")
    assert verify_group_witness(d6, 2, 5, "u->u^2, v->v", "e,u^2v,u^2,u,v,uv")
    assert verify_table_witness(d6, 2, 5, "u->u^2, v->v", "e,u^2v,u^2,u,v,uv")
    assert not verify_group_witness(d6, 2, 5, "u->v", "e,u^2v,u^2,u,v,uv")
    bad = verify_group_witness(d6, 2, 5, "u->u^2, v->v", "e,u,u")
    assert bad.achieved_k is None
    assert bad.failures[0].startswith("arrangement")


def test_primitive_root_family():
    family = primitive_root_family(11, 8)
    assert family.ell == 5
    assert roman_k(family) == 10


def test_witness_designs_meet_requested_balance(z7):
    spec = SearchSpec(group=z7, ell=3, mode=MODE_ANY, max_witnesses=None)
    for witness in search_pseudoterraces(spec).witnesses:
        report = balance_report(design_from_tuple(witness.family()))
        assert report.vatican

    spec = SearchSpec(group=make_group("Z5"), ell=2, k=4, mode=MODE_TUPLE, max_witnesses=None)
    for family in search_tuples(spec).witnesses:
        assert balance_report(design_from_tuple(family)).max_k >= 4


def test_checked_design():
    design, report = checked_design(primitive_root_family(11, 8), 10)
    assert (design.n, design.p) == (55, 11)
    assert report.vatican

    weak = primitive_root_family(11, 6)
    assert checked_design(weak)[1].max_k == 1
    with pytest.raises(RuntimeError):
        checked_design(weak, 2)


def test_given_search_matches_exhaustive_filter(z5):
    inversion = inversion_automorphism(z5)
    spec = SearchSpec(group=z5, ell=2, automorphism=parse_automorphism(z5, "1->4"),
                      max_witnesses=None)
    expected = []
    for rest in permutations(range(1, 5)):
        arrangement = Arrangement(z5, (0,) + rest)
        if pseudoterrace_k(arrangement, inversion) >= 4:
            expected.append(arrangement.to_text())
    assert expected
    assert witnesses_as_text(search_pseudoterraces(spec)) == expected


def test_tuple_search_finds_published_triple(z5):
    [row] = [row for row in load_published_tables()['table_5']['rows'] if row['group'] == 'Z5']
    spec = SearchSpec(group=z5, ell=3, mode=MODE_TUPLE, max_witnesses=None)
    found = {tuple(m.to_text() for m in family.members) for family in search_tuples(spec).witnesses}
    assert tuple(row['triple']) in found
