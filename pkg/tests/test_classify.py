import random

import pytest

from fi_involutions.classify import (
    NOT_EQUIVALENT,
    check_witness,
    class_count,
    coset_vector,
    equivalent,
    inner_equivalent,
)
from fi_involutions.errors import H1Obstruction, KindMismatch, MismatchedCarrier
from fi_involutions.field import QI, gf_p2
from fi_involutions.involution import (
    InvolutionMap,
    build_rho_epsilon,
    random_symmetric_unit,
    rho_lambda_star,
    twist,
)
from fi_involutions.oracle import brute_equivalent, enumerate_second_kind_involutions
from fi_involutions.poset import PosetMap, chain, crown, diamond, enumerate_involutions

GF9 = gf_p2(3)
D = diamond()
FIX_AB = PosetMap.from_labels(D, {"0": "1", "a": "a", "b": "b", "1": "0"}, "involution")
SWAP_AB = PosetMap.from_labels(D, {"0": "1", "a": "b", "b": "a", "1": "0"}, "involution")


def eps(a, b, F=QI):
    return build_rho_epsilon(D, F, FIX_AB, {"a": a, "b": b})


def test_equivalent_epsilons_get_a_checked_witness():
    r1, r2 = eps("1", "3"), eps("5", "15")
    rep = equivalent(r1, r2)
    assert rep.equivalent and rep.checked
    assert check_witness(r1, r2, rep.alpha, rep.u)


def test_inner_equivalence_under_swapped_values():
    r1, r2 = eps("1", "3"), eps("3", "1")
    rep = inner_equivalent(r1, r2)
    assert rep.equivalent
    assert check_witness(r1, r2, None, rep.u)


def test_coset_mismatch_reports_first_bad_fixed_point():
    for decide in (equivalent, inner_equivalent):
        rep = decide(eps("1", "1"), eps("1", "3"))
        assert rep.verdict == NOT_EQUIVALENT
        assert rep.obstruction.as_dict(QI) == {"kind": "coset_mismatch", "at": "b", "ratio": "3"}


def test_different_poset_involution_classes():
    r1 = eps("1", "1")
    r2 = rho_lambda_star(D, QI, SWAP_AB)
    rep = equivalent(r1, r2)
    assert not rep.equivalent
    assert rep.obstruction.kind == "different_lambda_class"


def test_coset_vector_normalises_at_first_fixed_point():
    cv = coset_vector({0: QI(2), 1: QI(6)}, {0: QI(1), 1: QI(1)}, [0, 1])
    assert cv.base == 0
    assert cv.ratios == {0: QI(1), 1: QI(3)}
    assert cv.first_non_norm(QI) == (1, QI(3))


def test_every_epsilon_is_equivalent_over_gf9():
    values = ["1", "2"]
    forms = [eps(a, b, GF9) for a in values for b in values]
    for r in forms:
        assert inner_equivalent(forms[0], r).equivalent


def test_class_counts():
    assert class_count(D, GF9, FIX_AB).count == 1
    assert class_count(D, GF9, FIX_AB).tag == "formula"
    assert class_count(D, GF9, SWAP_AB).tag == "empty fixed set"
    inf = class_count(D, QI, FIX_AB)
    assert inf.count is None and inf.tag == "infinite with criterion"


def test_first_kind_input_is_rejected():
    base = rho_lambda_star(chain(2), QI, enumerate_involutions(chain(2))[0])
    first = InvolutionMap(base.alg, base.images, base.alg.scalar(QI.i))
    with pytest.raises(KindMismatch):
        equivalent(first, base)


def test_carriers_must_match():
    lam = enumerate_involutions(chain(2))[0]
    with pytest.raises(MismatchedCarrier):
        equivalent(rho_lambda_star(chain(2), QI, lam), rho_lambda_star(chain(2), GF9, lam))


def test_nontrivial_multiplicative_part_is_undecided(data_dir):
    from fi_involutions.formats import load_involution

    rho = load_involution(f"{data_dir}/crown_sign.json", field=QI)
    base = load_involution(f"{data_dir}/crown_star.json", field=QI)
    with pytest.raises(H1Obstruction) as err:
        equivalent(rho, base)
    assert err.value.cocycle is not None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chain_twists_all_equivalent_to_canonical(n, field):
    rng = random.Random(n)
    P = chain(n)
    lam = enumerate_involutions(P)[0]
    base = rho_lambda_star(P, field, lam)
    for _ in range(5):
        u = random_symmetric_unit(base, rng).scale(field.random_element(rng, nonzero=True))
        rho = twist(base, u).rho
        rep = equivalent(rho, base)
        assert rep.equivalent and check_witness(rho, base, rep.alpha, rep.u)


def test_literal_search_agrees_on_two_chain():
    invs = list(enumerate_second_kind_involutions(chain(2), GF9))
    assert len(invs) == 12
    for r1 in invs:
        for r2 in invs:
            assert brute_equivalent(r1, r2) == equivalent(r1, r2).equivalent


def test_crown_with_trivial_multiplicative_part():
    C = crown()
    lams = enumerate_involutions(C)
    r1 = rho_lambda_star(C, GF9, lams[0])
    r2 = rho_lambda_star(C, GF9, lams[1])
    rep = equivalent(r1, r2)
    assert rep.equivalent and rep.alpha is not None
    assert check_witness(r1, r2, rep.alpha, rep.u)



def test_coset_verdict_does_not_depend_on_base_point():
    rng = random.Random(9)
    pool = [QI.parse(v) for v in ("1", "2", "3", "5", "6", "7", "10", "1/3", "2/5")]
    order = [0, 1, 2]
    for _ in range(200):
        e1 = {x: rng.choice(pool) for x in order}
        e2 = {x: rng.choice(pool) for x in order}
        verdicts = set()
        for k in range(3):
            cv = coset_vector(e1, e2, order[k:] + order[:k])
            assert cv.ratios[cv.base] == QI.one
            verdicts.add(cv.first_non_norm(QI) is None)
        assert len(verdicts) == 1
