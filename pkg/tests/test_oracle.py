import random

import numpy as np
import pytest

from fi_involutions.algebra import IncidenceAlgebra, InnerAutomorphism, convolve
from fi_involutions.errors import BudgetExceeded, H1Obstruction
from fi_involutions.field import QI, gf_p2
from fi_involutions.involution import InvolutionMap, rho_lambda_star
from fi_involutions.oracle import (
    BruteOracle,
    EnumerationBudget,
    SemilinearForm,
    agreement_check,
    count_twisting_units,
    count_units,
    enumerate_second_kind_involutions,
    enumerate_units,
    raw_singleton_involutions,
    twisting_units,
    verify_theorems,
)
from fi_involutions.poset import (
    antichain,
    build_poset,
    chain,
    crown,
    diamond,
    enumerate_involutions,
)

GF9 = gf_p2(3)
N_POSET = build_poset(["1", "2", "3", "4"], [("1", "3"), ("2", "3"), ("2", "4")])


def test_unit_counts():
    assert count_units(chain(1), GF9) == 8
    assert count_units(chain(2), GF9) == 576
    assert sum(1 for _ in enumerate_units(chain(2), GF9)) == 576


def test_unit_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_units(chain(4), GF9, EnumerationBudget(max_units=1000)))


def test_oracle_needs_a_finite_field():
    with pytest.raises(TypeError):
        list(enumerate_units(chain(1), QI))
    with pytest.raises(TypeError):
        enumerate_second_kind_involutions(chain(2), QI)


def test_raw_singleton_search_finds_only_frobenius():
    found = raw_singleton_involutions(GF9)
    assert found == [(GF9.one, GF9(0, 2))]


def test_twisting_units_are_twisting():
    P = chain(3)
    lam = enumerate_involutions(P)[0]
    base = rho_lambda_star(P, GF9, lam)
    units = list(twisting_units(P, GF9, lam))
    assert len(units) == count_twisting_units(P, GF9, lam)
    for k, u in units:
        assert convolve(base(u), u.inverse()) == u.alg.scalar(k)
        assert u.at(0, 0) == GF9.one


@pytest.mark.parametrize("P,count", [(chain(1), 1), (chain(2), 12), (chain(3), 216), (N_POSET, 864)],
                         ids=["c1", "c2", "c3", "N"])
def test_involution_counts(P, count):
    invs = enumerate_second_kind_involutions(P, GF9, check=P.n <= 2)
    assert len(invs) == count
    assert len({r.key() for r in invs}) == count


def test_sweep_agrees_with_unit_search_on_two_chain():
    # conjugating the canonical map by every unit must stay inside the sweep
    P = chain(2)
    invs = {r.key() for r in enumerate_second_kind_involutions(P, GF9)}
    base = rho_lambda_star(P, GF9, enumerate_involutions(P)[0])
    hits = set()
    for u in enumerate_units(P, GF9):
        psi = InnerAutomorphism(u)
        inv = psi.inverse()
        images = {p: psi(base(inv(base.alg.basis_element(p)))) for p in P.pairs}
        rho = InvolutionMap(base.alg, images, psi(base(inv(base.alg.scalar(GF9.i)))))
        hits.add(rho.key())
    assert hits <= invs


def test_sweep_refuses_nontrivial_h1():
    with pytest.raises(H1Obstruction):
        enumerate_second_kind_involutions(crown(), GF9)


def test_budget_on_instance_size():
    with pytest.raises(BudgetExceeded):
        enumerate_second_kind_involutions(chain(5), GF9)
    with pytest.raises(BudgetExceeded):
        enumerate_second_kind_involutions(chain(3), GF9, EnumerationBudget(max_involutions=10))


def as_vector(form, f):
    A, B = np.zeros((form.m, 1)), np.zeros((form.m, 1))
    for q, v in f.c.items():
        A[form.col[q], 0], B[form.col[q], 0] = v.a, v.b
    return A, B


def test_matrix_form_matches_direct_application():
    rng = random.Random(2)
    A = IncidenceAlgebra(diamond(), GF9)
    form = SemilinearForm(A)
    rho = enumerate_second_kind_involutions(diamond(), GF9)[123]
    R = form.involution(rho)
    u = A.random_unit(rng)
    U = form.inner(u)
    for _ in range(5):
        f = A.random_element(rng)
        got = form.mul(R, form.conj(as_vector(form, f)))
        assert form.equal(got, as_vector(form, rho(f)))
        assert form.equal(form.mul(U, as_vector(form, f)), as_vector(form, InnerAutomorphism(u)(f)))


@pytest.mark.parametrize("P,full", [(chain(2), 1), (chain(3), 1)], ids=["c2", "c3"])
def test_brute_classes_on_chains(P, full):
    oracle = BruteOracle(P, GF9)
    assert len(oracle.classes("full")) == full
    assert set(oracle.inner_classes_per_lambda().values()) == {1}
    assert agreement_check(oracle, random.Random(0), sample=None, random_pairs=20) > 0


def test_theorem_runner_passes_on_small_instances():
    for P in (chain(2), chain(3), N_POSET):
        report = verify_theorems(P, GF9)
        assert report.ok, report.lines()
        names = {r.check for r in report.records}
        assert {"classifier_agreement", "inner_class_count", "h1_cross_validation"} <= names


def test_theorem_runner_skips_when_theory_does_not_apply():
    rep = verify_theorems(crown(), GF9)
    assert rep.ok
    assert rep.records[-1].check == "second_kind_theory" and rep.records[-1].status == "skipped"
    rep = verify_theorems(antichain(2), GF9)
    assert rep.records[-1].detail == "poset is disconnected"
