import random

import pytest

from fi_involutions.algebra import Cocycle, IncidenceAlgebra, InnerAutomorphism, MultiplicativeAutomorphism
from fi_involutions.cohomology import (
    coboundary_unit,
    h1_group,
    h1_trivial,
    is_coboundary,
    nontrivial_cocycle,
)
from fi_involutions.errors import Disconnected
from fi_involutions.field import QI, gf_p2
from fi_involutions.oracle import exhaustive_h1
from fi_involutions.poset import all_posets, antichain, chain, crown, diamond

GF9 = gf_p2(3)


def random_coboundary(A, rng):
    P, F = A.poset, A.field
    c = [F.random_element(rng, nonzero=True) for _ in range(P.n)]
    return Cocycle(A, {(a, b): c[a] * c[b].inverse() for a, b in P.strict_pairs}), c


@pytest.mark.parametrize("P", [chain(3), diamond(), crown()], ids=["chain3", "diamond", "crown"])
def test_coboundaries_are_recognised(P, field):
    rng = random.Random(11)
    A = IncidenceAlgebra(P, field)
    for _ in range(10):
        sigma, _ = random_coboundary(A, rng)
        res = is_coboundary(sigma, root=P.elements[0])
        assert res
        w = res.witness
        assert w[P.elements[0]] == field.one
        for a, b in P.strict_pairs:
            x, y = P.elements[a], P.elements[b]
            assert sigma.at(a, b) == w[x] * w[y].inverse()


def test_multiplicative_is_inner_for_coboundary():
    rng = random.Random(4)
    A = IncidenceAlgebra(diamond(), QI)
    sigma, _ = random_coboundary(A, rng)
    d = coboundary_unit(A, is_coboundary(sigma).witness)
    f = A.random_element(rng)
    assert MultiplicativeAutomorphism(sigma)(f) == InnerAutomorphism(d)(f)


def test_groups_of_standard_posets():
    assert h1_group(chain(4)).trivial
    assert h1_group(diamond()).trivial
    crown_group = h1_group(crown())
    assert not crown_group.trivial
    assert crown_group.free_rank == 1 and crown_group.torsion == []
    assert crown_group.summary() == "Z^1"


def test_disconnected_poset_is_rejected():
    with pytest.raises(Disconnected):
        h1_group(antichain(2))


def test_nontrivial_cocycle_on_crown(field):
    sigma = nontrivial_cocycle(crown(), field)
    assert sigma is not None
    res = is_coboundary(sigma)
    assert not res
    assert res.defect != field.one
    assert res.obstruction[0] == res.obstruction[-1]
    assert nontrivial_cocycle(diamond(), field) is None


@pytest.mark.parametrize("P,total,bad", [(chain(2), 8, 0), (chain(3), 64, 0), (diamond(), 512, 0), (crown(), 4096, 3584)],
                         ids=["chain2", "chain3", "diamond", "crown"])
def test_exhaustive_cocycle_counts(P, total, bad):
    res = exhaustive_h1(P, GF9)
    assert (res.cocycles, res.non_coboundaries) == (total, bad)


def test_group_computation_agrees_with_exhaustive_search():
    for n in range(1, 5):
        for P in all_posets(n, connected_only=True):
            assert h1_trivial(P, GF9).trivial == exhaustive_h1(P, GF9).trivial, P


def test_no_torsion_up_to_five_points():
    for n in range(1, 6):
        for P in all_posets(n, connected_only=True):
            assert h1_group(P).torsion == []
