from itertools import permutations

import pytest

from fi_involutions.errors import CycleError, ParseError, UnknownLabel
from fi_involutions.poset import (
    PosetMap,
    all_posets,
    antichain,
    build_poset,
    chain,
    components,
    crown,
    diamond,
    disjoint_union,
    enumerate_automorphisms,
    enumerate_involutions,
    is_connected,
    lambda_decomposition,
    poset_involutions_equivalent,
    vee,
)


def brute_maps(P, reversing):
    n = P.n
    out = set()
    for perm in permutations(range(n)):
        if reversing and any(perm[perm[a]] != a for a in range(n)):
            continue
        ok = all(
            P.le[a][b] == (P.le[perm[b]][perm[a]] if reversing else P.le[perm[a]][perm[b]])
            for a in range(n) for b in range(n)
        )
        if ok:
            out.add(perm)
    return out


def test_transitive_closure_of_covers():
    P = chain(4)
    assert P.leq("1", "4")
    assert not P.leq("4", "1")
    assert P.interval("1", "3") == ["1", "2", "3"]
    assert P.cover_labels() == [("1", "2"), ("2", "3"), ("3", "4")]


def test_redundant_cover_is_dropped_from_hasse_diagram():
    P = build_poset("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert sorted(P.cover_labels()) == [("a", "b"), ("b", "c")]


def test_cycle_rejected():
    with pytest.raises(CycleError):
        build_poset("ab", [("a", "b"), ("b", "a")])


def test_unknown_label_rejected():
    with pytest.raises(UnknownLabel):
        build_poset("ab", [("a", "z")])


def test_duplicate_and_reflexive_covers_rejected():
    with pytest.raises(ParseError):
        build_poset(["a", "a"], [])
    with pytest.raises(ParseError):
        build_poset(["a"], [("a", "a")])


def test_connectivity():
    assert is_connected(diamond())
    assert not is_connected(antichain(2))
    U = disjoint_union(chain(2), build_poset(["x"], []))
    assert len(components(U)) == 2


@pytest.mark.parametrize("P", [chain(1), chain(3), antichain(3), vee(), diamond(), crown()],
                         ids=["c1", "c3", "anti3", "vee", "diamond", "crown"])
def test_automorphisms_and_involutions_match_permutation_search(P):
    assert {a.images for a in enumerate_automorphisms(P)} == brute_maps(P, False)
    assert {a.images for a in enumerate_involutions(P)} == brute_maps(P, True)


def test_known_involution_counts():
    assert len(enumerate_involutions(chain(5))) == 1
    assert len(enumerate_involutions(diamond())) == 2
    assert len(enumerate_involutions(vee())) == 0
    assert len(enumerate_automorphisms(crown())) == 4


def test_poset_map_validation():
    P = chain(2)
    with pytest.raises(ValueError):
        PosetMap(P, (1, 0), "automorphism")
    lam = PosetMap(P, (1, 0), "involution")
    assert lam("1") == "2"
    assert lam.fixed_points() == []
    with pytest.raises(UnknownLabel):
        PosetMap.from_labels(P, {"1": "2"}, "involution")


def test_diamond_decomposition():
    D = diamond()
    lam = PosetMap.from_labels(D, {"0": "1", "a": "a", "b": "b", "1": "0"}, "involution")
    assert lambda_decomposition(D, lam).labels() == (["0"], ["1"], ["a", "b"])
    swap = PosetMap.from_labels(D, {"0": "1", "a": "b", "b": "a", "1": "0"}, "involution")
    x1, x2, x3 = lambda_decomposition(D, swap).labels()
    assert x3 == []
    assert set(x1) | set(x2) == {"0", "a", "b", "1"}


def test_crown_decomposition_puts_minima_below():
    C = crown()
    for lam in enumerate_involutions(C):
        x1, x2, x3 = lambda_decomposition(C, lam).labels()
        assert set(x1) == {"x", "y"} and set(x2) == {"a", "b"} and x3 == []


def test_decomposition_exists_for_every_involution_of_small_posets():
    for n in range(1, 6):
        for P in all_posets(n):
            for lam in enumerate_involutions(P):
                dec = lambda_decomposition(P, lam)
                assert set(dec.x3) == set(lam.fixed_points())


def test_identity_is_an_involution_only_without_strict_pairs():
    with pytest.raises(ValueError):
        PosetMap(chain(2), (0, 1), "involution")
    A = antichain(2)
    ident = PosetMap(A, (0, 1), "involution")
    assert lambda_decomposition(A, ident).labels() == ([], [], ["1", "2"])


def test_poset_involution_equivalence_on_diamond():
    D = diamond()
    fix = PosetMap.from_labels(D, {"0": "1", "a": "a", "b": "b", "1": "0"}, "involution")
    swap = PosetMap.from_labels(D, {"0": "1", "a": "b", "b": "a", "1": "0"}, "involution")
    assert poset_involutions_equivalent(fix, fix) is not None
    assert poset_involutions_equivalent(fix, swap) is None


def test_crown_involutions_are_conjugate():
    C = crown()
    lams = enumerate_involutions(C)
    assert len(lams) == 2
    alpha = poset_involutions_equivalent(lams[0], lams[1])
    a = alpha.images
    assert all(a[lams[1].images[x]] == lams[0].images[a[x]] for x in range(4))


@pytest.mark.parametrize("n,total,connected", [(1, 1, 1), (2, 2, 1), (3, 5, 3), (4, 16, 10), (5, 63, 44)])
def test_poset_counts(n, total, connected):
    assert len(all_posets(n)) == total
    assert len(all_posets(n, connected_only=True)) == connected
