import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fi_involutions.errors import NotANorm, NotInK0, NotUnitary, ParseError, ZeroElement
from fi_involutions.field import (
    QI,
    field_from_descriptor,
    format_element,
    gf_p2,
    is_in_K0,
    is_in_K1,
    norm,
    norm_preimage,
    parse_element,
    star,
    unitary_to_ratio,
)

GF9 = gf_p2(3)

small = st.integers(min_value=-30, max_value=30)
dens = st.integers(min_value=1, max_value=12)


def qi_elements(nonzero=False):
    s = st.builds(lambda a, b, c, d: QI(Fraction(a, b), Fraction(c, d)), small, dens, small, dens)
    return s.filter(bool) if nonzero else s


gf_elements = st.builds(lambda a, b: GF9(a, b), st.integers(0, 2), st.integers(0, 2))


def test_star_and_norm_examples():
    assert star(QI.parse("3+2i")) == QI.parse("3-2i")
    assert norm(QI.parse("2+i")) == QI(5)
    assert norm(GF9(0, 1)) == GF9(1)
    assert star(GF9(1, 1)) == GF9(1, 2)


@given(qi_elements(), qi_elements(), qi_elements())
def test_qi_field_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert star(x * y) == star(x) * star(y)
    assert star(star(x)) == x
    if x:
        assert x * x.inverse() == QI.one


@given(gf_elements, gf_elements, gf_elements)
def test_gf_field_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert star(x * y) == star(x) * star(y)
    assert star(x + y) == star(x) + star(y)
    assert star(star(x)) == x
    if x:
        assert x * x.inverse() == GF9.one


def test_gf_star_is_frobenius():
    for x in GF9.elements():
        assert star(x) == x ** 3


@pytest.mark.parametrize("text", ["3/5+2/7i", "-1", "-1i", "2-3i", "0", "1/2", "7i", "-4/9-1/3i"])
def test_qi_format_round_trip(text):
    assert format_element(parse_element(text, QI)) == text


@pytest.mark.parametrize("text,canon", [("i", "1i"), ("-i", "-1i"), ("1+i", "1+1i"), (" 2 - 3i ", "2-3i")])
def test_qi_parse_shorthand(text, canon):
    assert QI.format(QI.parse(text)) == canon


def test_gf_format_round_trip():
    for x in GF9.elements():
        assert GF9.parse(GF9.format(x)) == x


@pytest.mark.parametrize("bad", ["", "1//2", "abc", "1+2j", "3/0"])
def test_qi_parse_errors(bad):
    with pytest.raises((ParseError, ZeroDivisionError)):
        QI.parse(bad)


def test_membership_in_fixed_field():
    assert is_in_K0(QI(3))
    assert not is_in_K0(QI.parse("1+i"))
    assert is_in_K0(GF9(2))
    assert not is_in_K0(GF9(0, 1))


@pytest.mark.parametrize(
    "value,expected",
    [("5", True), ("3", False), ("2", True), ("9", True), ("1/3", False), ("4/25", True),
     ("-1", False), ("21", False), ("45", True), ("1", True)],
)
def test_norm_group_membership_qi(value, expected):
    assert is_in_K1(QI.parse(value)) is expected


def test_norm_membership_matches_search():
    # a positive integer is a norm of a Gaussian rational iff it is a sum of two squares
    sums = {a * a + b * b for a in range(12) for b in range(12)}
    for n in range(1, 100):
        assert is_in_K1(QI(n)) == (n in sums)


def test_norm_membership_rejects_non_k0():
    with pytest.raises(NotInK0):
        is_in_K1(QI.parse("1+i"))
    with pytest.raises(ZeroElement):
        is_in_K1(QI(0))


def test_every_gf_unit_is_a_norm():
    assert all(is_in_K1(GF9(a)) for a in (1, 2))


def test_norm_preimage_examples():
    assert norm_preimage(QI(5)) == QI.parse("2+i")
    assert norm_preimage(QI(1)) == QI(1)
    with pytest.raises(NotANorm):
        norm_preimage(QI(3))


@given(qi_elements(nonzero=True))
def test_norm_preimage_inverts_norm(z):
    c = norm(z)
    w = norm_preimage(c)
    assert norm(w) == c


def test_norm_preimage_gf():
    for a in (1, 2):
        w = norm_preimage(GF9(a))
        assert norm(w) == GF9(a)


def test_unitary_to_ratio_boundary_cases():
    assert unitary_to_ratio(QI(1)) == QI(1)
    assert unitary_to_ratio(QI(-1)) == QI.i
    a = unitary_to_ratio(QI.parse("3/5+4/5i"))
    assert a == QI.parse("8/5-4/5i")
    assert star(a) * a.inverse() == QI.parse("3/5+4/5i")


def test_unitary_to_ratio_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        unitary_to_ratio(QI(2))


@given(qi_elements(nonzero=True))
def test_unitary_to_ratio_qi(x):
    k = star(x) * x.inverse()
    a = unitary_to_ratio(k)
    assert star(a) * a.inverse() == k


def test_unitary_to_ratio_gf_exhaustive():
    for x in GF9.nonzero_elements():
        k = star(x) * x.inverse()
        a = unitary_to_ratio(k)
        assert star(a) * a.inverse() == k


def test_field_descriptors():
    assert field_from_descriptor({"type": "gaussian_rational"}) is QI
    assert field_from_descriptor({"type": "gf_p2", "p": 3}) is GF9
    assert field_from_descriptor("gf:3") is GF9
    assert field_from_descriptor("qi") is QI
    assert GF9.descriptor() == {"type": "gf_p2", "p": 3}
    with pytest.raises((ValueError, ParseError)):
        field_from_descriptor("gf:4")


def test_roots_of_unity_counts():
    assert QI.roots_of_unity_count(2) == 2
    assert QI.roots_of_unity_count(4) == 4
    assert QI.roots_of_unity_count(3) == 1
    assert GF9.roots_of_unity_count(4) == 4
    assert GF9.roots_of_unity_count(3) == 1
    # brute count inside GF(9)
    for d in range(1, 10):
        assert GF9.roots_of_unity_count(d) == sum(1 for x in GF9.nonzero_elements() if x ** d == GF9.one)


def test_random_elements_are_reproducible():
    a = [QI.random_element(random.Random(7)) for _ in range(3)]
    b = [QI.random_element(random.Random(7)) for _ in range(3)]
    assert a == b


@given(st.lists(st.tuples(qi_elements(), qi_elements()), max_size=6))
def test_sum_of_products_qi(pairs):
    want = QI.zero
    for x, y in pairs:
        want = want + x * y
    assert QI.sum_of_products(pairs) == want


@given(st.lists(st.tuples(gf_elements, gf_elements), max_size=6))
def test_sum_of_products_gf(pairs):
    want = GF9.zero
    for x, y in pairs:
        want = want + x * y
    assert GF9.sum_of_products(pairs) == want
