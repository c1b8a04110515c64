import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ecpkit.field import (
    GF, FieldElement, FieldError, default_modulus, embed, embed_array,
    embedding_table, field_make, is_irreducible, parse_field, restrict_array,
)

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2),
                (3, 3), (2, 5), (7, 2), (2, 6), (3, 4), (5, 3), (2, 7), (3, 5), (2, 8)]


def slow_mul(F: GF, a: int, b: int) -> int:
    """Schoolbook polynomial product reduced by the modulus; independent of the tables."""
    pa, pb = F.coeffs(a), F.coeffs(b)
    prod = [0] * (2 * F.e - 1)
    for i, x in enumerate(pa):
        for j, y in enumerate(pb):
            prod[i + j] = (prod[i + j] + x * y) % F.p
    m = F.modulus
    for d in range(len(prod) - 1, F.e - 1, -1):
        c = prod[d]
        if c:
            for i in range(F.e + 1):
                prod[d - F.e + i] = (prod[d - F.e + i] - c * m[i]) % F.p
    return F.from_coeffs(prod[:F.e])


def brute_irreducible(f, p):
    """No monic factor of degree 1..deg/2, by exhaustive division."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            r = list(f)
            for shift in range(deg - d, -1, -1):
                c = r[shift + d]
                for i in range(d + 1):
                    r[shift + i] = (r[shift + i] - c * g[i]) % p
            if not any(r[:d]):
                return False
    return True


# -- construction ------------------------------------------------------------------

def test_prime_field():
    F = field_make(7, 1)
    assert (F.p, F.e, F.q) == (7, 1, 7)


def test_gf4_with_explicit_modulus():
    F = field_make(2, 2, (1, 1, 1))
    x = F([0, 1])
    assert x * x == F([1, 1])


def test_composite_characteristic_rejected():
    with pytest.raises(FieldError):
        field_make(4, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        field_make(2, 2, (1, 0, 1))  # (x+1)^2


def test_non_monic_modulus_rejected():
    with pytest.raises(FieldError):
        field_make(3, 2, (1, 0, 2))


def test_order_guard():
    with pytest.raises(FieldError):
        field_make(2, 21)


@pytest.mark.parametrize("p,e,expected", [
    (2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (2, 4, (1, 1, 0, 0, 1)),
    (3, 2, (1, 0, 1)), (2, 6, (1, 1, 0, 0, 0, 0, 1)),
])
def test_default_modulus_values(p, e, expected):
    assert default_modulus(p, e) == expected


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_default_modulus_is_first_irreducible(p, e):
    mod = default_modulus(p, e)
    rank = sum(c * p**i for i, c in enumerate(mod[:-1]))
    for v in range(rank):
        cand = [(v // p**i) % p for i in range(e)] + [1]
        assert not brute_irreducible(cand, p)
    assert brute_irreducible(list(mod), p)


@pytest.mark.parametrize("p,deg", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)])
def test_irreducibility_against_exhaustive_factoring(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        f = list(tail) + [1]
        assert is_irreducible(f, p) == brute_irreducible(f, p), f


def test_irreducible_counts_gf2():
    # number of monic irreducibles of degree 1..8 over GF(2)
    counts = [sum(is_irreducible([(v >> i) & 1 for i in range(d)] + [1], 2) for v in range(2**d))
              for d in range(1, 9)]
    assert counts == [2, 1, 2, 3, 6, 9, 18, 30]


def test_field_string_round_trip():
    for p, e in SMALL_FIELDS:
        F = field_make(p, e)
        assert parse_field(F.to_string()) == F
        assert parse_field(str(F.q)) == F
    assert parse_field("2:4:1,0,0,1,1") == field_make(2, 4, (1, 0, 0, 1, 1))
    assert parse_field("2:4:1,0,0,1,1") != field_make(2, 4)
    assert parse_field("16:1") == parse_field("4:2") == field_make(2, 4)
    assert parse_field("4:3") == field_make(2, 6)


@pytest.mark.parametrize("text", ["", "x", "6", "2:0", "6:1", "4:1:1,1", "2:4:1,1", "2:2:1,0,1", "1"])
def test_parse_field_rejects(text):
    with pytest.raises(FieldError):
        parse_field(text)


# -- arithmetic --------------------------------------------------------------------

def test_gf7_examples():
    F = field_make(7)
    assert F(3) + F(5) == F(1)
    assert F(3).inverse() == F(5)
    assert int(F.inv(3)) == 5


def test_inverse_of_zero():
    for p, e in [(7, 1), (2, 4)]:
        with pytest.raises(ZeroDivisionError):
            field_make(p, e).inv(0)


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 3), (2, 5)])
def test_table_mul_matches_schoolbook(p, e):
    F = field_make(p, e)
    a, b = np.meshgrid(np.arange(F.q), np.arange(F.q), indexing="ij")
    fast = F.mul(a, b)
    for x in range(F.q):
        for y in range(F.q):
            assert fast[x, y] == slow_mul(F, x, y)


def test_mul_matches_schoolbook_with_custom_modulus():
    F = field_make(2, 4, (1, 0, 0, 1, 1))
    for x in range(16):
        for y in range(16):
            assert F.mul(x, y) == slow_mul(F, x, y)


@pytest.mark.parametrize("p,e", [pe for pe in SMALL_FIELDS if pe[0] ** pe[1] <= 256])
def test_fermat_exhaustive(p, e):
    F = field_make(p, e)
    nz = np.arange(1, F.q)
    assert np.all(F.power(nz, F.q - 1) == 1)
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert F.power(0, 5) == 0


def test_large_prime_field():
    F = field_make(2**31 - 1)
    a = np.array([2**31 - 2, 123456789, 1])
    assert np.all(F.mul(a, F.inv(a)) == 1)
    assert F.add(2**31 - 2, 5) == 4


def test_negative_powers():
    F = field_make(2, 4)
    for a in range(1, 16):
        assert F.mul(F.power(a, -3), F.power(a, 3)) == 1


field_strategy = st.sampled_from(SMALL_FIELDS + [(65537, 1), (2, 12), (3, 7)])


@given(field_strategy, st.data())
def test_field_axioms(pe, data):
    F = field_make(*pe)
    elem = st.integers(0, F.q - 1)
    x, y, z = (data.draw(elem) for _ in range(3))
    assert F.add(x, y) == F.add(y, x)
    assert F.mul(x, y) == F.mul(y, x)
    assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(x, F.neg(x)) == 0
    assert F.sub(F.add(x, y), y) == x
    if x:
        assert F.mul(x, F.inv(x)) == 1
        assert F.div(F.mul(x, y), x) == y


@given(field_strategy, st.data())
def test_vector_sum_matches_fold(pe, data):
    F = field_make(*pe)
    xs = data.draw(st.lists(st.integers(0, F.q - 1), min_size=0, max_size=20))
    acc = 0
    for v in xs:
        acc = int(F.add(acc, v))
    assert int(F.sum(np.array(xs, dtype=np.int64))) == acc


def test_element_wrapper():
    F = field_make(2, 4)
    x = F([0, 1])
    assert x ** 4 == x + F(1)  # x^4 = x + 1
    assert (x / x) == F(1)
    assert -x == x
    assert x.coeffs == (0, 1, 0, 0)
    assert not x.is_zero()
    assert F(0).is_zero()
    assert {F(3), F(3)} == {F(3)}


def test_elements_of_different_fields_never_combine():
    a, b = field_make(7)(1), field_make(5)(1)
    with pytest.raises(FieldError):
        a + b
    with pytest.raises(TypeError):
        a + 1
    with pytest.raises(FieldError):
        field_make(2, 4)(16)
    with pytest.raises(FieldError):
        field_make(7)(field_make(5)(2))


# -- embeddings --------------------------------------------------------------------

def test_embed_examples():
    F2, F4, F16 = field_make(2), field_make(2, 2), field_make(2, 4)
    assert embed(F2(1), F4) == F4(1)
    assert embed(F2(0), F16) == F16(0)
    img = embed(F4([0, 1]), F16)
    assert img * img + img + F16(1) == F16(0)
    # the smallest root of x^2+x+1 in GF(16) is chosen
    roots = [v for v in range(16) if F16.add(F16.add(F16.mul(v, v), v), 1) == 0]
    assert img.value == min(roots)


@pytest.mark.parametrize("src,dst", [((2, 1), (2, 2)), ((2, 1), (2, 4)), ((2, 2), (2, 4)),
                                     ((3, 1), (3, 2)), ((2, 2), (2, 6)), ((2, 3), (2, 6))])
def test_embedding_is_injective_homomorphism(src, dst):
    S, T = field_make(*src), field_make(*dst)
    tab = embedding_table(S, T)
    assert len(set(tab.tolist())) == S.q
    a, b = np.meshgrid(np.arange(S.q), np.arange(S.q), indexing="ij")
    assert np.array_equal(tab[S.mul(a, b)], T.mul(tab[a], tab[b]))
    assert np.array_equal(tab[S.add(a, b)], T.add(tab[a], tab[b]))
    assert tab[1] == 1 and tab[0] == 0


def test_restrict_inverts_embed():
    S, T = field_make(2, 2), field_make(2, 4)
    x = np.arange(4)
    assert np.array_equal(restrict_array(T, S, embed_array(S, T, x)), x)
    outside = [v for v in range(16) if v not in set(embedding_table(S, T).tolist())]
    assert restrict_array(T, S, outside[:1]) is None


def test_embed_rejects_non_subfield():
    with pytest.raises(FieldError):
        embedding_table(field_make(2, 2), field_make(2, 3))
    with pytest.raises(FieldError):
        embedding_table(field_make(3), field_make(2, 2))


def test_field_equality_and_identity():
    assert field_make(2, 4) == GF(2, 4)
    assert field_make(2, 4) is field_make(2, 4)
    assert field_make(2, 4) != field_make(2, 2)
    assert isinstance(field_make(5)(2), FieldElement)
