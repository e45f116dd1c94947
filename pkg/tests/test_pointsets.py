import io
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sparsedisp.errors import DomainError, ResourceError
from sparsedisp.numerics import Dyadic
from sparsedisp.pointsets import (
    PointSet,
    compositions,
    dumps_pointset,
    hammersley,
    k_of_epsilon,
    loads_pointset,
    m_set,
    radical_inverse,
    sparse_cardinality,
    sparse_grid,
    write_pointset_csv,
)


def level(c: Fraction) -> int:
    """j such that c belongs to M_j (c has denominator 2^(j+1))."""
    return c.denominator.bit_length() - 2


def brute_sparse_grid(k, d):
    """Every point of the 2^(k+1) grid whose coordinate levels sum to k."""
    den = 2 ** (k + 1)
    axis = [Fraction(i, den) for i in range(1, den)]
    return {p for p in itertools.product(axis, repeat=d) if sum(level(c) for c in p) == k}


def test_m_set_examples():
    assert m_set(0) == [Fraction(1, 2)]
    assert m_set(1) == [Fraction(1, 4), Fraction(3, 4)]
    odd = [Fraction(i, 16) for i in range(16) if i % 2 == 1]
    assert m_set(3) == odd
    assert all(isinstance(x, Dyadic) and x.exponent == 4 for x in m_set(3))


def test_m_set_size():
    for j in range(10):
        assert len(m_set(j)) == 2**j


def test_compositions_examples():
    assert list(compositions(0, 3)) == [(0, 0, 0)]
    assert list(compositions(3, 2)) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    triple = [
        (a, b, c) for a in range(3) for b in range(3) for c in range(3) if a + b + c == 2
    ]
    assert list(compositions(2, 3)) == triple
    assert len(triple) == 6


@pytest.mark.parametrize("k, d", [(k, d) for k in range(6) for d in range(1, 5)])
def test_compositions_count_and_order(k, d):
    comps = list(compositions(k, d))
    assert comps == sorted(set(comps))
    assert all(sum(c) == k and len(c) == d for c in comps)
    assert len(comps) == sparse_cardinality(k, d) // 2**k


def test_sparse_grid_examples():
    assert sparse_grid(0, 4).points == ((Fraction(1, 2),) * 4,)
    assert len(sparse_grid(3, 2)) == 32
    assert len(sparse_grid(2, 3)) == 24


@pytest.mark.parametrize("k, d", [(2, 3), (3, 2), (4, 2), (2, 4), (1, 5), (3, 3)])
def test_sparse_grid_matches_brute_force(k, d):
    assert set(sparse_grid(k, d).points) == brute_sparse_grid(k, d)


def test_sparse_cardinality_examples():
    assert sparse_cardinality(3, 2) == 32
    assert sparse_cardinality(0, 7) == 1
    assert sparse_cardinality(6, 2) == 448 == len(sparse_grid(6, 2))


@pytest.mark.parametrize("k, d", [(k, d) for k in range(6) for d in range(1, 5)])
def test_coordinates_are_canonical_dyadics(k, d):
    for p in sparse_grid(k, d):
        for c in p:
            assert isinstance(c, Dyadic)
            assert c.numerator % 2 == 1
            assert 1 <= c.exponent <= k + 1


@pytest.mark.parametrize("k, d", [(3, 2), (2, 3), (4, 3), (2, 4)])
def test_symmetries(k, d):
    pts = set(sparse_grid(k, d).points)
    for perm in itertools.permutations(range(d)):
        assert {tuple(p[i] for i in perm) for p in pts} == pts
    assert {tuple(1 - c for c in p) for p in pts} == pts


def test_sparse_grid_budget():
    with pytest.raises(ResourceError):
        sparse_grid(10, 10, budget=1000)


@pytest.mark.parametrize(
    "eps, k",
    [(Fraction(1, 16), 3), (Fraction(1, 2), 0), (Fraction(3, 10), 1), (Fraction(1, 4), 1),
     (Fraction(99, 100), 0), (Fraction(1, 100), 6), (Fraction(1, 17), 4)],
)
def test_k_of_epsilon_examples(eps, k):
    assert k_of_epsilon(eps) == k


@given(st.fractions(min_value=Fraction(1, 10**9), max_value=Fraction(1)).filter(lambda x: 0 < x < 1))
def test_k_of_epsilon_is_minimal(eps):
    k = k_of_epsilon(eps)
    assert Fraction(1, 2 ** (k + 1)) <= eps
    if k >= 1:
        assert Fraction(1, 2**k) > eps


@pytest.mark.parametrize("eps", [0, 1, Fraction(3, 2), -Fraction(1, 2)])
def test_k_of_epsilon_domain(eps):
    with pytest.raises(DomainError):
        k_of_epsilon(eps)


def test_radical_inverse_base2_is_bit_reversal():
    for i in range(64):
        bits = format(i, "b")
        want = Fraction(int(bits[::-1], 2), 2 ** len(bits)) if i else Fraction(0)
        assert radical_inverse(i, 2) == want


def test_hammersley_examples():
    assert hammersley(1, 1).points == ((Fraction(1, 2),),)
    h = hammersley(4, 2)
    firsts = sorted(p[0] for p in h)
    assert firsts == [Fraction(1, 8), Fraction(3, 8), Fraction(5, 8), Fraction(7, 8)]
    # before the zero shift: 0, 1/2, 1/4, 3/4; zero goes to 1/(2 * 2^3)
    by_first = {p[0]: p[1] for p in h}
    assert [by_first[f] for f in firsts] == [Fraction(1, 16), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)]
    h = hammersley(2, 3)
    rows = sorted(h.points)
    assert rows[0] == (Fraction(1, 4), Fraction(1, 8), Fraction(1, 18))
    assert rows[1] == (Fraction(3, 4), Fraction(1, 2), Fraction(1, 3))


@pytest.mark.parametrize("n, d", [(1, 3), (7, 2), (30, 4), (64, 5)])
def test_hammersley_distinct_interior(n, d):
    h = hammersley(n, d)
    assert len(h) == n
    assert all(0 < c < 1 for p in h for c in p)


def test_pointset_dedups_and_sorts():
    ps = PointSet(2, ((Fraction(3, 4), Fraction(1, 2)), (Fraction(1, 4), Fraction(1, 2)), (Fraction(3, 4), Fraction(1, 2))))
    assert ps.points == ((Fraction(1, 4), Fraction(1, 2)), (Fraction(3, 4), Fraction(1, 2)))


@pytest.mark.parametrize("bad", [((Fraction(0), Fraction(1, 2)),), ((Fraction(1, 2),),), ((Fraction(1), Fraction(1, 2)),)])
def test_pointset_validation(bad):
    with pytest.raises(DomainError):
        PointSet(2, bad)


def test_text_round_trip_dyadic_and_rational():
    for ps in (sparse_grid(3, 2), hammersley(9, 3), PointSet(2, ())):
        back = loads_pointset(dumps_pointset(ps))
        assert back.dim == ps.dim and back.points == ps.points
        assert [type(c) for p in back for c in p] == [type(c) for p in ps for c in p]


def test_text_header():
    text = dumps_pointset(sparse_grid(1, 2))
    assert text.splitlines()[0] == "# dim=2 label=P(1,2) n=4"
    assert "1/2^2 1/2^1" in text


def test_text_rejects_count_mismatch():
    with pytest.raises(DomainError):
        loads_pointset("# dim=1 label=x n=3\n1/2^1\n")


def test_csv_decimal_expansion():
    buf = io.StringIO()
    write_pointset_csv(hammersley(2, 3), buf)
    assert buf.getvalue().splitlines() == ["x1,x2,x3", "0.25,0.125,1/18", "0.75,0.5,1/3"]
