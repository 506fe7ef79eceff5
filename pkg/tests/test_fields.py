import numpy as np
import pytest

from arcgeo.fields import (
    FieldSpec,
    default_modulus,
    element_from_json,
    element_to_json,
    field_from_order,
    is_prime,
    null_space,
    operation_tables,
    rank,
    row_reduce,
    solve,
)

from conftest import all_specs_up_to


def test_primality():
    primes = [n for n in range(2, 60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)


def test_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec(6)
    with pytest.raises(ValueError):
        FieldSpec(5, 0)
    with pytest.raises(ValueError):
        FieldSpec(5, 5)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, modulus=(0, 0, 1))  # x^2 is reducible
    with pytest.raises(ValueError):
        field_from_order(12)
    assert field_from_order(8).p == 2 and field_from_order(8).h == 3
    assert field_from_order(49).p == 7


def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    assert default_modulus(2, 4) == (1, 1, 0, 0, 1)
    assert default_modulus(5, 2) == (2, 0, 1)
    assert default_modulus(7, 2) == (1, 0, 1)
    assert default_modulus(3, 2) == (1, 0, 1)


def test_prime_division():
    g7 = FieldSpec(7)
    three = g7.element(3)
    assert three / three == g7.one()
    assert three * g7.element(5) == g7.one()
    # multiply-back oracle for the inverse
    inv = three.inverse()
    assert inv == g7.element(5)
    assert (three * inv).coeffs[0] * 1 % 7 == 1
    with pytest.raises(ZeroDivisionError):
        three / g7.zero()


def test_gf4_multiplication_table():
    g4 = FieldSpec(2, 2)
    t = g4.from_index(2)
    assert (t * t).coeffs == (1, 1)  # t^2 = t + 1
    # exhaustive 4x4 tables satisfy the field axioms
    els = list(g4.elements())
    for a in els:
        for b in els:
            assert a + b == b + a and a * b == b * a
            if not b.is_zero():
                assert (a / b) * b == a


def test_pow():
    g7 = FieldSpec(7)
    three = g7.element(3)
    assert three ** 6 == g7.one()
    assert three ** 0 == g7.one()
    assert three ** -1 == g7.element(5)
    assert g7.zero() ** 0 == g7.one()
    assert g7.zero() ** 5 == g7.zero()
    with pytest.raises(ZeroDivisionError):
        g7.zero() ** -2


def test_norm_lands_in_ground_field():
    g25 = FieldSpec(5, 2)
    for x in g25.elements():
        if x.is_zero():
            continue
        norm = x ** 6  # x^(p+1)
        assert norm.coeffs[1] == 0


def test_mixed_spec_arithmetic_rejected():
    a = FieldSpec(5).element(2)
    b = FieldSpec(7).element(2)
    with pytest.raises(ValueError):
        _ = a + b
    c = FieldSpec(5, 2).element(2)
    with pytest.raises(ValueError):
        _ = a * c


@pytest.mark.parametrize("spec", all_specs_up_to(64), ids=lambda s: f"GF({s.order})")
def test_field_axioms_exhaustive(spec):
    """Associativity, commutativity, distributivity and inverses on full tables."""
    q = spec.order
    t = operation_tables(spec)
    add, mul = t["add"], t["mul"]
    i = np.arange(q)
    x, y, z = np.meshgrid(i, i, i, indexing="ij", sparse=True)
    assert (add[add[x, y], z] == add[x, add[y, z]]).all()
    assert (mul[mul[x, y], z] == mul[x, mul[y, z]]).all()
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (mul[x, add[y, z]] == add[mul[x, y], mul[x, z]]).all()
    # additive and multiplicative identities and inverses
    assert (add[0, i] == i).all() and (mul[1, i] == i).all()
    assert (add[i, t["neg"][i]] == 0).all()
    nz = i[1:]
    assert (mul[nz, t["inv"][nz]] == 1).all()


@pytest.mark.parametrize("spec", all_specs_up_to(64), ids=lambda s: f"GF({s.order})")
def test_multiplicative_group_cyclic(spec):
    g = spec.multiplicative_generator()
    seen = set()
    acc = spec.one()
    for _ in range(spec.order - 1):
        seen.add(acc)
        acc = acc * g
    assert len(seen) == spec.order - 1
    assert acc == spec.one()


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_frobenius_fixes_exactly_ground_field(p):
    ext = FieldSpec(p, 2)
    fixed = [x for x in ext.elements() if x ** p == x]
    assert len(fixed) == p
    assert all(x.coeffs[1] == 0 for x in fixed)
    # and it is an automorphism
    for i in range(0, ext.order, 7):
        for j in range(0, ext.order, 5):
            a, b = ext.from_index(i), ext.from_index(j)
            assert (a + b) ** p == a ** p + b ** p
            assert (a * b) ** p == (a ** p) * (b ** p)


def test_randomized_axioms_large_prime(rng):
    spec = FieldSpec(65521)  # largest prime below 2^16
    for _ in range(200):
        a = spec.from_index(rng.randrange(spec.order))
        b = spec.from_index(rng.randrange(spec.order))
        c = spec.from_index(rng.randrange(spec.order))
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        if not b.is_zero():
            assert (a / b) * b == a


def test_element_json_roundtrip():
    g7 = FieldSpec(7)
    assert element_to_json(g7.element(3)) == 3
    assert element_from_json(g7, 3) == g7.element(3)
    g9 = FieldSpec(3, 2)
    x = g9.element([2, 1])
    assert element_to_json(x) == [2, 1]
    assert element_from_json(g9, [2, 1]) == x


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------


def _mat(spec, rows):
    return [[spec.element(x) for x in row] for row in rows]


def test_rank_identity():
    g5 = FieldSpec(5)
    m = _mat(g5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert rank(m) == 3
    assert null_space(m) == []


def test_rank_one_matrix():
    g5 = FieldSpec(5)
    m = _mat(g5, [[1, 2, 3], [2, 4, 6]])
    assert rank(m) == 1
    basis = null_space(m)
    assert len(basis) == 2
    for vec in basis:
        for row in m:
            acc = g5.zero()
            for a, v in zip(row, vec):
                acc = acc + a * v
            assert acc.is_zero()


def test_random_nullspace_multiply_back(rng):
    g7 = FieldSpec(7)
    for _ in range(25):
        m = _mat(g7, [[rng.randrange(7) for _ in range(6)] for _ in range(4)])
        r = rank(m)
        basis = null_space(m)
        assert r + len(basis) == 6
        for vec in basis:
            for row in m:
                acc = g7.zero()
                for a, v in zip(row, vec):
                    acc = acc + a * v
                assert acc.is_zero()


def test_solve_consistent_and_inconsistent():
    g5 = FieldSpec(5)
    m = _mat(g5, [[1, 2], [2, 4]])
    assert solve(m, [g5.element(1), g5.element(2)]) is not None
    assert solve(m, [g5.element(1), g5.element(3)]) is None
    particular, basis = solve(m, [g5.element(1), g5.element(2)])
    assert len(basis) == 1
    acc = m[0][0] * particular[0] + m[0][1] * particular[1]
    assert acc == g5.element(1)


def test_matrix_validation():
    g5 = FieldSpec(5)
    with pytest.raises(ValueError):
        row_reduce([[g5.element(1)], [g5.element(1), g5.element(2)]])
    with pytest.raises(ValueError):
        row_reduce([[g5.element(1), FieldSpec(7).element(1)]])
    with pytest.raises(ValueError):
        row_reduce([])
