import itertools

import pytest
from hypothesis import given, settings, strategies as st

from modalqt.errors import DimensionError, FieldMismatchError, PreconditionError
from modalqt.gf import FieldSpec
from modalqt.linalg import (
    Matrix,
    Subspace,
    Vector,
    determinant,
    inverse,
    invertible_completion,
    is_invertible,
    kernel,
    kron,
    matmul,
    matvec,
    rank,
    rref,
    solve,
)

F2, F3, F5 = FieldSpec(2), FieldSpec(3), FieldSpec(5)


def M(f, rows):
    return Matrix.from_rows(f, rows)


def V(f, entries):
    return Vector(f, tuple(entries))


def all_vectors(f, n):
    return [V(f, t) for t in itertools.product(range(f.p), repeat=n)]


def brute_rank(m):
    """log_p of the number of distinct row combinations."""
    f = m.field
    span = {
        tuple(sum(c * r[j] for c, r in zip(cs, m.rows)) % f.p for j in range(m.ncols))
        for cs in itertools.product(range(f.p), repeat=m.nrows)
    }
    size, r = len(span), 0
    while f.p**r < size:
        r += 1
    return r


@st.composite
def matrices(draw, p=None, max_dim=4):
    p = p or draw(st.sampled_from([2, 3, 5]))
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=m, max_size=m))
    return M(FieldSpec(p), rows)


def test_rref_examples():
    i2 = Matrix.identity(F3, 2)
    assert rref(i2) == (i2, 2)
    assert rref(M(F3, [[1, 1], [2, 2]])) == (M(F3, [[1, 1], [0, 0]]), 1)
    z = Matrix.zeros(F3, 2, 2)
    assert rref(z) == (z, 0)


@settings(max_examples=150)
@given(matrices(max_dim=3))
def test_rank_matches_brute_force(m):
    assert rank(m) == brute_rank(m)


@given(matrices())
def test_rref_idempotent(m):
    r, k = rref(m)
    assert rref(r) == (r, k)


@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.ncols


def test_kernel_examples():
    assert kernel(M(F3, [[1, 1], [2, 2]])) == Subspace.span(F3, 2, [(1, 2)])
    assert kernel(M(F3, [[1, 2], [0, 1]])).dim == 0
    assert kernel(Matrix.zeros(F3, 1, 2)) == Subspace.full(F3, 2)


@settings(max_examples=60)
@given(matrices(max_dim=3))
def test_kernel_matches_enumeration(m):
    members = {v.entries for v in all_vectors(m.field, m.ncols) if matvec(m, v).is_zero()}
    k = kernel(m)
    assert len(members) == m.field.p**k.dim
    assert all(k.contains(V(m.field, x)) for x in members)


def test_solve_examples():
    s = solve(Matrix.identity(F3, 2), V(F3, (1, 2)))
    assert s.particular == V(F3, (1, 2)) and s.kernel.dim == 0

    a = M(F3, [[1, 1], [2, 2]])
    s = solve(a, V(F3, (1, 2)))
    assert s.particular == V(F3, (1, 0))
    assert s.kernel == Subspace.span(F3, 2, [(1, 2)])

    s = solve(a, V(F3, (1, 0)))
    assert not s.feasible
    assert s.certificate[:2] == (0, 0) and s.certificate[2] != 0


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve(Matrix.identity(F3, 2), V(F3, (1, 2, 0)))


@settings(max_examples=60)
@given(matrices(max_dim=3), st.data())
def test_solve_agrees_with_enumeration(m, data):
    f = m.field
    y = V(f, data.draw(st.lists(st.integers(0, f.p - 1), min_size=m.nrows, max_size=m.nrows)))
    sols = [x for x in all_vectors(f, m.ncols) if matvec(m, x) == y]
    res = solve(m, y)
    assert res.feasible == bool(sols)
    if sols:
        assert matvec(m, res.particular) == y
        assert len(sols) == f.p**res.kernel.dim
        assert all(x in res for x in sols)
    else:
        # a combination of the augmented rows reading 0 = c
        cert = res.certificate
        assert not any(cert[:-1]) and cert[-1] != 0
        aug = [list(r) + [b] for r, b in zip(m.rows, y.entries)]
        assert Subspace.span(f, m.ncols + 1, aug).contains(V(f, cert))


def test_invertible_completion_examples():
    e = [Vector.unit(F2, 2, i) for i in range(2)]
    assert invertible_completion(e, e) == Matrix.identity(F2, 2)
    t = invertible_completion([V(F2, (1, 0))], [V(F2, (0, 1))])
    assert t == M(F2, [[0, 1], [1, 0]])
    assert matvec(t, V(F2, (0, 1))) == V(F2, (1, 0))


def test_invertible_completion_full_basis():
    ins = [V(F5, (1, 2, 0)), V(F5, (0, 1, 1)), V(F5, (1, 0, 4))]
    outs = [V(F5, (4, 0, 1)), V(F5, (1, 1, 1)), V(F5, (0, 2, 3))]
    t = invertible_completion(ins, outs)
    assert all(matvec(t, x) == y for x, y in zip(ins, outs))
    assert determinant(t) != 0


def test_invertible_completion_rejects_dependence():
    with pytest.raises(PreconditionError) as err:
        invertible_completion([V(F3, (1, 1)), V(F3, (2, 2))], [V(F3, (1, 0)), V(F3, (0, 1))])
    assert err.value.witness is not None
    with pytest.raises(PreconditionError):
        invertible_completion([V(F3, (1, 0)), V(F3, (0, 1))], [V(F3, (1, 0)), V(F3, (2, 0))])


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.data())
def test_invertible_completion_property(p, n, data):
    f = FieldSpec(p)
    k = data.draw(st.integers(1, n))
    vec = st.lists(st.integers(0, p - 1), min_size=n, max_size=n)
    ins = [V(f, data.draw(vec)) for _ in range(k)]
    outs = [V(f, data.draw(vec)) for _ in range(k)]
    if rank(Matrix.from_vectors(ins)) < k or rank(Matrix.from_vectors(outs)) < k:
        return
    t = invertible_completion(ins, outs)
    assert is_invertible(t) and determinant(t) != 0
    assert all(matvec(t, x) == y for x, y in zip(ins, outs))


def test_kron_examples():
    assert kron(V(F2, (1, 0)), V(F2, (0, 1))) == V(F2, (0, 1, 0, 0))
    assert kron(V(F2, (1, 1)), V(F2, (1, 1))) == V(F2, (1, 1, 1, 1))
    with pytest.raises(FieldMismatchError):
        kron(V(F2, (1, 0)), V(F3, (1, 0)))


@given(matrices(p=3, max_dim=3), matrices(p=3, max_dim=3))
def test_kron_rank_multiplicative(a, b):
    assert rank(kron(a, b)) == rank(a) * rank(b)


@given(matrices(p=3, max_dim=3), matrices(p=3, max_dim=3), st.data())
def test_kron_mixed_product(a, b, data):
    f = a.field
    x = V(f, data.draw(st.lists(st.integers(0, 2), min_size=a.ncols, max_size=a.ncols)))
    y = V(f, data.draw(st.lists(st.integers(0, 2), min_size=b.ncols, max_size=b.ncols)))
    assert matvec(kron(a, b), kron(x, y)) == kron(matvec(a, x), matvec(b, y))


def test_inverse_and_determinant():
    a = M(F5, [[2, 1], [1, 4]])
    assert determinant(a) == 2
    assert determinant(M(F5, [[2, 1], [1, 3]])) == 0
    assert matmul(a, inverse(a)) == Matrix.identity(F5, 2)
    with pytest.raises(PreconditionError):
        inverse(M(F5, [[1, 2], [2, 4]]))


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.data())
def test_subspace_equality_is_mutual_membership(p, n, data):
    f = FieldSpec(p)
    vec = st.lists(st.integers(0, p - 1), min_size=n, max_size=n)
    gens_a = [data.draw(vec) for _ in range(data.draw(st.integers(0, 3)))]
    gens_b = [data.draw(vec) for _ in range(data.draw(st.integers(0, 3)))]
    a, b = Subspace.span(f, n, gens_a), Subspace.span(f, n, gens_b)
    mutual = a.is_subspace_of(b) and b.is_subspace_of(a)
    assert (a == b) == mutual


def test_subspace_residual_and_annihilator():
    s = Subspace.span(F3, 3, [(1, 1, 0)])
    assert s.contains(V(F3, (2, 2, 0)))
    assert not s.residual(V(F3, (0, 1, 0))).is_zero()
    ann = s.annihilator()
    assert ann.nrows == 2
    assert matvec(ann, V(F3, (1, 1, 0))).is_zero()


def test_json_round_trip():
    s = Subspace.span(F5, 3, [(1, 2, 3), (2, 4, 1)])
    assert Subspace.from_json(F5, s.to_json()) == s
    assert M(F5, [[1, 2], [3, 4]]).to_json() == [[1, 2], [3, 4]]
