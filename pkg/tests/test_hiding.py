import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modalqt.errors import DomainError, PreconditionError
from modalqt.gf import FieldSpec, Polynomial, find_irreducible_quadratic, quadratic_roots
from modalqt.hiding import (
    AqtHidingInstance,
    HidingMapSpec,
    aqt_unhide_demo,
    build_hiding_map,
    companion_matrix,
    entangled_reduced_states_census,
    paper_k_quadratic,
    product_state_locator,
    verify_hiding,
)
from modalqt.linalg import Matrix, kron

F2, F3 = FieldSpec(2), FieldSpec(3)
Z3 = HidingMapSpec.from_rows(3, [[1, -1], [1, 2]])


def det_pencil_products(spec):
    """Projective points where a*M0 + b*M1 is singular, by direct 2x2 determinants."""
    p = spec.field.p
    pts = [(0, 1)] + [(1, b) for b in range(p)]
    out = []
    for a, b in pts:
        m = [[(a * x + b * y) % p for x, y in zip(r0, r1)] for r0, r1 in zip(spec.M0.rows, spec.M1.rows)]
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p == 0:
            out.append((a, b))
    return sorted(out)


@st.composite
def specs(draw, p=None, identity=None):
    p = p or draw(st.sampled_from([2, 3, 5]))
    entry = st.integers(0, p - 1)
    mat = st.lists(st.lists(entry, min_size=2, max_size=2), min_size=2, max_size=2)
    m1 = draw(mat)
    use_identity = draw(st.booleans()) if identity is None else identity
    m0 = None if use_identity else draw(mat)
    try:
        return HidingMapSpec.from_rows(p, m1, m0)
    except PreconditionError:
        from hypothesis import assume

        assume(False)


def test_z3_example_fails():
    rep = verify_hiding(Z3)
    assert rep.verdict == "fails"
    w = rep.witness
    assert (w.a, w.b) == (0, 1)
    assert w.left.to_json() == [1, 1] and w.right.to_json() == [1, 2]
    assert kron(w.left, w.right) == w.state.vector


def test_z3_pencil_is_a_square():
    assert Z3.pencil_coefficients() == (1, 0, 0)
    locs = product_state_locator(Z3)
    assert [(w.a, w.b) for w in locs] == [(0, 1)]


def test_z3_k_quadratic():
    q = paper_k_quadratic(Z3)
    assert q.coeffs == (1, 1, 1)
    assert quadratic_roots(q) == {1}
    assert {w.k for w in product_state_locator(Z3)} == {1}


def test_companion_gf3():
    q = Polynomial((1, 0, 1), F3)
    spec = build_hiding_map(F3, q)
    assert spec.M1 == Matrix.from_rows(F3, [[0, 2], [1, 0]])
    assert product_state_locator(spec) == []
    rep = verify_hiding(spec)
    assert rep.verdict == "hides" and rep.checked == 8 and rep.entangled == 8
    assert rep.to_json()["reduced_states_full"] is True
    k = paper_k_quadratic(spec)
    assert k.coeffs == (1, 0, 1) and not quadratic_roots(k)


def test_companion_gf2():
    spec = build_hiding_map(F2, Polynomial((1, 1, 1), F2))
    assert spec.M1 == Matrix.from_rows(F2, [[0, 1], [1, 1]])
    rep = verify_hiding(spec)
    assert rep.hides and rep.checked == 3 and rep.entangled == 3


def test_reducible_quadratic_rejected():
    with pytest.raises(PreconditionError) as err:
        build_hiding_map(F3, Polynomial((1, 1, 1), F3))
    assert err.value.witness == 1
    with pytest.raises(PreconditionError):
        build_hiding_map(F3, Polynomial((1, 1, 2), F3))


def test_dependent_images_rejected():
    with pytest.raises(PreconditionError):
        HidingMapSpec.from_rows(3, [[1, 0], [0, 1]])
    with pytest.raises(PreconditionError):
        HidingMapSpec.from_rows(5, [[2, 0], [0, 2]])


def test_k_quadratic_needs_identity():
    spec = HidingMapSpec.from_rows(3, [[0, 1], [1, 0]], [[1, 0], [0, 2]])
    with pytest.raises(DomainError):
        paper_k_quadratic(spec)


def test_companion_matrix_char_poly():
    for p in (2, 3, 5, 7):
        f = FieldSpec(p)
        for b, c in itertools.product(range(p), repeat=2):
            m = companion_matrix(Polynomial((c, b, 1), f))
            (a, x), (y, d) = m.rows
            assert ((-(a + d)) % p, (a * d - x * y) % p) == (b, c)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_constructed_maps_hide(p):
    f = FieldSpec(p)
    rep = verify_hiding(build_hiding_map(f, find_irreducible_quadratic(f)))
    assert rep.hides and rep.checked == p * p - 1


@settings(max_examples=150)
@given(specs())
def test_hiding_equivalences(spec):
    rep = verify_hiding(spec)
    located = product_state_locator(spec)
    brute = det_pencil_products(spec)
    assert sorted((w.a, w.b) for w in located) == brute
    assert rep.hides == (not located)
    for w in located:
        assert kron(w.left, w.right) == w.state.vector
    if spec.M0 == Matrix.identity(spec.field, 2) and spec.M1.rows[1][0] != 0:
        assert rep.hides == (not quadratic_roots(paper_k_quadratic(spec)))


@settings(max_examples=80)
@given(specs(), st.data())
def test_verdict_scale_invariant(spec, data):
    p = spec.field.p
    s0 = data.draw(st.integers(1, p - 1))
    s1 = data.draw(st.integers(1, p - 1))
    scaled = HidingMapSpec.from_rows(
        p,
        [[x * s1 for x in r] for r in spec.M1.rows],
        [[x * s0 for x in r] for r in spec.M0.rows],
    )
    assert verify_hiding(scaled).verdict == verify_hiding(spec).verdict


@pytest.mark.parametrize("p,states", [(2, 15), (3, 40)])
def test_entangled_states_have_full_reduced_states(p, states):
    census = entangled_reduced_states_census(FieldSpec(p))
    assert census["states"] == states
    assert census["exceptions"] == []
    # entangled = invertible 2x2 matrices up to scale
    assert census["entangled"] == (p * p - 1) * (p * p - p) // (p - 1)


def test_spec_json_round_trip():
    assert HidingMapSpec.from_json(Z3.to_json()) == Z3


# -- complex amplitudes -------------------------------------------------------


def test_aqt_fixed_example():
    r = 1 / math.sqrt(2)
    w = aqt_unhide_demo(AqtHidingInstance(0.5, [[0, r], [r, 0]]))
    assert abs(abs(w.alpha) - r) < 1e-12 and abs(abs(w.beta) - r) < 1e-12
    left = w.left / np.linalg.norm(w.left)
    assert np.allclose(np.abs(left), [r, r]) and np.allclose(np.abs(w.right), [r, r])
    assert abs(np.linalg.det(w.state)) < 1e-9
    assert np.allclose(np.outer(w.left, w.right), w.state)


def test_aqt_degenerate_z_quadratic():
    # C10 = 0 and C11 sqrt(lam) = C00 sqrt(1 - lam) kill the z^2 and z terms
    c = np.array([[1, 1], [0, 1]]) / math.sqrt(3)
    inst = AqtHidingInstance(0.5, c)
    z2, z1, _ = inst.paper_z_quadratic()
    assert abs(z2) < 1e-12 and abs(z1) < 1e-12
    w = aqt_unhide_demo(inst)
    assert w.singular_ratio < 1e-8


def test_aqt_dependent_rejected():
    r = 1 / math.sqrt(2)
    with pytest.raises(PreconditionError):
        aqt_unhide_demo(AqtHidingInstance(0.5, [[r, 0], [0, r]]))


def test_aqt_domain():
    with pytest.raises(DomainError):
        AqtHidingInstance(0.0, [[1, 0], [0, 0]])
    with pytest.raises(DomainError):
        AqtHidingInstance(0.5, [[1, 1], [0, 0]])


def test_aqt_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(300):
        inst = AqtHidingInstance.random(rng)
        w = aqt_unhide_demo(inst)
        assert w.singular_ratio < 1e-8
        assert np.allclose(w.alpha * inst.M0 + w.beta * inst.C, w.state * np.linalg.norm(w.alpha * inst.M0 + w.beta * inst.C))
