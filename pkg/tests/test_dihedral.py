import cmath
import math
import random

import pytest

from oracles import reflect_in_line
from ratsurf.dihedral import (
    AffineElement,
    G_j,
    GroupElement,
    affine_identity,
    affine_mul,
    apply,
    compose,
    conjugate_index,
    conjugate_index_literal,
    conjugation,
    elements,
    identity,
    linear,
    reflection_S,
    rotation,
    tau,
    translation_value,
    u_vector,
)
from ratsurf.signature import make_signature, signatures
from ratsurf.stargon import ConstructionError, build_polygon

HEX = make_signature(1, 1, 4)


def test_normal_form():
    g = GroupElement(7, 3, 6)
    assert (g.p, g.ell) == (1, 1)
    assert repr(GroupElement(1, 1, 6)) == "RU"
    assert repr(GroupElement(3, 0, 6)) == "R^3"
    assert repr(identity(6)) == "e"


def test_relations():
    for n in range(3, 13):
        R, U = rotation(n), conjugation(n)
        assert R * U == U * R.inverse()
        assert (U * U).is_identity
        assert (R ** (n - 1) * R).is_identity
        assert (R**n).is_identity


def test_cayley_closure_exhaustive():
    for n in range(3, 13):
        G = elements(n)
        assert len(set(G)) == 2 * n
        Gs = set(G)
        for a in G:
            assert (a * a.inverse()).is_identity
            for b in G:
                assert compose(a, b) in Gs


def test_action_matches_symbolic_product():
    rng = random.Random(1)
    for n in (3, 6, 7, 12):
        G = elements(n)
        for _ in range(100):
            a, b = rng.choice(G), rng.choice(G)
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert abs((a * b).act(z) - a.act(b.act(z))) < 1e-12


def test_index_maps_match_geometry():
    for n in (3, 5, 6, 12):
        V = [cmath.exp(1j * math.pi * m / n) for m in range(2 * n)]
        for g in elements(n):
            for m in range(2 * n):
                assert abs(g.act(V[m]) - V[g.vertex_index(m)]) < 1e-12
                e = g.edge_index(m)
                ends = {g.vertex_index(m), g.vertex_index(m + 1)}
                assert ends == {e, (e + 1) % (2 * n)}


def test_S_hexagon_and_involution():
    assert reflection_S(0, 0, HEX) == GroupElement(1, 1, 6)
    for n in range(3, 13):
        for s in signatures(n):
            for j in range(3):
                for k in range(n):
                    S = reflection_S(j, k, s)
                    assert (S * S).is_identity
                    # S_k = R^k S R^-k
                    R = rotation(n)
                    assert S == R**k * reflection_S(j, 0, s) * R ** (-k)


def test_S_fixes_its_ray():
    for s in (HEX, make_signature(2, 3, 4)):
        n = s.n
        for j in range(3):
            for k in range(n):
                z = 1.7 * cmath.exp(1j * math.pi * (2 * k + s.part(j)) / n)
                assert abs(reflection_S(j, k, s).act(z) - z) < 1e-12


def test_conjugation_rules_exhaustive():
    for n in range(3, 13):
        for s in signatures(n):
            R, U = rotation(n), conjugation(n)
            for j in range(3):
                for k in range(n):
                    S = reflection_S(j, k, s)
                    assert R * S * R.inverse() == reflection_S(j, k + 1, s)
                    assert conjugate_index(j, k, R, s) == (k + 1) % n
                    assert conjugate_index(j, k, identity(n), s) == k
                    for g in elements(n):
                        assert g * S * g.inverse() == reflection_S(j, conjugate_index(j, k, g, s), s)


def test_literal_U_index_rule_is_wrong():
    # the -(k + 2 n_j) rule: n=6, n_j=1, k=2 gives 2, but U S_2 U = RU = S_3
    assert conjugate_index_literal(0, 2, conjugation(6), HEX) == 2
    U = conjugation(6)
    assert U * reflection_S(0, 2, HEX) * U == reflection_S(0, 3, HEX) != reflection_S(0, 2, HEX)
    assert conjugate_index(0, 2, U, HEX) == 3


def test_G_j_normal():
    for n in range(3, 13):
        for s in signatures(n):
            for j in range(3):
                H = G_j(s, j)
                for g in elements(n):
                    assert all(g * h * g.inverse() in H for h in H)


def test_u_vector_identities():
    for n in range(3, 25):
        for s in signatures(n):
            amp = 2.5 * math.sin(math.pi * s.n1 / n)
            for k in range(2 * n):
                u = u_vector(k, s, 2.5)
                assert abs(abs(u) - amp) < 1e-12
                if k % 2 == 0:
                    assert abs(u.conjugate() - u_vector((2 * (n - k // 2) + 1) % (2 * n), s, 2.5)) < 1e-12
                for j in range(n):
                    assert abs(rotation(n, j).act(u) - u_vector(k + 2 * j, s, 2.5)) < 1e-12
                for g in elements(n):
                    assert abs(g.act(u) - u_vector(g.u_index(k), s, 2.5)) < 1e-12


def test_lines_of_u_vectors_carry_edges():
    # 2 u_k lies on the reflection line of its edge: edge 2j has normal u_2j,
    # edge 2j-1 has normal u_2j+1
    for s in (HEX, make_signature(1, 2, 5), make_signature(2, 3, 7)):
        n = s.n
        P = build_polygon(s, 1.0)
        for e in range(2 * n):
            k = e if e % 2 == 0 else (e + 2) % (2 * n)
            u = u_vector(k, s)
            a, b = P.edge_points(e)
            assert abs(reflect_in_line(0, a, b) - 2 * u) < 1e-12


def test_affine_group_axioms():
    rng = random.Random(3)
    n = 6

    def rand():
        g = GroupElement(rng.randrange(n), rng.randrange(2), n)
        return AffineElement(g, tuple(rng.randrange(-2, 3) for _ in range(2 * n)))

    e = affine_identity(n)
    for _ in range(200):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == e and a.inverse() * a == e
        assert a * e == a


def test_affine_product_formula():
    # (g_a, t_a)(g_b, t_b) = (g_a g_b, g_a(t_b) + t_a)
    n = 6
    a = AffineElement(GroupElement(2, 1, n), (1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0))
    b = AffineElement(GroupElement(1, 0, n), (0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0))
    ab = affine_mul(a, b)
    assert ab.g == GroupElement(1, 1, n)
    # U sends u_3 to u_-2 = u_10, then R^2 adds 4
    want = [0] * 12
    want[0] = 1
    want[(1 - 3 + 4) % 12] = 1
    assert list(ab.t) == want


def test_translation_commutes_with_rotation():
    n = 6
    for j in range(2 * n):
        for k in range(n):
            lhs = tau((j + 2 * k) % (2 * n), n) * linear(rotation(n, k))
            rhs = linear(rotation(n, k)) * tau(j, n)
            assert lhs == rhs


def test_apply_homomorphism():
    rng = random.Random(4)
    s = make_signature(1, 2, 5)
    n = s.n

    def rand():
        g = GroupElement(rng.randrange(n), rng.randrange(2), n)
        return AffineElement(g, tuple(rng.randrange(-2, 3) for _ in range(2 * n)))

    for _ in range(1000):
        a, b = rand(), rand()
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        assert abs(apply(a * b, z, s, 1.3) - apply(a, apply(b, z, s, 1.3), s, 1.3)) < 1e-10
    z = 0.3 + 0.4j
    assert apply(affine_identity(n), z, s) == z
    U = linear(conjugation(n))
    assert abs(apply(U, apply(U, z, s), s) - z) < 1e-15


def test_translation_value():
    s = HEX
    t = [0] * 12
    t[3] = 2
    t[5] = -1
    want = 2 * (2 * u_vector(3, s)) - 2 * u_vector(5, s)
    assert abs(translation_value(t, s) - want) < 1e-14


def test_no_nonidentity_element_fixes_an_edge():
    for n in range(3, 13):
        for s in signatures(n):
            try:
                P = build_polygon(s, 1.0)
            except ConstructionError:
                continue
            for e in range(2 * n):
                a, b = P.edge_points(e)
                mid, other = (a + b) / 2, 0.3 * a + 0.7 * b
                for g in elements(n):
                    if g.is_identity:
                        continue
                    assert abs(g.act(mid) - mid) > 1e-9 or abs(g.act(other) - other) > 1e-9


def test_translation_vector_length_checked():
    with pytest.raises(ValueError):
        AffineElement(identity(6), (0, 1))
