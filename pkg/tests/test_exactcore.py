"""Substrate tests: Howell forms, presentations, homology, invariants.

The small-modulus cases are checked against exhaustive enumeration of
row spans, which is the ground truth everything else leans on.
"""

import itertools
import random

import pytest

from drwitt.exactcore import (
    GF,
    ZZ,
    FinComplex,
    FinModPresentation,
    InvariantFactors,
    NonComplex,
    Zq,
    ZmodRing,
    hermite,
    homology,
    howell,
    intersect,
    invariants_isomorphic,
    kernel,
    member,
    preimage,
    quotient_invariants,
    smith_diagonal,
    solve,
    span_order,
    z_kernel,
    z_solve,
)


def brute_span(R, rows, ncols):
    """All elements of the row span, by enumeration of coefficients."""
    vecs = set()
    for coeffs in itertools.product(range(R.q), repeat=len(rows)):
        v = [0] * ncols
        for c, row in zip(coeffs, rows):
            for j, x in enumerate(row):
                v[j] = (v[j] + c * x) % R.q
        vecs.add(tuple(v))
    return vecs


# ---------------------------------------------------------------------------
# Howell form

def test_howell_identity_over_z9():
    R = ZmodRing(3, 2)
    eye = [[1, 0], [0, 1]]
    assert howell(R, eye) == eye


def test_howell_single_saturated_row():
    R = ZmodRing(3, 2)
    assert howell(R, [[3]]) == [[3]]


def test_howell_row_module_equality_brute_force():
    # random 3x3 over Z/8, ten seeds: span preserved, form canonical
    R = ZmodRing(2, 3)
    rng = random.Random(20240811)
    for _ in range(10):
        A = [[rng.randrange(8) for _ in range(3)] for _ in range(3)]
        H = howell(R, A)
        assert brute_span(R, A, 3) == brute_span(R, H, 3)
        # idempotent
        assert howell(R, H) == H
        # membership test agrees with enumeration
        span = brute_span(R, A, 3)
        for v in itertools.product(range(8), repeat=3):
            assert member(R, H, list(v)) == (v in span)


def test_howell_canonical_under_row_operations():
    R = ZmodRing(3, 3)
    rng = random.Random(7)
    for _ in range(25):
        A = [[rng.randrange(27) for _ in range(4)] for _ in range(3)]
        # unimodular row mix: swap, add multiple, scale by unit
        B = [row[:] for row in A]
        i, j = rng.randrange(3), rng.randrange(3)
        if i != j:
            c = rng.randrange(27)
            B[i] = [(x + c * y) % 27 for x, y in zip(B[i], B[j])]
        u = rng.choice([1, 2, 4, 5, 7, 8])
        B[i] = [(u * x) % 27 for x in B[i]]
        assert howell(R, A) == howell(R, B)


def test_howell_shadow_rows_capture_tails():
    # span{(2,1)} over Z/4 contains 2*(2,1) = (0,2): Howell must expose it
    R = ZmodRing(2, 2)
    H = howell(R, [[2, 1]])
    assert member(R, H, [0, 2])
    assert brute_span(R, [[2, 1]], 2) == brute_span(R, H, 2)


def test_empty_and_degenerate_matrices():
    R = ZmodRing(2, 3)
    assert howell(R, []) == []
    assert howell(R, [[0, 0]]) == []
    assert quotient_invariants(R, [], 0) == InvariantFactors(())


def test_kernel_solve_preimage_intersect():
    R = ZmodRing(2, 3)
    rng = random.Random(99)
    for _ in range(30):
        A = [[rng.randrange(8) for _ in range(3)] for _ in range(2)]
        K = kernel(R, A)
        for krow in K:
            out = [sum(c * A[i][j] for i, c in enumerate(krow)) % 8 for j in range(3)]
            assert not any(out)
        # kernel is complete (brute force)
        brute = {
            x
            for x in itertools.product(range(8), repeat=2)
            if not any(sum(c * A[i][j] for i, c in enumerate(x)) % 8 for j in range(3))
        }
        assert brute_span(R, K, 2) == brute if K else brute == {(0, 0)}
        # solve returns actual solutions
        x = [rng.randrange(8) for _ in range(2)]
        b = [sum(c * A[i][j] for i, c in enumerate(x)) % 8 for j in range(3)]
        sol = solve(R, A, b)
        assert sol is not None
        out = [sum(c * A[i][j] for i, c in enumerate(sol)) % 8 for j in range(3)]
        assert out == b


def test_preimage_and_intersect_against_enumeration():
    R = ZmodRing(2, 2)
    rng = random.Random(5)
    for _ in range(15):
        A = [[rng.randrange(4) for _ in range(2)] for _ in range(2)]
        B = [[rng.randrange(4) for _ in range(2)]]
        spanB = brute_span(R, B, 2)
        P = preimage(R, A, B)
        brute = {
            x
            for x in itertools.product(range(4), repeat=2)
            if tuple(sum(c * A[i][j] for i, c in enumerate(x)) % 4 for j in range(2)) in spanB
        }
        assert brute_span(R, P, 2) == brute if P else brute == {(0, 0)}
        I = intersect(R, A, B, 2)
        got = brute_span(R, I, 2) if I else {(0, 0)}
        assert got == brute_span(R, A, 2) & spanB


def test_span_order():
    R = ZmodRing(2, 3)
    assert span_order(R, [[1, 0], [0, 2]], 2) == 8 * 4
    assert span_order(R, [], 2) == 1


# ---------------------------------------------------------------------------
# integers

def test_hermite_and_kernel_over_z():
    H = hermite([[2, 4], [4, 0]])
    assert H == [[2, 4], [0, 8]]
    K = z_kernel([[2, 4], [1, 2]])
    assert K and all(k[0] * 2 + k[1] * 1 == 0 and k[0] * 4 + k[1] * 2 == 0 for k in K)
    assert z_solve([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert z_solve([[2, 0]], [1, 0]) is None


def test_smith_diagonal():
    assert smith_diagonal([[2, 0], [0, 8]], 2) == [2, 8]
    assert smith_diagonal([[0, 1], [1, 0]], 2) == [1, 1]
    assert smith_diagonal([[4, 6]], 2) == [2]


# ---------------------------------------------------------------------------
# GF(p^f) and the unramified lift

def test_gf_field_axioms_small():
    for (p, f) in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        K = GF(p, f)
        els = list(K.elements())
        for a in els[: min(9, len(els))]:
            for b in els[: min(9, len(els))]:
                assert K.mul(a, b) == K.mul(b, a)
                assert K.add(a, b) == K.add(b, a)
        for a in K.units():
            assert K.mul(a, K.inv(a)) == 1
        # Frobenius is additive and f-fold iterate is the identity
        for a in els:
            for b in els:
                assert K.frob(K.add(a, b)) == K.add(K.frob(a), K.frob(b))
        for a in els:
            x = a
            for _ in range(f):
                x = K.frob(x)
            assert x == a


def test_zq_frobenius_and_teichmuller():
    for (p, f) in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        W = Zq(p, f, 6)
        one = W.one()
        assert W.frobenius(one) == one
        # Frobenius is a ring hom reducing to x -> x^p
        K = W.residue
        for c in range(K.q):
            t = W.teichmuller(c)
            assert W.reduce_residue(t) == c
            assert W.frobenius(t) == W.teichmuller(K.frob(c))
            # multiplicativity of the lift
            for cc in range(K.q):
                assert W.mul(W.teichmuller(c), W.teichmuller(cc)) == W.teichmuller(K.mul(c, cc))
        # sigma has order f
        x = W.teichmuller(min(2, K.q - 1))
        y = x
        for _ in range(f):
            y = W.frobenius(y)
        assert y == x


# ---------------------------------------------------------------------------
# presentations, homology, invariant factors

def test_homology_multiplication_by_p():
    # 0 -> Z/p^2 --p--> Z/p^2 -> 0, at the target: cokernel is Z/p
    R = ZmodRing(3, 2)
    M = FinModPresentation.free(R, 1)
    C = FinComplex(R, {0: M, 1: M}, {0: [[3]]})
    assert homology(C, 1) == InvariantFactors((3,))
    assert homology(C, 0) == InvariantFactors((3,))  # kernel of *p on Z/9


def test_homology_zero_differential_over_Z():
    M = FinModPresentation.free(ZZ, 1)
    C = FinComplex(ZZ, {0: M, 1: M}, {0: [[0]]})
    assert homology(C, 0) == InvariantFactors((), 1)
    assert homology(C, 1) == InvariantFactors((), 1)


def test_noncomplex_rejected():
    R = ZmodRing(2, 3)
    M = FinModPresentation.free(R, 1)
    with pytest.raises(NonComplex):
        FinComplex(R, {0: M, 1: M, 2: M}, {0: [[1]], 1: [[1]]})


def brute_homology_order(R, d0, d1, ranks):
    """|ker d1| / |im d0| over Z/p^N by enumeration (free modules)."""
    k0, k1, k2 = ranks
    ker = [
        x
        for x in itertools.product(range(R.q), repeat=k1)
        if not any(sum(c * d1[i][j] for i, c in enumerate(x)) % R.q for j in range(k2))
    ]
    img = {
        tuple(sum(c * d0[i][j] for i, c in enumerate(x)) % R.q for j in range(k1))
        for x in itertools.product(range(R.q), repeat=k0)
    }
    return len(ker) // len(img)


def test_homology_matches_exhaustive_count():
    # random 3-term complexes over Z/27 with rank <= 3
    R = ZmodRing(3, 3)
    rng = random.Random(424242)
    found = 0
    while found < 8:
        k0, k1, k2 = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2)
        d0 = [[rng.randrange(27) for _ in range(k1)] for _ in range(k0)]
        d1 = [[rng.randrange(27) for _ in range(k2)] for _ in range(k1)]
        comp = [
            [sum(d0[i][l] * d1[l][j] for l in range(k1)) % 27 for j in range(k2)]
            for i in range(k0)
        ]
        if any(any(row) for row in comp):
            continue
        found += 1
        C = FinComplex(
            R,
            {0: FinModPresentation.free(R, k0), 1: FinModPresentation.free(R, k1), 2: FinModPresentation.free(R, k2)},
            {0: d0, 1: d1},
        )
        inv = homology(C, 1)
        assert inv.order() == brute_homology_order(R, d0, d1, (k0, k1, k2))


def test_homology_of_split_complex_is_zero():
    # a complex with a null homotopy: 0 -> M --id--> M -> 0
    R = ZmodRing(2, 3)
    M = FinModPresentation.free(R, 2)
    C = FinComplex(R, {0: M, 1: M}, {0: [[1, 0], [0, 1]]})
    assert homology(C, 0).is_trivial()
    assert homology(C, 1).is_trivial()


def test_invariants_isomorphic():
    a = InvariantFactors((2,))
    assert invariants_isomorphic(a, InvariantFactors((2,)))
    assert not invariants_isomorphic(InvariantFactors((4,)), InvariantFactors((2, 2)))


def test_invariants_presentation_independent():
    # Z/4 (+) Z/2 presented two ways
    R = ZmodRing(2, 3)
    A = FinModPresentation(R, 2, [[4, 0], [0, 2]])
    # mixed generators: relations in another basis
    B = FinModPresentation(R, 2, [[4, 4], [4, 6]])
    assert A.invariants() == B.invariants() == InvariantFactors((2, 4))


def test_invariants_stable_under_unimodular_row_mix():
    R = ZmodRing(2, 4)
    rng = random.Random(11)
    for _ in range(100):
        k = rng.randint(1, 3)
        m = rng.randint(1, 3)
        M = [[rng.randrange(16) for _ in range(k)] for _ in range(m)]
        U = [[0] * m for _ in range(m)]
        # random invertible U: unit lower triangular times permutation
        perm = list(range(m))
        rng.shuffle(perm)
        for i in range(m):
            U[i][perm[i]] = rng.choice([1, 3, 5, 7, 9, 11, 13, 15])
        UM = [[sum(U[i][l] * M[l][j] for l in range(m)) % 16 for j in range(k)] for i in range(m)]
        assert quotient_invariants(R, M, k) == quotient_invariants(R, UM, k)


def test_gf_quotient_invariants_are_abelian_groups():
    K = GF(2, 2)
    # F_4^2 / line: one F_4 left = (Z/2)^2 as an abelian group
    assert quotient_invariants(K, [[1, 0]], 2) == InvariantFactors((2, 2))


def test_json_form():
    inv = InvariantFactors((3, 9))
    assert inv.to_json(p=3) == {"torsion": ["3^1", "3^2"], "free_rank": 0}
