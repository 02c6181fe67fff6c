"""Root-datum arithmetic: dot action, normal forms, dimension formula."""

import random
from math import comb

import pytest

from flagfrob.rootsys import (
    DimensionError,
    TypeALattice,
    WeylElt,
    dot_action,
    dot_action_word,
    euler_polynomial,
    make_dominant_dot,
    weyl_dim,
)


def test_lattice_invariants():
    for n in range(2, 7):
        lat = TypeALattice(n)
        assert len(lat.positive_roots) == n * (n - 1) // 2
        # <rho, alpha_i^vee> = 1 for every simple root
        for i in range(1, n):
            assert lat.pairing(lat.rho, i) == 1


def test_dot_action_examples():
    lat = TypeALattice(4)
    assert dot_action_word(lat, (2, 1), (-5, 0, 5)) == (0, 2, 2)
    # wall fixed point: pairing of lam+rho with alpha_1 is zero
    assert dot_action_word(lat, (1,), (-1, 0, 0)) == (-1, 0, 0)
    assert dot_action(lat, WeylElt.longest(4), (0, 0, 0)) == (-2, -2, -2)


def test_dot_action_length_mismatch():
    lat = TypeALattice(4)
    with pytest.raises(DimensionError):
        dot_action_word(lat, (1,), (1, 2))


def test_dot_action_composition_law():
    rng = random.Random(7)
    for n in (3, 4, 5, 6):
        lat = TypeALattice(n)
        for _ in range(25):
            v = WeylElt.from_word(n, [rng.randrange(1, n) for _ in range(4)])
            w = WeylElt.from_word(n, [rng.randrange(1, n) for _ in range(4)])
            lam = tuple(rng.randint(-10, 10) for _ in range(n - 1))
            lhs = dot_action(lat, v, dot_action(lat, w, lam))
            rhs = dot_action(lat, v * w, lam)
            assert lhs == rhs


def test_make_dominant_examples():
    lat = TypeALattice(4)
    nf = make_dominant_dot(lat, (-1, -1, -1))
    assert nf.singular
    nf = make_dominant_dot(lat, (-5, 0, 5))
    assert not nf.singular and nf.length == 2 and nf.dominant == (0, 2, 2)
    # 2p*w1 - p*w3 at p = 5
    nf = make_dominant_dot(lat, (10, 0, -5))
    assert nf.length == 2 and nf.dominant == (7, 2, 0)


def test_make_dominant_idempotent_and_singular_invariance():
    rng = random.Random(11)
    for n in (3, 4, 5):
        lat = TypeALattice(n)
        for _ in range(40):
            lam = tuple(rng.randint(-8, 8) for _ in range(n - 1))
            nf = make_dominant_dot(lat, lam)
            if nf.singular:
                # singularity is invariant under the dot action
                w = WeylElt.from_word(n, [rng.randrange(1, n) for _ in range(3)])
                assert make_dominant_dot(lat, dot_action(lat, w, lam)).singular
            else:
                again = make_dominant_dot(lat, nf.dominant)
                assert again.length == 0 and again.dominant == nf.dominant
                # the found w really transports lam
                assert dot_action(lat, nf.w, lam) == nf.dominant


def test_length_equals_inversion_count_of_sorting():
    rng = random.Random(13)
    lat = TypeALattice(5)
    for _ in range(50):
        lam = tuple(rng.randint(-9, 9) for _ in range(4))
        nf = make_dominant_dot(lat, lam)
        if nf.singular:
            continue
        e = lat.to_eps(lat.add(lam, lat.rho))
        inversions = sum(
            1
            for i in range(len(e))
            for j in range(i + 1, len(e))
            if e[i] < e[j]
        )
        assert nf.length == inversions == nf.w.length()


def test_reduced_word_roundtrip():
    rng = random.Random(17)
    for n in (3, 4, 5):
        for _ in range(30):
            w = WeylElt.from_word(n, [rng.randrange(1, n) for _ in range(6)])
            word = w.reduced_word()
            assert len(word) == w.length()
            assert WeylElt.from_word(n, word) == w


def brute_force_weyl_dim(lat, lam):
    """Independent oracle: plain product over the positive-root pairings."""
    shifted = lat.add(lam, lat.rho)
    num = 1
    den = 1
    for root in lat.positive_roots:
        num *= sum(c * shifted[i] for i, c in enumerate(root))
        den *= sum(c for c in root)
    assert num % den == 0
    return num // den


def test_weyl_dim_examples():
    lat = TypeALattice(4)
    assert weyl_dim(lat, (1, 0, 0)) == 4
    assert weyl_dim(lat, (1, 0, 1)) == 15  # brute-forced positive-root product
    assert weyl_dim(lat, (5, 0, 0)) == 56 == comb(8, 3)
    assert weyl_dim(lat, (0, 2, 2)) == 126


def test_weyl_dim_against_bruteforce_and_duality():
    rng = random.Random(23)
    for n in (3, 4, 5):
        lat = TypeALattice(n)
        for _ in range(30):
            lam = tuple(rng.randint(0, 6) for _ in range(n - 1))
            d = weyl_dim(lat, lam)
            assert d == brute_force_weyl_dim(lat, lam)
            assert d == weyl_dim(lat, tuple(reversed(lam)))


def test_weyl_dim_rejects_non_dominant():
    lat = TypeALattice(4)
    with pytest.raises(ValueError):
        weyl_dim(lat, (-1, 0, 0))


def test_euler_polynomial_matches_normal_form():
    rng = random.Random(29)
    lat = TypeALattice(4)
    for _ in range(60):
        lam = tuple(rng.randint(-9, 9) for _ in range(3))
        nf = make_dominant_dot(lat, lam)
        val = euler_polynomial(lat, lam)
        if nf.singular:
            assert val == 0
        else:
            assert val == (-1) ** nf.length * weyl_dim(lat, nf.dominant)
