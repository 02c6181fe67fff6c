"""Formal K-classes on the flag variety: integer combinations of line classes.

A class is a dict mapping a weight tuple to a nonzero integer coefficient.
Tensor is convolution, dual negates weights, the Frobenius twist scales
them by p.  Two formally different classes can still agree in the actual
Grothendieck group; ``classes_equal`` decides that exactly by a
polynomial-identity test: the Euler pairing against every line bundle is
a polynomial of total degree at most the number of positive roots, and
line classes span the K-group, so vanishing on a simplex lattice of that
degree certifies vanishing everywhere.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .rootsys import TypeALattice, euler_polynomial


def kzero() -> dict:
    return {}


def kline(w) -> dict:
    return {tuple(w): 1}


def kadd(a: dict, b: dict, coeff: int = 1) -> dict:
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, 0) + coeff * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def kscale(c: int, a: dict) -> dict:
    if c == 0:
        return {}
    return {w: c * v for w, v in a.items()}


def ktensor(a: dict, b: dict) -> dict:
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = tuple(x + y for x, y in zip(w1, w2))
            v = out.get(w, 0) + c1 * c2
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def kdual(a: dict) -> dict:
    return {tuple(-x for x in w): c for w, c in a.items()}


def kfrobenius(a: dict, p: int) -> dict:
    return {tuple(p * x for x in w): c for w, c in a.items()}


def krank(a: dict) -> int:
    return sum(a.values())


def kdet(a: dict) -> tuple:
    """Determinant weight of a class: the coefficient-weighted sum of weights."""
    if not a:
        return ()
    rank = len(next(iter(a)))
    return tuple(sum(c * w[i] for w, c in a.items()) for i in range(rank))


def keuler(lattice: TypeALattice, a: dict) -> int:
    """Euler characteristic of a formal class (exact, characteristic-free)."""
    return sum(c * euler_polynomial(lattice, w) for w, c in a.items())


def keuler_pairing(lattice: TypeALattice, a: dict, b: dict) -> int:
    """chi(a, b) = euler of dual(a) tensor b, extended bilinearly."""
    total = 0
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = tuple(y - x for x, y in zip(w1, w2))
            total += c1 * c2 * euler_polynomial(lattice, w)
    return total


def _simplex_grid(rank: int, degree: int):
    for comb in combinations_with_replacement(range(rank + 1), degree):
        counts = [0] * rank
        for c in comb:
            if c > 0:
                counts[c - 1] += 1
        yield tuple(counts)


def simplex_points(rank: int, degree: int):
    """Lattice points x >= 0 with sum(x) <= degree (principal simplex lattice)."""
    seen = set()
    for pt in _simplex_grid(rank, degree):
        if pt not in seen:
            seen.add(pt)
            yield pt


_probe_cache: dict = {}
_equal_cache: dict = {}


def _build_probes(lattice: TypeALattice):
    """Certified evaluation points for K-class equality.

    The pairing functions mu -> chi(K @ L_mu) span a space of dimension
    exactly n! (the K-group rank; line classes span it and the Euler
    pairing is faithful).  A set of n! points is unisolvent on that space
    as soon as the evaluation matrix against n! independent line classes
    is invertible; invertibility is certified by a nonzero determinant
    modulo a large prime.  Returns the point list, or None to fall back
    to the full simplex grid.
    """
    import random
    from itertools import product as iproduct
    from math import factorial

    import numpy as np

    n = lattice.n
    if n in _probe_cache:
        return _probe_cache[n]
    size = factorial(n)
    npos = len(lattice.positive_roots)
    points = list(simplex_points(lattice.rank, npos))
    box = list(iproduct(range(n), repeat=lattice.rank))
    rng = random.Random(1091)
    q0 = 2147483647  # Mersenne prime; entries stay within int64 under mod
    rho = lattice.rho
    pair_idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    result = None
    for _ in range(8):
        qs = rng.sample(points, min(size, len(points)))
        bs = rng.sample(box, min(size, len(box)))
        if len(qs) < size or len(bs) < size:
            break
        eb = np.array(
            [lattice.to_eps(lattice.add(b, rho)) for b in bs], dtype=np.int64
        )
        eq = np.array([lattice.to_eps(q) for q in qs], dtype=np.int64)
        M = np.ones((size, size), dtype=np.int64)
        for i, j in pair_idx:
            d = (eb[:, i] - eb[:, j])[:, None] + (eq[:, i] - eq[:, j])[None, :]
            M = (M * (d % q0)) % q0
        # Gaussian elimination mod q0
        A = M.copy()
        ok = True
        for r in range(size):
            piv = None
            for i in range(r, size):
                if A[i, r] % q0:
                    piv = i
                    break
            if piv is None:
                ok = False
                break
            if piv != r:
                A[[r, piv]] = A[[piv, r]]
            inv = pow(int(A[r, r]), q0 - 2, q0)
            factors = (A[r + 1 :, r] * inv) % q0
            A[r + 1 :] = (A[r + 1 :] - factors[:, None] * A[r][None, :]) % q0
        if ok:
            result = qs
            break
    _probe_cache[n] = result
    return result


def classes_equal(lattice: TypeALattice, a: dict, b: dict) -> bool:
    """Exact equality test in the Grothendieck group of the flag variety."""
    diff = kadd(a, kscale(-1, b))
    if not diff:
        return True
    if krank(diff) != 0 or any(kdet(diff)):
        return False
    key = (lattice.n, tuple(sorted(diff.items())))
    hit = _equal_cache.get(key)
    if hit is not None:
        return hit
    npos = len(lattice.positive_roots)
    probes = _build_probes(lattice)
    grid = probes if probes is not None else simplex_points(lattice.rank, npos)
    rho = lattice.rho
    n = lattice.n
    pair_idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    eps_w = [
        (c, lattice.to_eps(lattice.add(w, rho))) for w, c in diff.items()
    ]
    equal = True
    for mu in grid:
        emu = lattice.to_eps(mu)
        total = 0
        for c, ew in eps_w:
            val = 1
            for i, j in pair_idx:
                f = (ew[i] + emu[i]) - (ew[j] + emu[j])
                if f == 0:
                    val = 0
                    break
                val *= f
            total += c * val
        if total != 0:
            equal = False
            break
    _equal_cache[key] = equal
    return equal
