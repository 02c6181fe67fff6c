"""Exact root-system arithmetic for SL(n): weights, Weyl group, dot action.

Weights live in fundamental-weight coordinates (integer tuples of length
n-1).  The Weyl group S_n acts through "epsilon" coordinates, the partial
sums of the fundamental coordinates, where simple reflections swap
adjacent entries.  Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

Weight = tuple


class DimensionError(ValueError):
    """Weight vector length does not match the lattice rank."""


class TypeALattice:
    """Root datum of SL(n).

    Parameters
    ----------
    n : int
        Rank parameter of SL(n), n >= 2.  Weights have length n-1.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("SL(n) needs n >= 2")
        self.n = n
        self.rank = n - 1
        self.rho = (1,) * self.rank
        # positive root eps_i - eps_j (0 <= i < j < n), written as a 0/1
        # coefficient vector over the simple roots alpha_{i+1}..alpha_j
        self.positive_roots = tuple(
            tuple(1 if i <= k < j else 0 for k in range(self.rank))
            for i in range(n)
            for j in range(i + 1, n)
        )
        # product of <rho, alpha^vee> over positive roots = prod of (j-i)
        self._weyl_denominator = prod(
            j - i for i in range(n) for j in range(i + 1, n)
        )

    def __repr__(self):
        return "TypeALattice(n=%d)" % self.n

    def check(self, lam) -> Weight:
        lam = tuple(int(a) for a in lam)
        if len(lam) != self.rank:
            raise DimensionError(
                "weight length %d, lattice rank %d" % (len(lam), self.rank)
            )
        return lam

    def add(self, a, b) -> Weight:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b) -> Weight:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a) -> Weight:
        return tuple(-x for x in a)

    def scale(self, c: int, a) -> Weight:
        return tuple(c * x for x in a)

    def zero(self) -> Weight:
        return (0,) * self.rank

    def fundamental(self, i: int) -> Weight:
        """omega_i for 1 <= i <= n-1."""
        if not 1 <= i <= self.rank:
            raise DimensionError("no fundamental weight omega_%d" % i)
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def simple_root(self, i: int) -> Weight:
        """alpha_i in fundamental-weight coordinates (a Cartan matrix row)."""
        return tuple(
            2 if k == i - 1 else (-1 if abs(k - (i - 1)) == 1 else 0)
            for k in range(self.rank)
        )

    def to_eps(self, lam) -> tuple:
        """Epsilon coordinates (length n, last entry 0): e_k = sum(lam[k:])."""
        e = []
        acc = 0
        for a in reversed(lam):
            acc += a
            e.append(acc)
        e.reverse()
        e.append(0)
        return tuple(e)

    def from_eps(self, e) -> Weight:
        return tuple(e[i] - e[i + 1] for i in range(len(e) - 1))

    def pairing(self, lam, i: int) -> int:
        """<lam, alpha_i^vee> for a simple coroot, i in 1..n-1."""
        return lam[i - 1]

    def is_dominant(self, lam) -> bool:
        return all(a >= 0 for a in lam)

    def is_rho_singular(self, lam) -> bool:
        """True when lam+rho lies on some wall (repeated epsilon entry)."""
        e = self.to_eps(self.add(lam, self.rho))
        return len(set(e)) < len(e)

    def weyl_order(self) -> int:
        return prod(range(2, self.n + 1))


@dataclass(frozen=True)
class WeylElt:
    """Element of S_n in the permutation model.

    ``perm`` maps positions: acting on epsilon coordinates,
    ``(w.e)[perm[i]] = e[i]``.  Two elements are equal iff their
    permutations are; the length is the inversion count.
    """

    n: int
    perm: tuple

    @staticmethod
    def identity(n: int) -> "WeylElt":
        return WeylElt(n, tuple(range(n)))

    @staticmethod
    def simple(n: int, i: int) -> "WeylElt":
        """Simple reflection s_i (1 <= i <= n-1), swapping eps_i, eps_{i+1}."""
        if not 1 <= i <= n - 1:
            raise DimensionError("no simple reflection s_%d in S_%d" % (i, n))
        p = list(range(n))
        p[i - 1], p[i] = p[i], p[i - 1]
        return WeylElt(n, tuple(p))

    @staticmethod
    def from_word(n: int, word) -> "WeylElt":
        """Product s_{word[0]} s_{word[1]} ... (rightmost applied first)."""
        w = WeylElt.identity(n)
        for i in word:
            w = w * WeylElt.simple(n, i)
        return w

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        # (self o other): apply other first
        if self.n != other.n:
            raise DimensionError("mixed symmetric groups")
        return WeylElt(self.n, tuple(self.perm[other.perm[i]] for i in range(self.n)))

    def inverse(self) -> "WeylElt":
        inv = [0] * self.n
        for i, j in enumerate(self.perm):
            inv[j] = i
        return WeylElt(self.n, tuple(inv))

    def length(self) -> int:
        p = self.perm
        return sum(
            1 for i in range(self.n) for j in range(i + 1, self.n) if p[i] > p[j]
        )

    def act_eps(self, e):
        out = [0] * self.n
        for i, v in enumerate(e):
            out[self.perm[i]] = v
        return tuple(out)

    def act(self, lattice: TypeALattice, lam) -> Weight:
        """Ordinary linear action on a weight."""
        return lattice.from_eps(self.act_eps(lattice.to_eps(lam)))

    def reduced_word(self) -> tuple:
        """A reduced word via adjacent-swap sorting; product order as in from_word."""
        # Applying s_k (temporal order m1, m2, ...) composes to s_{ml}...s_{m1};
        # sorting self.perm to the identity by swaps of *values at adjacent
        # positions of the inverse* recovers the word.
        e = list(self.inverse().perm)  # w.act_eps applied to (0,1,..,n-1)... see below
        # We sort the sequence w^{-1}(identity positions): find adjacent
        # ascents in eps-image terms.  Simpler: bubble-sort the one-line
        # permutation q with q[j] = position i such that perm[i] = j.
        word_temporal = []
        q = [0] * self.n
        for i, j in enumerate(self.perm):
            q[j] = i
        # q is perm^{-1}; w = product of swaps rebuilding perm from identity.
        # Repeatedly remove an adjacent inversion of q.
        q = list(self.perm)
        while True:
            for k in range(self.n - 1):
                if q[k] > q[k + 1]:
                    q[k], q[k + 1] = q[k + 1], q[k]
                    word_temporal.append(k + 1)
                    break
            else:
                break
        # q sorted ascending: perm = s_{m1} s_{m2} ... s_{ml} applied... verify
        w = WeylElt.from_word(self.n, tuple(reversed(word_temporal)))
        if w.perm == self.perm:
            return tuple(reversed(word_temporal))
        w = WeylElt.from_word(self.n, tuple(word_temporal))
        if w.perm == self.perm:
            return tuple(word_temporal)
        raise AssertionError("reduced word reconstruction failed")

    @staticmethod
    def longest(n: int) -> "WeylElt":
        return WeylElt(n, tuple(reversed(range(n))))


def dot_action(lattice: TypeALattice, w: WeylElt, lam) -> Weight:
    """Shifted Weyl action w.lam = w(lam + rho) - rho, computed exactly."""
    lam = lattice.check(lam)
    shifted = lattice.add(lam, lattice.rho)
    return lattice.sub(w.act(lattice, shifted), lattice.rho)


def dot_action_word(lattice: TypeALattice, word, lam) -> Weight:
    """Dot action of the product s_{word[0]} ... s_{word[-1]} on lam."""
    return dot_action(lattice, WeylElt.from_word(lattice.n, word), lam)


@dataclass(frozen=True)
class DotNormalForm:
    """Result of moving a weight to the dominant chamber by the dot action."""

    singular: bool
    w: WeylElt | None = None
    length: int = 0
    dominant: Weight | None = None


def make_dominant_dot(lattice: TypeALattice, lam) -> DotNormalForm:
    """Find the unique w with w.lam dominant, or report lam+rho singular.

    Returns
    -------
    DotNormalForm
        ``singular=True`` when lam+rho has a repeated epsilon entry;
        otherwise the minimal-length w, its length, and w.lam.
    """
    lam = lattice.check(lam)
    e = lattice.to_eps(lattice.add(lam, lattice.rho))
    if len(set(e)) < len(e):
        return DotNormalForm(singular=True)
    # rank of each entry in descending order = target position
    order = sorted(range(lattice.n), key=lambda i: -e[i])
    perm = [0] * lattice.n
    for target, source in enumerate(order):
        perm[source] = target
    w = WeylElt(lattice.n, tuple(perm))
    sorted_e = tuple(sorted(e, reverse=True))
    dom = lattice.sub(lattice.from_eps(sorted_e), lattice.rho)
    return DotNormalForm(False, w, w.length(), dom)


def weyl_dim(lattice: TypeALattice, lam) -> int:
    """Dimension of the induced module with highest weight lam (dominant).

    Weyl dimension formula as an exact integer: the product over positive
    roots of <lam+rho, alpha^vee> / <rho, alpha^vee>.
    """
    lam = lattice.check(lam)
    if not lattice.is_dominant(lam):
        raise ValueError("weyl_dim needs a dominant weight, got %r" % (lam,))
    e = lattice.to_eps(lattice.add(lam, lattice.rho))
    num = prod(e[i] - e[j] for i in range(lattice.n) for j in range(i + 1, lattice.n))
    assert num % lattice._weyl_denominator == 0
    return num // lattice._weyl_denominator


_euler_cache: dict = {}


def euler_polynomial(lattice: TypeALattice, lam) -> int:
    """Signed Weyl-polynomial value at lam: the Euler characteristic of L_lam.

    Equals 0 on singular lam+rho, and (-1)^{l(w)} weyl_dim(w.lam) otherwise;
    computed directly as the alternating product, valid for every weight.
    """
    key = (lattice.n, tuple(lam))
    hit = _euler_cache.get(key)
    if hit is not None:
        return hit
    lam = lattice.check(lam)
    e = lattice.to_eps(lattice.add(lam, lattice.rho))
    num = prod(e[i] - e[j] for i in range(lattice.n) for j in range(i + 1, lattice.n))
    if num == 0:
        _euler_cache[key] = 0
        return 0
    assert num % lattice._weyl_denominator == 0
    val = num // lattice._weyl_denominator
    _euler_cache[key] = val
    return val
