"""Ordered block collections, Euler pairings, mutations, and dual bases.

Everything here is decategorified: objects are carried as formal K-classes
(plus a solver expression when cohomology needs to be computed), the Gram
matrix is the Euler pairing in collection order, mutations act on classes
by the cone formula, and the right dual basis solves the biorthogonality
system exactly over the integers.  Hom-level semiorthogonality is checked
three-valued through the cohomology engine: certified zero, Euler-zero
with unknown support, or violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .kclass import classes_equal, kadd, keuler_pairing, kline, krank, kscale
from .sheaves import Catalog, Expr, expr_dual, expr_tensor
from .solver import solve_presented


@dataclass(frozen=True)
class CollObj:
    """One collection member: display name, K-class, optional solver term."""

    name: str
    kclass: tuple  # canonical: sorted tuple of (weight, coeff)
    expr: Expr | None = None

    @staticmethod
    def make(name, kclass: dict, expr=None):
        return CollObj(name, tuple(sorted(kclass.items())), expr)

    def cls(self) -> dict:
        return dict(self.kclass)


@dataclass
class ExcCollection:
    """Ordered blocks of objects; block_degrees[i] is the block's |C_{-d}|-label."""

    catalog: Catalog
    blocks: list  # list of list of CollObj
    block_degrees: list  # int per block (cohomological degree of the block)
    label: str = ""

    def objects(self):
        return [obj for block in self.blocks for obj in block]

    def degrees(self):
        return [
            d for block, d in zip(self.blocks, self.block_degrees) for _ in block
        ]

    def size(self):
        return sum(len(b) for b in self.blocks)

    def check_block_orthogonality(self):
        """Within a block, the Euler pairing must vanish in both directions."""
        lat = self.catalog.lattice
        for block in self.blocks:
            for i, a in enumerate(block):
                for b in block[i + 1 :]:
                    if keuler_pairing(lat, a.cls(), b.cls()) != 0:
                        return False
                    if keuler_pairing(lat, b.cls(), a.cls()) != 0:
                        return False
        return True


def euler_pairing(catalog: Catalog, a, b) -> int:
    """chi(a, b) over the flag variety; accepts CollObj, Expr or K-class."""
    lat = catalog.lattice

    def to_class(x):
        if isinstance(x, CollObj):
            return x.cls()
        if isinstance(x, Expr):
            return catalog.expr_kclass(x)
        return x

    return keuler_pairing(lat, to_class(a), to_class(b))


def gram(catalog: Catalog, coll: ExcCollection) -> np.ndarray:
    """Euler pairing matrix chi(E_i, E_j) in flattened collection order."""
    objs = coll.objects()
    m = len(objs)
    G = np.zeros((m, m), dtype=object)
    classes = [o.cls() for o in objs]
    lat = catalog.lattice
    for i in range(m):
        for j in range(m):
            G[i, j] = keuler_pairing(lat, classes[i], classes[j])
    return G


def is_unitriangular(G: np.ndarray) -> bool:
    m = G.shape[0]
    for i in range(m):
        if G[i, i] != 1:
            return False
        for j in range(i):
            if G[i, j] != 0:
                return False
    return True


def _invert_unitriangular(G: np.ndarray) -> np.ndarray:
    """Exact inverse of an upper unitriangular integer matrix."""
    m = G.shape[0]
    inv = np.zeros((m, m), dtype=object)
    for i in range(m):
        inv[i, i] = 1
    for j in range(m):
        for i in range(j - 1, -1, -1):
            s = 0
            for k in range(i + 1, j + 1):
                s += G[i, k] * inv[k, j]
            inv[i, j] = -s
    return inv


class NotExceptionalError(ValueError):
    """The Gram matrix is not unitriangular in collection order."""


def right_dual_basis(catalog: Catalog, coll: ExcCollection):
    """Solve the biorthogonality system chi(F_j, E_i) = delta_ij exactly.

    Returns (duals, shifts): ``duals[j]`` is the K-class of F_j expanded in
    line classes, and ``shifts[j]`` the expected shift (the block degree).
    The classes come out integral because the Gram matrix is unitriangular.
    """
    G = gram(catalog, coll)
    if not is_unitriangular(G):
        raise NotExceptionalError("collection is not exceptional at K-level")
    inv = _invert_unitriangular(G)  # rows of G^{-1} give F_j over the E-basis
    objs = coll.objects()
    degrees = coll.degrees()
    duals = []
    for j in range(len(objs)):
        cls: dict = {}
        for k in range(len(objs)):
            c = inv[j, k]
            if c:
                cls = kadd(cls, objs[k].cls(), coeff=int(c))
        duals.append(cls)
    return duals, list(degrees)


def dual_coordinates(catalog: Catalog, coll: ExcCollection, duals, kcl: dict):
    """Coordinates of a K-class over the collection basis via the dual basis."""
    lat = catalog.lattice
    return [keuler_pairing(lat, f, kcl) for f in duals]


def mutate_block_left_k(coll: ExcCollection, i: int) -> ExcCollection:
    """Left-mutate block i through block i-1 at K-level, then swap (tau_i).

    Blocks are 0-indexed here; requires 1 <= i < number of blocks.  Mutated
    objects keep only a K-class (a catalog name is attached when the class
    matches a catalog entry on the nose).
    """
    if not 1 <= i < len(coll.blocks):
        raise IndexError("block index out of range")
    lat = coll.catalog.lattice
    through = coll.blocks[i - 1]
    mutated = []
    for obj in coll.blocks[i]:
        cls = obj.cls()
        for e in through:
            c = keuler_pairing(lat, e.cls(), cls)
            if c:
                cls = kadd(cls, e.cls(), coeff=-c)
        mutated.append(_named(coll.catalog, cls, obj, "Lmut(%s)" % obj.name))
    blocks = list(coll.blocks)
    degrees = list(coll.block_degrees)
    blocks[i - 1], blocks[i] = mutated, list(through)
    degrees[i - 1], degrees[i] = degrees[i], degrees[i - 1]
    return ExcCollection(coll.catalog, blocks, degrees, coll.label)


def mutate_block_right_k(coll: ExcCollection, i: int) -> ExcCollection:
    """Right-mutate block i through block i+1 at K-level, then swap."""
    if not 0 <= i < len(coll.blocks) - 1:
        raise IndexError("block index out of range")
    lat = coll.catalog.lattice
    through = coll.blocks[i + 1]
    mutated = []
    for obj in coll.blocks[i]:
        cls = obj.cls()
        for e in through:
            c = keuler_pairing(lat, cls, e.cls())
            if c:
                cls = kadd(cls, e.cls(), coeff=-c)
        mutated.append(_named(coll.catalog, cls, obj, "Rmut(%s)" % obj.name))
    blocks = list(coll.blocks)
    degrees = list(coll.block_degrees)
    blocks[i], blocks[i + 1] = list(through), mutated
    degrees[i], degrees[i + 1] = degrees[i + 1], degrees[i]
    return ExcCollection(coll.catalog, blocks, degrees, coll.label)


def _named(catalog: Catalog, cls: dict, original: CollObj, fallback: str) -> CollObj:
    if cls == original.cls():
        return original  # completely orthogonal: a pure swap
    neg = kscale(-1, cls)
    for name in catalog.names():
        entry = catalog[name]
        if entry.kclass == cls:
            return CollObj.make(name, cls, entry.as_expr(catalog.lattice))
        if entry.kclass == neg:
            # the literal cone formula lands on the shifted copy
            return CollObj.make(name, cls)
    return CollObj.make(fallback, cls)


def classes_span_matrix(coll: ExcCollection) -> np.ndarray:
    """Integer matrix of object classes over the union of their line weights."""
    objs = coll.objects()
    weights = sorted({w for o in objs for w, _ in o.kclass})
    index = {w: i for i, w in enumerate(weights)}
    M = np.zeros((len(objs), len(weights)), dtype=object)
    for r, o in enumerate(objs):
        for w, c in o.kclass:
            M[r, index[w]] = c
    return M


def hermite_normal_form(M: np.ndarray) -> np.ndarray:
    """Row-style Hermite normal form over the integers (lattice invariant)."""
    A = M.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        # clear below
        while True:
            done = True
            for i in range(r + 1, rows):
                if A[i, c] != 0:
                    done = False
                    q = A[i, c] // A[r, c]
                    A[i] = A[i] - q * A[r]
                    if A[i, c] != 0:
                        A[[r, i]] = A[[i, r]]
            if done:
                break
        if A[r, c] < 0:
            A[r] = -A[r]
        for i in range(r):
            q = A[i, c] // A[r, c]
            A[i] = A[i] - q * A[r]
        r += 1
        if r == rows:
            break
    return A[~np.array([all(x == 0 for x in row) for row in A])]


def same_span(coll_a: ExcCollection, coll_b: ExcCollection) -> bool:
    """Do two collections span the same lattice of K-classes?"""
    objs = coll_a.objects() + coll_b.objects()
    weights = sorted({w for o in objs for w, _ in o.kclass})
    index = {w: i for i, w in enumerate(weights)}

    def matrix(coll):
        M = np.zeros((len(coll.objects()), len(weights)), dtype=object)
        for r, o in enumerate(coll.objects()):
            for w, c in o.kclass:
                M[r, index[w]] = c
        return M

    ha = hermite_normal_form(matrix(coll_a))
    hb = hermite_normal_form(matrix(coll_b))
    return ha.shape == hb.shape and bool((ha == hb).all())


@dataclass
class PairCheck:
    later: str
    earlier: str
    status: str  # "verified-zero" | "euler-zero" | "violation"
    support: tuple
    euler: int


@dataclass
class OrthogonalityReport:
    variety: str
    p: int
    pairs: list = field(default_factory=list)
    conforming: bool = True  # p > 2 hypothesis flag

    @property
    def violations(self):
        return [q for q in self.pairs if q.status == "violation"]

    @property
    def unknown(self):
        return [q for q in self.pairs if q.status == "euler-zero"]

    def to_json_dict(self):
        return {
            "variety": self.variety,
            "p": str(self.p),
            "paper_hypothesis_ok": self.conforming,
            "pairs": [
                {
                    "later": q.later,
                    "earlier": q.earlier,
                    "status": q.status,
                    "support": [str(d) for d in sorted(q.support)],
                    "euler": str(q.euler),
                }
                for q in self.pairs
            ],
            "counts": {
                "verified_zero": str(
                    sum(1 for q in self.pairs if q.status == "verified-zero")
                ),
                "euler_zero": str(len(self.unknown)),
                "violation": str(len(self.violations)),
            },
        }

    def render(self):
        lines = [
            "orthogonality report (%s, p=%d): %d pairs, %d verified, %d euler-zero, %d violations"
            % (
                self.variety,
                self.p,
                len(self.pairs),
                sum(1 for q in self.pairs if q.status == "verified-zero"),
                len(self.unknown),
                len(self.violations),
            )
        ]
        for q in self.pairs:
            if q.status != "verified-zero":
                lines.append(
                    "  [%s] Hom(%s, %s) support=%s euler=%d"
                    % (q.status, q.later, q.earlier, sorted(q.support), q.euler)
                )
        return "\n".join(lines)


def _hom_pair_state(catalog, later: CollObj, earlier: CollObj, p: int,
                    extra_chains=None):
    expr = expr_tensor(expr_dual(later.expr), earlier.expr)
    state, _ = solve_presented(catalog, expr, p, extra_chains=extra_chains)
    return state


def verify_semiorthogonality(
    catalog: Catalog, coll: ExcCollection, p: int, variety="", jobs: int = 1,
    extra_chains=None,
) -> OrthogonalityReport:
    """Check Hom-vanishing for every ordered (later, earlier) pair.

    Within-block pairs are required to vanish in both directions; cross-
    block pairs only from the later block to the earlier one.  Each pair
    gets a three-valued status.  Pair checks are pure and independent, so
    ``jobs > 1`` fans them out over a thread pool; the report is assembled
    in pair order either way.
    """
    report = OrthogonalityReport(variety=variety, p=p, conforming=p > 2)
    blocks = coll.blocks
    pairs = []
    for bi in range(len(blocks)):
        for oi, a in enumerate(blocks[bi]):
            for b in blocks[bi][oi + 1 :]:
                pairs.append((a, b))
                pairs.append((b, a))
        for bj in range(bi + 1, len(blocks)):
            for b in blocks[bj]:
                for a in blocks[bi]:
                    pairs.append((b, a))  # later block object first

    def check(pair):
        later, earlier = pair
        try:
            state = _hom_pair_state(catalog, later, earlier, p,
                                    extra_chains=extra_chains)
        except Exception:
            state = _hom_pair_state(catalog, later, earlier, p)
        if state.acyclic:
            status = "verified-zero"
        elif state.determined:
            status = "violation"
        elif state.euler == 0:
            status = "euler-zero"
        else:
            status = "violation"
        return PairCheck(
            later=later.name,
            earlier=earlier.name,
            status=status,
            support=tuple(sorted(state.support)),
            euler=state.euler,
        )

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            report.pairs = list(pool.map(check, pairs))
    else:
        report.pairs = [check(pair) for pair in pairs]
    return report
