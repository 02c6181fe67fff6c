"""Formal bundle expressions on the flag variety and the named catalog.

A :class:`BundleExpr` is a named bundle with a formal K-class and one or
more exact presentations whose leaves are line bundles or other named
bundles.  The catalog for the incidence varieties contains:

* ``syz{k}_{a}_{b}`` (a+b=k): iterated evaluation-kernel bundles over the
  line-bundle blocks; for pure powers (a=k or b=k) these are the twisted
  cotangent pullbacks with their Koszul presentations, and every one also
  carries the kernel-chain presentation built by the same recursion.
* ``tautquot``: the middle tautological quotient (hyperplane modulo line),
  with both its defining sequence and its line-bundle filtration.
* ``wedge{i}quot``: exterior powers of the quotient, presented by wedge
  filtrations of the line pieces.
* ``ext4`` / ``ext7_1`` / ``ext7_4``: the rank-4 and rank-7 extension
  bundles appearing among decomposition summand duals (stored as their
  defining short exact sequences; non-splitness recorded, not verified).

Everything is dimension-exact; multiplicity modules enter only as integer
dimension factors on leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .kclass import (
    classes_equal,
    kadd,
    kdual,
    keuler_pairing,
    kfrobenius,
    kline,
    krank,
    kscale,
    ktensor,
)
from .rootsys import TypeALattice, Weight


# ---------------------------------------------------------------------------
# solver-facing tensor expressions


@dataclass(frozen=True, order=True)
class Factor:
    """One tensor factor: F^{frob} of (catalog object or its dual), twisted."""

    base: str
    twist: tuple
    dual: bool = False
    frob: bool = False


@dataclass(frozen=True)
class Expr:
    """Canonical tensor expression: sorted named factors times one line twist."""

    refs: tuple
    line: tuple

    def is_line(self) -> bool:
        return not self.refs

    def describe(self) -> str:
        parts = []
        for f in self.refs:
            s = f.base
            if f.dual:
                s = "dual(%s)" % s
            if f.frob:
                s = "F*(%s)" % s
            if any(f.twist):
                s += "*L%s" % (list(f.twist),)
            parts.append(s)
        if any(self.line):
            parts.append("L%s" % (list(self.line),))
        elif not parts:
            parts.append("O")
        return " @ ".join(parts)


def line_expr(w) -> Expr:
    return Expr(refs=(), line=tuple(w))


def ref_expr(name: str, rank: int, twist=None, dual=False, frob=False) -> Expr:
    tw = tuple(twist) if twist is not None else (0,) * rank
    return Expr(refs=(Factor(name, tw, dual, frob),), line=(0,) * rank)


def expr_tensor(a: Expr, b: Expr) -> Expr:
    return Expr(
        refs=tuple(sorted(a.refs + b.refs)),
        line=tuple(x + y for x, y in zip(a.line, b.line)),
    )


def expr_twist(a: Expr, w) -> Expr:
    return Expr(refs=a.refs, line=tuple(x + y for x, y in zip(a.line, w)))


def expr_dual(a: Expr) -> Expr:
    refs = tuple(
        sorted(
            Factor(f.base, tuple(-t for t in f.twist), not f.dual, f.frob)
            for f in a.refs
        )
    )
    return Expr(refs=refs, line=tuple(-x for x in a.line))


def expr_frobenius(a: Expr, p: int) -> Expr:
    for f in a.refs:
        if f.frob:
            raise ValueError("double Frobenius twist is not supported")
    refs = tuple(
        sorted(Factor(f.base, tuple(p * t for t in f.twist), f.dual, True) for f in a.refs)
    )
    return Expr(refs=refs, line=tuple(p * x for x in a.line))


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Leaf:
    """Summand of a presentation term: coef copies of base^(dual) @ L_twist."""

    coef: int
    base: str | None
    twist: tuple
    dual: bool = False


@dataclass(frozen=True)
class Chain:
    """Exact presentation 0 -> T_0 -> ... -> T_m -> 0.

    Terms are tuples of :class:`Leaf`; the term at ``self_index`` is the
    presented object itself and is stored as the empty tuple.  A
    ``filtration`` chain instead lists graded pieces of a filtration.
    """

    kind: str  # "exact" | "filtration"
    terms: tuple
    self_index: int = -1
    label: str = ""


def leaf_line(coef: int, w) -> Leaf:
    return Leaf(coef, None, tuple(w))


def leaf_ref(coef: int, name: str, twist, dual=False) -> Leaf:
    return Leaf(coef, name, tuple(twist), dual)


@dataclass
class BundleExpr:
    """Named formal bundle: K-class, rank, and its exact presentations."""

    name: str
    kclass: dict
    rank: int
    chains: list
    note: str = ""
    nonsplit: bool = False

    def as_expr(self, lattice) -> Expr:
        return ref_expr(self.name, lattice.rank)


class Catalog:
    """Immutable-after-build dictionary of named bundles for one lattice."""

    def __init__(self, lattice: TypeALattice):
        self.lattice = lattice
        self.entries: dict = {}

    def __contains__(self, name):
        return name in self.entries

    def __getitem__(self, name) -> BundleExpr:
        return self.entries[name]

    def names(self):
        return sorted(self.entries)

    def add(self, entry: BundleExpr, check=True):
        if entry.name in self.entries:
            raise ValueError("duplicate catalog entry %r" % entry.name)
        if check:
            self.validate(entry)
        self.entries[entry.name] = entry

    def leaf_kclass(self, leaf: Leaf) -> dict:
        if leaf.base is None:
            k = kline(leaf.twist)
        else:
            k = self.entries[leaf.base].kclass
            if leaf.dual:
                k = kdual(k)
            k = ktensor(k, kline(leaf.twist))
        return kscale(leaf.coef, k)

    def term_kclass(self, term) -> dict:
        out = {}
        for leaf in term:
            out = kadd(out, self.leaf_kclass(leaf))
        return out

    def chain_defect(self, chain: Chain, self_class: dict) -> dict:
        """Alternating K-class sum of an exact chain (zero when consistent)."""
        total = {}
        for i, term in enumerate(chain.terms):
            part = self_class if i == chain.self_index else self.term_kclass(term)
            total = kadd(total, part, coeff=(-1) ** i)
        return total

    def expr_kclass(self, e: Expr, p: int | None = None) -> dict:
        out = kline(e.line)
        for f in e.refs:
            k = self.entries[f.base].kclass
            if f.dual:
                k = kdual(k)
            if f.frob:
                if p is None:
                    raise ValueError("expr has F*; the characteristic is required")
                k = kfrobenius(k, p)
            k = ktensor(k, kline(f.twist))
            out = ktensor(out, k)
        return out

    def expr_rank(self, e: Expr) -> int:
        r = 1
        for f in e.refs:
            r *= self.entries[f.base].rank
        return r

    def validate(self, entry: BundleExpr):
        assert krank(entry.kclass) == entry.rank, entry.name
        for chain in entry.chains:
            self.validate_chain(entry.name, entry.kclass, chain)

    def validate_chain(self, name: str, kcl: dict, chain: Chain):
        if chain.kind == "filtration":
            total = {}
            for term in chain.terms:
                total = kadd(total, self.term_kclass(term))
            if total != kcl and not classes_equal(self.lattice, total, kcl):
                raise AssertionError(
                    "filtration class mismatch for %s (%s)" % (name, chain.label)
                )
        else:
            defect = self.chain_defect(chain, kcl)
            if defect and not classes_equal(self.lattice, defect, {}):
                raise AssertionError(
                    "presentation fails K-class check for %s (%s)"
                    % (name, chain.label)
                )

    def to_json_dict(self) -> dict:
        def leaf_json(leaf):
            return {
                "coef": str(leaf.coef),
                "base": leaf.base if leaf.base else "line",
                "twist": [str(x) for x in leaf.twist],
                "dual": leaf.dual,
            }

        out = {"n": str(self.lattice.n), "entries": []}
        for name in self.names():
            e = self.entries[name]
            out["entries"].append(
                {
                    "name": name,
                    "rank": str(e.rank),
                    "kclass": [
                        {"weight": [str(x) for x in w], "coef": str(c)}
                        for w, c in sorted(e.kclass.items())
                    ],
                    "note": e.note,
                    "nonsplit": e.nonsplit,
                    "presentations": [
                        {
                            "kind": ch.kind,
                            "label": ch.label,
                            "self_index": str(ch.self_index),
                            "terms": [
                                [leaf_json(l) for l in term] for term in ch.terms
                            ],
                        }
                        for ch in e.chains
                    ],
                }
            )
        return out


# ---------------------------------------------------------------------------
# construction helpers


def _omega(lattice, side: str) -> Weight:
    return lattice.fundamental(1 if side == "a" else lattice.rank)


def _eps_weight(lattice, j: int) -> Weight:
    """epsilon_j (1-based) in fundamental coordinates: omega_j - omega_{j-1}."""
    w = [0] * lattice.rank
    if j <= lattice.rank:
        w[j - 1] += 1
    if j - 1 >= 1:
        w[j - 2] -= 1
    return tuple(w)


def weight_height(lattice, w) -> int:
    """Linear functional strictly positive on positive roots (orders pieces)."""
    n = lattice.n
    return sum(c * (i + 1) * (n - i - 1) for i, c in enumerate(w))


def _sort_low_first(lattice, weights):
    return sorted(weights, key=lambda w: weight_height(lattice, w))


def psi1_pieces(lattice, side: str):
    """Line filtration of the evaluation kernel, sub-most (lowest) piece first."""
    n = lattice.n
    if side == "a":
        pieces = [_eps_weight(lattice, j) for j in range(2, n + 1)]
    else:
        pieces = [tuple(-x for x in _eps_weight(lattice, j)) for j in range(1, n)]
    return _sort_low_first(lattice, pieces)


def quot_pieces(lattice):
    """Line filtration of the middle tautological quotient, lowest piece first."""
    pieces = [tuple(-x for x in _eps_weight(lattice, j)) for j in range(2, lattice.n)]
    return _sort_low_first(lattice, pieces)


def wedge_filtration(pieces, k):
    """Graded pieces of the k-th wedge of a line-filtered bundle, low first."""
    sums = []
    for combo in combinations(pieces, k):
        sums.append(tuple(sum(xs) for xs in zip(*combo)))
    sums.sort(key=lambda w: sum(c * (i + 1) * (len(w) - i) for i, c in enumerate(w)))
    return tuple((leaf_line(1, w),) for w in sums)


def block_line_weights(lattice, j):
    """Weights a*omega_1 + b*omega_{n-1} with a+b = j, listed with a descending."""
    oa, ob = _omega(lattice, "a"), _omega(lattice, "b")
    return [
        tuple(a * x + (j - a) * y for x, y in zip(oa, ob)) for a in range(j, -1, -1)
    ]


def syz_name(a: int, b: int) -> str:
    return "syz%d_%d_%d" % (a + b, a, b)


def _add_pure_syzygies(cat: Catalog, side: str):
    lattice = cat.lattice
    n = lattice.n
    om = _omega(lattice, side)
    pieces = psi1_pieces(lattice, side)
    for k in range(1, n - 1):
        name = syz_name(k, 0) if side == "a" else syz_name(0, k)
        kcl = {}
        terms = [()]  # self at index 0
        for j in range(0, k + 1):
            coef = comb(n, k - j)
            w = tuple(j * x for x in om)
            terms.append((leaf_line(coef, w),))
            kcl = kadd(kcl, kscale(coef * (-1) ** j, kline(w)))
        koszul = Chain("exact", tuple(terms), self_index=0, label="koszul")
        filt = Chain(
            "filtration", wedge_filtration(pieces, k), label="wedge filtration"
        )
        cat.add(
            BundleExpr(
                name=name,
                kclass=kcl,
                rank=krank(kcl),
                chains=[koszul, filt],
                note="order-%d evaluation kernel for weight %s" % (k, list(om)),
            )
        )
    # pairing route: syz_{n-1-k} = dual(syz_k) @ L_{-omega}
    for k in range(1, n - 1):
        kk = n - 1 - k
        if not 1 <= kk <= n - 2:
            continue
        tname = syz_name(kk, 0) if side == "a" else syz_name(0, kk)
        terms = []
        for j in range(k, -1, -1):
            coef = comb(n, k - j)
            w = tuple(-(j + 1) * x for x in om)
            terms.append((leaf_line(coef, w),))
        terms.append(())  # self last
        chain = Chain(
            "exact", tuple(terms), self_index=k + 1, label="dual pairing route"
        )
        entry = cat.entries[tname]
        defect = cat.chain_defect(chain, entry.kclass)
        if not defect or classes_equal(lattice, defect, {}):
            entry.chains.append(chain)
        else:
            raise AssertionError("dual pairing route failed for %s" % tname)


def _add_mixed_syzygies(cat: Catalog):
    """Iterated evaluation-kernel chains for the mixed two-sided kernels."""
    lattice = cat.lattice
    n = lattice.n
    for k in range(2, n - 1):
        for a in range(1, k):
            b = k - a
            target_w = tuple(
                a * x + b * y
                for x, y in zip(_omega(lattice, "a"), _omega(lattice, "b"))
            )
            # W_k = L_{target}; W_j = ker( sum_{mu in block j} L_mu^{m_mu} -> W_{j+1} )
            prev_class = kline(target_w)
            prev_leaf = leaf_line(1, target_w)
            for j in range(k - 1, -1, -1):
                mids = []
                for mu in block_line_weights(lattice, j):
                    m = keuler_pairing(lattice, kline(mu), prev_class)
                    if m < 0:
                        raise AssertionError(
                            "negative multiplicity in kernel chain for %s"
                            % syz_name(a, b)
                        )
                    if m:
                        mids.append(leaf_line(m, mu))
                mid_class = cat.term_kclass(tuple(mids))
                new_class = kadd(mid_class, prev_class, coeff=-1)
                stage_name = (
                    syz_name(a, b) if j == 0 else "%s_stage%d" % (syz_name(a, b), j)
                )
                chain = Chain(
                    "exact",
                    terms=((), tuple(mids), (prev_leaf,)),
                    self_index=0,
                    label="evaluation kernel chain (block %d)" % j,
                )
                entry = BundleExpr(
                    name=stage_name,
                    kclass=new_class,
                    rank=krank(new_class),
                    chains=[chain],
                    note="stage-%d evaluation kernel over the degree-%d blocks"
                    % (j, k),
                )
                cat.add(entry)
                prev_class = new_class
                prev_leaf = leaf_ref(1, stage_name, lattice.zero())
            # companion presentation for the (1,1) kernel, via the pure kernels
            if (a, b) == (1, 1):
                dim_adj = n * n - 1
                chain2 = Chain(
                    "exact",
                    terms=(
                        (),
                        (
                            leaf_ref(n, syz_name(1, 0), lattice.zero()),
                            leaf_ref(n, syz_name(0, 1), lattice.zero()),
                        ),
                        (leaf_line(dim_adj, lattice.zero()),),
                        (leaf_line(1, target_w),),
                    ),
                    self_index=0,
                    label="pure-kernel resolution",
                )
                entry = cat.entries[syz_name(1, 1)]
                cat.validate_chain(entry.name, entry.kclass, chain2)
                entry.chains.append(chain2)


def _add_quotients(cat: Catalog):
    lattice = cat.lattice
    n = lattice.n
    pieces = quot_pieces(lattice)
    kcl = {}
    for w in pieces:
        kcl = kadd(kcl, kline(w))
    defseq = Chain(
        "exact",
        terms=(
            (leaf_line(1, tuple(-x for x in _omega(lattice, "a"))),),
            (leaf_ref(1, syz_name(0, 1), lattice.zero()),),
            (),
        ),
        self_index=2,
        label="tautological quotient sequence",
    )
    filt = Chain(
        "filtration",
        tuple((leaf_line(1, w),) for w in pieces),
        label="line filtration",
    )
    cat.add(
        BundleExpr(
            name="tautquot",
            kclass=kcl,
            rank=n - 2,
            chains=[defseq, filt],
            note="middle tautological quotient (hyperplane modulo line)",
        )
    )
    det = tuple(
        x - y for x, y in zip(_omega(lattice, "a"), _omega(lattice, "b"))
    )
    for i in range(2, n - 2):
        wname = "wedge%dquot" % i
        wpieces = wedge_filtration(pieces, i)
        kclw = {}
        for term in wpieces:
            kclw = kadd(kclw, cat.term_kclass(term))
        chains = [Chain("filtration", wpieces, label="wedge filtration")]
        if i == n - 3:
            # top-but-one wedge = dual(quot) @ det(quot)
            chains.append(
                Chain(
                    "exact",
                    terms=(
                        (),
                        (leaf_ref(1, syz_name(0, 1), det, dual=True),),
                        (
                            leaf_line(
                                1,
                                tuple(
                                    2 * x - y
                                    for x, y in zip(
                                        _omega(lattice, "a"), _omega(lattice, "b")
                                    )
                                ),
                            ),
                        ),
                    ),
                    self_index=0,
                    label="dual quotient route",
                )
            )
        cat.add(
            BundleExpr(
                name=wname,
                kclass=kclw,
                rank=krank(kclw),
                chains=chains,
                note="wedge power %d of the tautological quotient" % i,
            )
        )


def _add_extensions(cat: Catalog):
    lattice = cat.lattice
    n = lattice.n
    if n == 4:
        # 0 -> L_{2w3} -> ext4 -> syz1_1_0 @ L_{2w1+w3} -> 0
        kcl = kadd(
            kline((0, 0, 2)),
            ktensor(cat.entries["syz1_1_0"].kclass, kline((2, 0, 1))),
        )
        cat.add(
            BundleExpr(
                name="ext4",
                kclass=kcl,
                rank=4,
                chains=[
                    Chain(
                        "exact",
                        terms=(
                            (leaf_line(1, (0, 0, 2)),),
                            (),
                            (leaf_ref(1, "syz1_1_0", (2, 0, 1)),),
                        ),
                        self_index=1,
                        label="defining extension",
                    )
                ],
                note="rank-4 extension bundle (unique non-split extension)",
                nonsplit=True,
            )
        )
    if n == 5:
        for tag, syz, top in (
            ("ext7_1", "syz2_2_0", (3, 0, 0, 1)),
            ("ext7_4", "syz2_0_2", (1, 0, 0, 3)),
        ):
            sub = ktensor(cat.entries[syz].kclass, kline((2, 0, 0, 2)))
            kcl = kadd(sub, kline(top))
            cat.add(
                BundleExpr(
                    name=tag,
                    kclass=kcl,
                    rank=7,
                    chains=[
                        Chain(
                            "exact",
                            terms=(
                                (leaf_ref(1, syz, (2, 0, 0, 2)),),
                                (),
                                (leaf_line(1, top),),
                            ),
                            self_index=1,
                            label="defining extension",
                        )
                    ],
                    note="rank-7 extension bundle (unique non-split extension)",
                    nonsplit=True,
                )
            )


def build_catalog(n: int) -> Catalog:
    """Construct the named-bundle catalog for SL(n) (n >= 4)."""
    if n < 4:
        raise ValueError("the catalog needs n >= 4")
    lattice = TypeALattice(n)
    cat = Catalog(lattice)
    _add_pure_syzygies(cat, "a")
    _add_pure_syzygies(cat, "b")
    _add_mixed_syzygies(cat)
    _add_quotients(cat)
    _add_extensions(cat)
    return cat
