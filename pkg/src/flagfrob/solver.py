"""Fixpoint constraint solver for cohomology of presented bundles.

Every object is a canonical tensor expression over catalog names and one
line twist.  Expressions with named factors are expanded through the
catalog presentations (every factor, every presentation); exact chains
are split into short exact sequences with auxiliary kernel objects, and
the solver propagates support windows, per-degree dimension bounds and
exact Euler characteristics around the long-exact-sequence constraints
until nothing changes.  Support pinned to one degree plus the exact Euler
characteristic promotes to a fully determined answer; information from
different presentations of the same object is intersected automatically
because they constrain the same node.

Serre duality is applied as a re-rooting fallback: a still-undetermined
node is paired with its twisted dual and the two support windows reflect
into each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coh import CohState, coh_line_charp, determined_state
from .kclass import keuler
from .sheaves import (
    Catalog,
    Chain,
    Expr,
    Factor,
    expr_dual,
    expr_tensor,
    expr_twist,
    line_expr,
)

INF = None


class InconsistencyError(AssertionError):
    """A presentation contradicted exact Euler data (build-time signal)."""


def _ub_add(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def _ub_min(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


@dataclass
class NodeState:
    support: set
    chi: int | None = None
    ub: dict = field(default_factory=dict)  # degree -> int | INF
    dims: dict | None = None  # exact, degree -> dim

    @property
    def determined(self):
        return self.dims is not None

    def as_cohstate(self) -> CohState:
        if self.determined:
            return determined_state(self.dims)
        return CohState(
            support=frozenset(self.support),
            euler=self.chi if self.chi is not None else 0,
            dims=None,
            bounds=dict(self.ub),
        )


@dataclass
class SolveCertificate:
    """Trace of a presented-object solve: chains used and leaf certificates."""

    n: int
    p: int
    target: str
    chains_used: list = field(default_factory=list)
    leaf_certs: dict = field(default_factory=dict)
    serre_pairs: list = field(default_factory=list)
    result: str = ""

    def render(self) -> str:
        lines = ["solve certificate: n=%d p=%d target=%s" % (self.n, self.p, self.target)]
        for node, label in self.chains_used:
            lines.append("  expand %s via [%s]" % (node, label))
        for pair in self.serre_pairs:
            lines.append("  serre-pair %s <-> %s" % pair)
        lines.append("  result: %s" % self.result)
        return "\n".join(lines)


class Solver:
    """One solving context: a catalog, a characteristic, optional extra chains."""

    MAX_DEPTH = 6

    def __init__(self, catalog: Catalog, p: int, extra_chains=None):
        self.catalog = catalog
        self.lattice = catalog.lattice
        self.p = p
        self.npos = len(self.lattice.positive_roots)
        self.extra_chains = dict(extra_chains or {})  # base name -> [Chain]
        self.states: dict = {}
        self.triangles: list = []
        self._node_tris: dict = {}  # node key -> set of triangle indices
        self._dirty: set = set()
        self._aux_counter = 0
        self._expanded: dict = {}  # expr -> depth it was expanded at
        self._serre_done: set = set()
        self.certificate = None

    # -- node management ----------------------------------------------------

    def _new_aux(self, note=""):
        self._aux_counter += 1
        key = ("aux", self._aux_counter, note)
        self.states[key] = NodeState(
            support=set(range(self.npos + 1)),
            chi=None,
            ub={d: INF for d in range(self.npos + 1)},
        )
        return key

    def node(self, expr: Expr, depth: int = 0):
        if expr in self.states:
            if expr.refs and depth < self._expanded.get(expr, self.MAX_DEPTH + 1):
                self._expand(expr, depth)
            return expr
        if expr.is_line():
            state, cert = coh_line_charp(self.lattice, expr.line, self.p)
            ns = NodeState(
                support=set(state.support),
                chi=state.euler,
                ub=dict(state.bounds) if state.bounds else {},
                dims=dict(state.dims) if state.dims is not None else None,
            )
            if ns.dims is None:
                ns.ub = {d: INF for d in ns.support}
            self.states[expr] = ns
            if self.certificate is not None:
                self.certificate.leaf_certs[expr.describe()] = cert
            return expr
        chi = keuler(self.lattice, self.catalog.expr_kclass(expr, self.p))
        self.states[expr] = NodeState(
            support=set(range(self.npos + 1)),
            chi=chi,
            ub={d: INF for d in range(self.npos + 1)},
        )
        self._expand(expr, depth)
        return expr

    # -- expansion ----------------------------------------------------------

    def _chains_for(self, base: str):
        chains = list(self.catalog[base].chains)
        chains.extend(self.extra_chains.get(base, ()))
        return chains

    def _expand(self, expr: Expr, depth: int = 0):
        if depth > self.MAX_DEPTH:
            return
        if self._expanded.get(expr, self.MAX_DEPTH + 1) <= depth:
            return
        self._expanded[expr] = depth
        for idx, f in enumerate(expr.refs):
            rest = Expr(
                refs=expr.refs[:idx] + expr.refs[idx + 1 :], line=expr.line
            )
            for chain in self._chains_for(f.base):
                self._instantiate(expr, rest, f, chain, depth)

    def _transform_leaf(self, leaf, f: Factor, rest: Expr):
        c, b, t, ld = leaf.coef, leaf.base, leaf.twist, leaf.dual
        if f.dual:
            t = tuple(-x for x in t)
            if b is not None:
                ld = not ld
        if f.frob:
            t = tuple(self.p * x for x in t)
        t = tuple(x + y for x, y in zip(t, f.twist))
        if b is None:
            return c, expr_twist(rest, t)
        sub = Expr(refs=(Factor(b, t, ld, f.frob),), line=(0,) * self.lattice.rank)
        return c, expr_tensor(rest, sub)

    def _instantiate(self, obj: Expr, rest: Expr, f: Factor, chain: Chain, depth: int = 0):
        if self.certificate is not None:
            self.certificate.chains_used.append(
                (obj.describe(), "%s of %s" % (chain.label or chain.kind, f.base))
            )
        if chain.kind == "filtration":
            pieces = []
            for term in chain.terms:
                piece = tuple(
                    self._transform_leaf(leaf, f, rest) for leaf in term if leaf.coef
                )
                pieces.append(piece)
            if f.dual:
                pieces.reverse()  # dualizing flips sub/quotient order
            self._add_filtration(obj, pieces, depth)
            return
        terms = []
        for i, term in enumerate(chain.terms):
            if i == chain.self_index:
                terms.append(((1, self.node(obj, depth)),))
            else:
                out = []
                for leaf in term:
                    if not leaf.coef:
                        continue
                    c, sub = self._transform_leaf(leaf, f, rest)
                    out.append((c, self.node(sub, depth + 1)))
                terms.append(tuple(out))
        if f.dual:
            terms.reverse()
        self._add_exact(terms)

    def _register(self, tri):
        idx = len(self.triangles)
        self.triangles.append(tri)
        for term in tri:
            for _, key in term:
                self._node_tris.setdefault(key, set()).add(idx)
        self._dirty.add(idx)

    def _add_exact(self, terms):
        m = len(terms) - 1
        if m < 1:
            return
        if m == 1:
            self._register((terms[0], terms[1], ()))
            return
        left = terms[0]
        for i in range(1, m):
            right = terms[m] if i == m - 1 else ((1, self._new_aux("ker")),)
            self._register((left, terms[i], right))
            left = right

    def _add_filtration(self, obj: Expr, pieces, depth: int = 0):
        pieces = [
            tuple((c, self.node(e, depth + 1)) for c, e in piece) for piece in pieces
        ]
        if not pieces:
            return
        if len(pieces) == 1:
            self._register((pieces[0], ((1, self.node(obj, depth)),), ()))
            return
        sub = pieces[0]
        for i in range(1, len(pieces)):
            if i == len(pieces) - 1:
                whole = ((1, self.node(obj, depth)),)
            else:
                whole = ((1, self._new_aux("filt")),)
            self._register((sub, whole, pieces[i]))
            sub = whole

    # -- term state ---------------------------------------------------------

    def _term_view(self, term):
        support = set()
        chi = 0
        chi_ok = True
        dims: dict | None = {}
        ub: dict = {}
        for c, key in term:
            st = self.states[key]
            support |= st.support
            if st.chi is None:
                chi_ok = False
            elif chi_ok:
                chi += c * st.chi
            if st.dims is None:
                dims = None
            elif dims is not None:
                for d, v in st.dims.items():
                    dims[d] = dims.get(d, 0) + c * v
            for d in st.support:
                b = st.ub.get(d, INF)
                cur = ub.get(d, 0)
                ub[d] = INF if (b is INF or cur is INF) else cur + c * b
        if dims is not None:
            support = {d for d, v in dims.items() if v}
            ub = {d: v for d, v in dims.items() if v}
            chi = sum((-1) ** d * v for d, v in dims.items())
            chi_ok = True
        return support, (chi if chi_ok else None), ub, dims

    # -- propagation --------------------------------------------------------

    def _update_node(self, term, support=None, chi=None, ub=None, dims=None):
        """Intersect new information into a single-node term; report change."""
        if len(term) != 1 or term[0][0] != 1:
            return False
        key = term[0][1]
        st = self.states[key]
        changed = False
        if support is not None:
            new = st.support & support
            if new != st.support:
                st.support = new
                changed = True
        if chi is not None and st.chi is None:
            st.chi = chi
            changed = True
        elif chi is not None and st.chi is not None and st.chi != chi:
            raise InconsistencyError("Euler characteristic conflict")
        if ub is not None:
            for d, b in ub.items():
                if d in st.support:
                    if st.dims is not None:
                        if b is not INF and b < st.dims.get(d, 0):
                            raise InconsistencyError(
                                "certified bound %r below exact dimension" % b
                            )
                        continue
                    cur = st.ub.get(d, INF)
                    nb = _ub_min(cur, b)
                    if nb != cur:
                        st.ub[d] = nb
                        changed = True
        if dims is not None and st.dims is None:
            st.dims = {d: v for d, v in dims.items() if v}
            changed = True
        if self._normalize(st):
            changed = True
        if changed:
            for idx in self._node_tris.get(key, ()):
                self._dirty.add(idx)
        return changed

    def _normalize(self, st: NodeState) -> bool:
        changed = False
        if st.dims is not None:
            supp = set(st.dims)
            if st.support != supp:
                st.support = supp
                changed = True
            st.ub = dict(st.dims)
            chi = sum((-1) ** d * v for d, v in st.dims.items())
            if st.chi is None:
                st.chi = chi
                changed = True
            elif st.chi != chi:
                raise InconsistencyError("determined dims contradict Euler value")
            return changed
        dead = {d for d in st.support if st.ub.get(d, INF) == 0}
        if dead:
            st.support -= dead
            changed = True
        if st.chi is not None:
            if not st.support:
                if st.chi != 0:
                    raise InconsistencyError("empty support with nonzero Euler value")
                st.dims = {}
                return True
            if len(st.support) == 1:
                d = next(iter(st.support))
                v = (-1) ** d * st.chi
                if v < 0:
                    raise InconsistencyError("single-degree support with wrong sign")
                b = st.ub.get(d, INF)
                if b is not INF and v > b:
                    raise InconsistencyError("dimension exceeds certified bound")
                st.dims = {d: v} if v else {}
                return True
        return changed

    def _shift(self, support, k):
        return {d + k for d in support if 0 <= d + k <= self.npos}

    def _propagate(self, tri) -> bool:
        a, b, c = tri
        sa, chia, uba, dimsa = self._term_view(a) if a else (set(), 0, {}, {})
        sb, chib, ubb, dimsb = self._term_view(b) if b else (set(), 0, {}, {})
        sc, chic, ubc, dimsc = self._term_view(c) if c else (set(), 0, {}, {})
        changed = False
        # support constraints
        changed |= self._update_node(a, support=sb | self._shift(sc, 1))
        changed |= self._update_node(b, support=sa | sc)
        changed |= self._update_node(c, support=sb | self._shift(sa, -1))
        # Euler additivity chi(B) = chi(A) + chi(C)
        if chia is not None and chic is not None:
            changed |= self._update_node(b, chi=chia + chic)
        if chib is not None and chic is not None:
            changed |= self._update_node(a, chi=chib - chic)
        if chia is not None and chib is not None:
            changed |= self._update_node(c, chi=chib - chia)
        # per-degree upper bounds

        def bound(ub, supp, d):
            if d < 0 or d > self.npos or d not in supp:
                return 0
            return ub.get(d, INF)

        window = range(self.npos + 1)
        ub_for_a, ub_for_b, ub_for_c = {}, {}, {}
        for d in window:
            ub_for_a[d] = _ub_add(bound(ubb, sb, d), bound(ubc, sc, d - 1))
            ub_for_b[d] = _ub_add(bound(uba, sa, d), bound(ubc, sc, d))
            ub_for_c[d] = _ub_add(bound(ubb, sb, d), bound(uba, sa, d + 1))
        changed |= self._update_node(a, ub=ub_for_a)
        changed |= self._update_node(b, ub=ub_for_b)
        changed |= self._update_node(c, ub=ub_for_c)
        # exact splits when the long exact sequence has no interaction
        if dimsa is not None and dimsc is not None:
            if not (set(d for d, v in dimsc.items() if v)
                    & self._shift({d for d, v in dimsa.items() if v}, -1)):
                dims = dict(dimsa)
                for d, v in dimsc.items():
                    dims[d] = dims.get(d, 0) + v
                changed |= self._update_node(b, dims=dims)
        if dimsb is not None and dimsc is not None:
            if not ({d for d, v in dimsb.items() if v}
                    & {d for d, v in dimsc.items() if v}):
                dims = dict(dimsb)
                for d, v in dimsc.items():
                    dims[d + 1] = dims.get(d + 1, 0) + v
                changed |= self._update_node(a, dims=dims)
        if dimsa is not None and dimsb is not None:
            if not ({d for d, v in dimsa.items() if v}
                    & {d for d, v in dimsb.items() if v}):
                dims = dict(dimsb)
                for d, v in dimsa.items():
                    if d - 1 >= 0:
                        dims[d - 1] = dims.get(d - 1, 0) + v
                changed |= self._update_node(c, dims=dims)
        return changed

    def _fixpoint(self):
        while self._dirty:
            idx = self._dirty.pop()
            self._propagate(self.triangles[idx])

    # -- Serre pairing ------------------------------------------------------

    def _serre_partner(self, expr: Expr) -> Expr:
        omega = tuple(-2 * x for x in self.lattice.rho)
        return expr_twist(expr_dual(expr), omega)

    def _apply_serre(self, expr: Expr) -> bool:
        if expr in self._serre_done:
            return False
        self._serre_done.add(expr)
        partner = self._serre_partner(expr)
        if partner == expr:
            return False
        self.node(partner)
        self._serre_done.add(partner)
        self._fixpoint()
        ps = self.states[partner]
        st = self.states[expr]
        if self.certificate is not None:
            self.certificate.serre_pairs.append((expr.describe(), partner.describe()))
        changed = False
        reflected = {self.npos - d for d in ps.support}
        new = st.support & reflected
        if new != st.support:
            st.support = new
            changed = True
        if ps.dims is not None and st.dims is None:
            st.dims = {self.npos - d: v for d, v in ps.dims.items()}
            changed = True
        else:
            for d, bnd in ps.ub.items():
                rd = self.npos - d
                if rd in st.support:
                    nb = _ub_min(st.ub.get(rd, INF), bnd)
                    if nb != st.ub.get(rd, INF):
                        st.ub[rd] = nb
                        changed = True
        if self._normalize(st):
            changed = True
        return changed

    # -- public entry -------------------------------------------------------

    def solve(self, expr: Expr, use_serre=True) -> NodeState:
        self.node(expr)
        self._fixpoint()
        st = self.states[expr]
        if use_serre and not st.determined:
            candidates = [
                k
                for k in list(self.states)
                if isinstance(k, Expr)
                and k.refs
                and not self.states[k].determined
            ]
            progressed = True
            while progressed and not st.determined:
                progressed = False
                for k in candidates:
                    if not self.states[k].determined and self._apply_serre(k):
                        progressed = True
                if progressed:
                    self._fixpoint()
        return self.states[expr]


_solution_cache: dict = {}


def solve_presented(
    catalog: Catalog,
    expr: Expr,
    p: int,
    extra_chains=None,
    with_certificate=False,
    use_serre=True,
):
    """Certified cohomology of a presented object in characteristic p.

    Returns (CohState, SolveCertificate | None).  Results for determined
    objects are cached per (n, p, expr) across calls; the cache behaves as
    an idempotent concurrent map.
    """
    key = (catalog.lattice.n, p, expr, bool(extra_chains))
    if not with_certificate and not extra_chains:
        hit = _solution_cache.get(key)
        if hit is not None:
            return hit, None
    solver = Solver(catalog, p, extra_chains=extra_chains)
    cert = None
    if with_certificate:
        cert = SolveCertificate(catalog.lattice.n, p, expr.describe())
        solver.certificate = cert
    state = solver.solve(expr, use_serre=use_serre)
    result = state.as_cohstate()
    if cert is not None:
        cert.result = str(result)
    if result.determined and not extra_chains:
        _solution_cache[key] = result
    return result, cert


def clear_solution_cache():
    _solution_cache.clear()
