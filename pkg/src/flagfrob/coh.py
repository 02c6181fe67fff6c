"""Certified cohomology of line bundles on the full flag variety of SL(n).

Characteristic 0 is classical Bott vanishing.  In characteristic p the
engine performs a breadth-first search over the shifted Weyl orbit using
only moves whose hypotheses hold verbatim:

* Kempf terminal: a dominant weight has cohomology in degree 0 only;
* wall terminal: a weight with <lam+rho, alpha^vee> = 0 for a *simple*
  alpha is acyclic in every characteristic;
* two reflection moves transporting the full cohomology across a wall
  with a degree shift of one, each valid under an explicit pairing
  inequality (the bottom-alcove transport and the -p-bounded transport);
* Serre duality as a fallback re-rooting of the whole search.

Every answer carries a replayable certificate.  When no terminal is
reachable the result is a Bounded state: a support window plus the exact
Euler characteristic (which is characteristic-free by flatness).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rootsys import (
    TypeALattice,
    Weight,
    euler_polynomial,
    make_dominant_dot,
    weyl_dim,
)

INF = None  # upper bound marker: unknown / unbounded


@dataclass(frozen=True)
class CohState:
    """Three-valued cohomology knowledge for one object.

    ``dims`` is an exact degree -> dimension map when the cohomology is
    fully determined (empty map = acyclic); otherwise ``dims`` is None and
    ``support``/``bounds`` carry the certified window.  ``euler`` is always
    the exact Euler characteristic.  ``labels`` optionally records the
    dominant weight of the module sitting in a degree.
    """

    support: frozenset
    euler: int
    dims: dict | None = None
    bounds: dict | None = None
    labels: dict | None = None

    @property
    def determined(self) -> bool:
        return self.dims is not None

    @property
    def acyclic(self) -> bool:
        return self.dims is not None and not self.dims

    def single_degree(self):
        if len(self.support) == 1:
            return next(iter(self.support))
        return None

    def alternating_sum(self):
        if self.dims is None:
            return None
        return sum((-1) ** d * v for d, v in self.dims.items())

    def __str__(self):
        if self.acyclic:
            return "Acyclic"
        if self.determined:
            inner = ", ".join(
                "%d -> %d" % (d, v) for d, v in sorted(self.dims.items())
            )
            return "Determined{%s}" % inner
        return "Bounded(support=%s, euler=%d)" % (sorted(self.support), self.euler)


def determined_state(dims: dict, labels: dict | None = None) -> CohState:
    dims = {d: v for d, v in dims.items() if v != 0}
    euler = sum((-1) ** d * v for d, v in dims.items())
    return CohState(
        support=frozenset(dims),
        euler=euler,
        dims=dict(dims),
        bounds={d: v for d, v in dims.items()},
        labels=dict(labels) if labels else None,
    )


ACYCLIC = determined_state({})


@dataclass(frozen=True)
class CertStep:
    """One replayable step of a line-bundle cohomology derivation."""

    kind: str  # kempf | wall | alcove_up | bounded_down | serre | start
    weight: Weight
    root: int = 0
    pairing: int = 0
    note: str = ""


@dataclass
class Certificate:
    """Ordered step list; replaying it reconstructs the returned state."""

    lattice_n: int
    p: int
    weight: Weight
    steps: list = field(default_factory=list)
    serre: bool = False

    def render(self) -> str:
        lines = ["coh certificate: n=%d p=%d weight=%s" % (
            self.lattice_n, self.p, list(self.weight))]
        for s in self.steps:
            if s.kind in ("alcove_up", "bounded_down"):
                lines.append(
                    "  %s at %s across alpha_%d (pairing %d)"
                    % (s.kind, list(s.weight), s.root, s.pairing)
                )
            elif s.kind == "serre":
                lines.append("  serre re-root to %s" % (list(s.weight),))
            else:
                lines.append("  %s at %s %s" % (s.kind, list(s.weight), s.note))
        return "\n".join(lines)


def _wall_root(lattice, lam):
    shifted = lattice.add(lam, lattice.rho)
    for i in range(1, lattice.n):
        if lattice.pairing(shifted, i) == 0:
            return i
    return 0


def _moves(lattice, lam, p):
    """Legal wall-crossing moves toward dominance from lam.

    Yields (root index, new weight, tag, pairing).  A move across alpha_i
    requires c = <lam+rho, alpha_i^vee> < 0 together with one of:
    * -c <= p                       (bottom-alcove transport, "alcove_up")
    * <lam, alpha_i^vee> >= -p      (bounded transport, "bounded_down")
    * <lam, alpha_i^vee> = -a p^m - 1, 0 < a < p  (its stated exception)
    """
    shifted = lattice.add(lam, lattice.rho)
    for i in range(1, lattice.n):
        c = lattice.pairing(shifted, i)
        if c >= 0:
            continue
        reflected = lattice.sub(lam, lattice.scale(c, lattice.simple_root(i)))
        bare = lattice.pairing(lam, i)
        if -c <= p:
            yield i, reflected, "alcove_up", c
        elif bare >= -p:
            yield i, reflected, "bounded_down", bare
        else:
            m = -bare - 1  # test bare = -a p^k - 1
            if m > 0:
                a = m
                k = 0
                while a % p == 0:
                    a //= p
                    k += 1
                if k >= 1 and 0 < a < p:
                    yield i, reflected, "bounded_down", bare


def _bfs(lattice, lam, p, budget):
    """Search toward a terminal; return (terminal kind, weight, depth, path)."""
    start = tuple(lam)
    seen = {start: (0, None, None)}  # weight -> (depth, parent, step)
    frontier = [start]
    expanded = 0
    best_depth = 0
    while frontier:
        nxt = []
        for w in frontier:
            depth = seen[w][0]
            best_depth = max(best_depth, depth)
            if lattice.is_dominant(w):
                return "kempf", w, depth, _path(seen, w)
            wall = _wall_root(lattice, w)
            if wall:
                return "wall", w, depth, _path(seen, w)
            expanded += 1
            if expanded > budget:
                return "budget", None, best_depth, []
            for i, w2, tag, c in _moves(lattice, w, p):
                if w2 not in seen:
                    seen[w2] = (depth + 1, w, CertStep(tag, w, i, c))
                    nxt.append(w2)
        frontier = sorted(nxt)
    return "stuck", None, best_depth, []


def _path(seen, w):
    steps = []
    cur = w
    while True:
        depth, parent, step = seen[cur]
        if parent is None:
            break
        steps.append(step)
        cur = parent
    steps.reverse()
    return steps


def coh_line_char0(lattice: TypeALattice, lam) -> CohState:
    """Classical characteristic-zero cohomology of the line bundle L_lam."""
    nf = make_dominant_dot(lattice, lam)
    if nf.singular:
        return ACYCLIC
    dim = weyl_dim(lattice, nf.dominant)
    return determined_state({nf.length: dim}, {nf.length: nf.dominant})


def euler_char(lattice: TypeALattice, lam) -> int:
    """Exact Euler characteristic of L_lam, any characteristic."""
    return euler_polynomial(lattice, lam)


_memo: dict = {}


def coh_line_charp(lattice: TypeALattice, lam, p: int, _serre_ok=True):
    """Certified characteristic-p cohomology of L_lam on the flag variety.

    Parameters
    ----------
    lattice : TypeALattice
    lam : weight tuple
    p : int
        The characteristic (p >= 2).

    Returns
    -------
    (CohState, Certificate)
        Determined or Acyclic when a terminal was reached, otherwise a
        Bounded state whose window reflects the deepest certified
        transport on both the direct and the Serre-dual side.
    """
    lam = lattice.check(lam)
    if p < 2:
        raise ValueError("characteristic must be >= 2")
    key = (lattice.n, p, lam)
    hit = _memo.get(key)
    if hit is not None:
        return hit

    npos = len(lattice.positive_roots)
    budget = lattice.weyl_order() * lattice.rank
    cert = Certificate(lattice.n, p, lam)
    kind, w, depth, path = _bfs(lattice, lam, p, budget)
    if kind == "kempf":
        cert.steps = path + [CertStep("kempf", w, note="dominant terminal")]
        state = determined_state({depth: weyl_dim(lattice, w)}, {depth: w})
        _memo[key] = (state, cert)
        return state, cert
    if kind == "wall":
        cert.steps = path + [
            CertStep("wall", w, root=_wall_root(lattice, w), note="simple wall")
        ]
        _memo[key] = (ACYCLIC, cert)
        return ACYCLIC, cert

    lo = depth  # transported depth excludes degrees below it
    hi = npos
    if _serre_ok:
        dual = lattice.sub(lattice.scale(-2, lattice.rho), lam)
        dstate, dcert = coh_line_charp(lattice, dual, p, _serre_ok=False)
        cert.serre = True
        cert.steps = [CertStep("serre", dual)] + dcert.steps
        if dstate.determined:
            dims = {npos - d: v for d, v in dstate.dims.items()}
            labels = None
            if dstate.labels:
                labels = {
                    npos - d: tuple(reversed(mu)) for d, mu in dstate.labels.items()
                }
            state = determined_state(dims, labels)
            assert state.euler == euler_char(lattice, lam)
            _memo[key] = (state, cert)
            return state, cert
        dual_lo = min(dstate.support) if dstate.support else 0
        hi = npos - dual_lo

    support = frozenset(range(lo, hi + 1))
    chi = euler_char(lattice, lam)
    state = CohState(
        support=support,
        euler=chi,
        dims=None,
        bounds={d: INF for d in support},
        labels=None,
    )
    if not support:
        assert chi == 0
        state = ACYCLIC
    _memo[key] = (state, cert)
    return state, cert


def replay_certificate(lattice: TypeALattice, cert: Certificate):
    """Re-execute a certificate, checking every hypothesis, and rebuild the state."""
    p = cert.p
    steps = list(cert.steps)
    serre_first = cert.serre
    target = cert.weight
    if serre_first:
        assert steps and steps[0].kind == "serre"
        target = steps[0].weight
        steps = steps[1:]
    depth = 0
    cur = tuple(target)
    npos = len(lattice.positive_roots)
    for s in steps:
        if s.kind in ("alcove_up", "bounded_down"):
            assert tuple(s.weight) == cur
            shifted = lattice.add(cur, lattice.rho)
            c = lattice.pairing(shifted, s.root)
            assert c < 0
            if s.kind == "alcove_up":
                assert -c <= p
            cur = lattice.sub(cur, lattice.scale(c, lattice.simple_root(s.root)))
            depth += 1
        elif s.kind == "kempf":
            assert tuple(s.weight) == cur and lattice.is_dominant(cur)
            state = determined_state({depth: weyl_dim(lattice, cur)}, {depth: cur})
            if serre_first:
                dims = {npos - d: v for d, v in state.dims.items()}
                labels = {npos - d: tuple(reversed(mu))
                          for d, mu in state.labels.items()}
                state = determined_state(dims, labels)
            return state
        elif s.kind == "wall":
            assert tuple(s.weight) == cur and _wall_root(lattice, cur) == s.root
            return ACYCLIC
    raise AssertionError("certificate has no terminal step")


def clear_memo():
    _memo.clear()
