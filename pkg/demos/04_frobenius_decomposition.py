"""Decomposing the Frobenius pushforward of the structure sheaf.

For each collection object E sitting in the degree-i block, the engine
certifies that the Frobenius pullback of E has cohomology concentrated in
degree i and reads off the multiplicity; the summand is the dual of E's
right-dual object.  The one fully independent check of the whole machine
is the rank identity: the pushforward is locally free of rank p^dim, so
the rank-weighted multiplicities must add up to exactly that.
"""

from flagfrob.frobdecomp import conjecture_check, decompose
from flagfrob.sheaves import build_catalog

cat = build_catalog(4)

print("== n = 4 incidence variety ==")
for p in (5, 7, 11, 13):
    rep = decompose(cat, "x4", p)
    print("p = %-3d sum(rank*mult) = %-8d p^5 = %-8d %s"
          % (p, rep.lhs, rep.rhs, rep.verdict.upper()))

print()
print(decompose(cat, "x4", 5).render())

print("\n== n = 5 incidence variety (20 summands) ==")
cat5 = build_catalog(5)
rep = decompose(cat5, "x5", 7)
print("p = 7: sum(rank*mult) = %d vs 7^7 = %d -> %s"
      % (rep.lhs, rep.rhs, rep.verdict.upper()))

print("\n== the general-n pattern, exercised at n = 4 ==")
conj = conjecture_check(4, 5, catalog=cat)
print(conj.render())
print("\n(n = 6 runs the same necessary-condition checks; the objects the")
print(" engine cannot pin stay honestly Bounded and the rank identity is")
print(" reported as conditional.  Try: flagfrob conjecture --n 6 --p 7)")
