"""Term families, the identities they must satisfy, and the short u-chain
that makes semilattice-ordered lattices tick."""
import itertools

from factorium.congruence import Cg, join
from factorium.factorization import ZeroOneSpec
from factorium.gallery import build_L, gallery
from factorium.malcev import (MalcevFamily, UChain, check_lemma21, check_malcev_identities, find_u_chain,
                              identity_tuple, transform, validate_u_chain)
from factorium.pipelines import SEMILATTICE_CHAIN

Z = ZeroOneSpec.default()
L4 = build_L(4)
sig = L4.signature

# A family with one s and one t term; the transformers act on term tuples
# and on element tuples alike.
fam = MalcevFamily.uniform(2, 1, Z, s=["+(x,z)"], t=["*(x,z)"], signature=sig)
X = identity_tuple(fam)
print("variables:", [str(x) for x in X])
for kind in ("sigma", "sigma*", "rho", "rho*"):
    print(f"  {kind:7}", [str(t) for t in transform(kind, fam, X)])

# For n = 0 the generated congruences line up under the join reading of
# the small circle.  The composition reading is reported alongside.
f0 = MalcevFamily.uniform(2, 0, Z, signature=sig)
joins = comps = 0
for c, d, e in itertools.product(range(L4.size), repeat=3):
    rep = check_lemma21(L4, f0, [c, d, e])
    joins += rep.join_holds
    comps += rep.composition_holds
print(f"\nn = 0 on L4: join reading holds on {joins}/64 tuples, composition on {comps}/64")
print("  e.g. Cg(1, 2) v Cg(3, 0) =", join(Cg(L4, (1, 2)), Cg(L4, (3, 0))))

# The identity checker is a necessary condition only: a family whose L and
# R terms are all x already breaks on the two-element lattice.
bad = MalcevFamily.uniform(2, 0, Z, L_default="x", R_default="x", signature=sig)
rep = check_malcev_identities(build_L(2), bad)
first = rep.failures()[0]
print(f"\nconstant-x family: {len(rep.failures())} identities fail, first {first.label} at {first.counter}")

# The chain x+z, x*z, y*z, y+z, y connects x to y through the
# 0 / 1 alternation on every lattice in the gallery, with or without join.
for variety in ("VL", "Vvee"):
    algs = gallery(6, variety)
    u = UChain(SEMILATTICE_CHAIN, Z)
    print(f"\n{variety}: fixed chain valid on {len(algs)} algebras: {validate_u_chain(algs, u).ok}")
    found = find_u_chain(algs, 2)
    print(f"  shortest found (k = {found.k}):", ", ".join(str(t) for t in found.terms))
