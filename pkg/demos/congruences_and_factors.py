"""Congruences of small lattices and how a product falls apart into factors."""
from factorium.congruence import all_congruences, generated_congruence, malcev_chain
from factorium.factorization import decompose, factor_pairs, is_directly_indecomposable
from factorium.gallery import build_D, build_L, product_L

# Con(L_n) grows like the partitions of the n - 2 atoms, plus the top.
for n in range(2, 8):
    print(f"|Con(L{n})| = {len(all_congruences(build_L(n)))}")

L5 = build_L(5)
print()
for pair in [(2, 3), (2, 4), (1, 2)]:
    print(f"Cg{pair} on L5:", generated_congruence(L5, [pair]))

# Touching 0 or 1 collapses everything.  The chain of unary polynomials
# below is the witness that (0, 4) ends up in Cg(1, 2).
ch = malcev_chain(L5, (0, 4), [(1, 2)])
print(f"\n(0, 4) in Cg(1, 2), chain of length {ch.k}:")
for t, (l, r) in zip(ch.terms, ch.values()):
    print(f"  {t}: {l} -> {r}")

# A product of two chains has a factor pair for each coordinate split.
P = product_L(2, 5)
print(f"\n{P.name}: {len(factor_pairs(P))} factor pairs, trivial and swapped ones included")
for rep in decompose(P):
    print(f"  {rep.left.size} x {rep.right.size}, reconstructs: {rep.verify()}")

# D_5 sits inside L_2 x L_6 but cannot be split: 11 is prime, and the
# search agrees.
D = build_D(5)
print(f"\n{D.name} has {D.size} elements, indecomposable: {is_directly_indecomposable(D)}")
