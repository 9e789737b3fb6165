"""D_n and L2 x L_n look alike for n - 3 rounds of the back-and-forth game,
yet one splits as a product and the other does not."""
from factorium.fol.games import ef_game, replay_strategy
from factorium.gallery import P0, P1, build_D, product_L
from factorium.pipelines import check_partial_maps, copy_strategy, counterexample_pipeline

D, P = build_D(5), product_L(2, 5)
print(f"{D.name}: {D.size} elements, P0 = {[D.labels[i] for i in P0(D)]}, P1 = {[D.labels[i] for i in P1(D)]}")
print(f"{P.name}: {P.size} elements")

# Exhaustive search, then the simple copying strategy: answer with the same
# element when it exists, otherwise with some unused element of the P1 part.
# Search keeps winning one round past the copying strategy; the n - 3
# bound is enough for the argument but not tight.
for k in (1, 2, 3, 4):
    res = ef_game(D, P, k)
    copied = replay_strategy(D, P, k, copy_strategy(D, P))
    print(f"  {k} rounds: search says {res.winner} wins ({res.positions} positions), "
          f"copying survives: {copied.ok}")

# Why copying works: any injective map fixing the shared part and moving
# P1 into P1 is a partial isomorphism.
rep = check_partial_maps(5)
print(f"\npartial maps checked: {rep['checked']}, failures: {len(rep['failures'])}")

for n in (4, 5, 6):
    r = counterexample_pipeline(n)
    print(f"n = {n}: exists wins {r['rounds']} rounds: {r['game_winner'] == 'exists'}, "
          f"D indecomposable: {r['D_indecomposable']}, product splits as {r['product_decompositions']}")
