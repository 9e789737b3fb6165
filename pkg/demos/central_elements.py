"""Central elements of L2v x L5v, the formula that defines their factor
congruences, and the axioms that pick out complementary pairs."""
from factorium.factorization import (ZeroOneSpec, central_elements, check_bfc,
                                     check_determining_property, complementary_pairs, factor_congruences)
from factorium.fol import compile_formula, sigma_suite, to_text
from factorium.gallery import product_L
from factorium.pipelines import semilattice_phi

Z = ZeroOneSpec.default()
P = product_L(2, 5, with_join=True)
lab = P.labels

# e is central when 0 theta e theta* 1 for some factor pair.
central = sorted({c.value[0] for c in central_elements(P, Z)})
print("central elements:", [lab[e] for e in central])
print("factor congruences:", len(factor_congruences(P)))
print("BFC:", check_bfc(P).holds, " determining property:", check_determining_property(P, Z).holds)

# One formula in x, y, z recovers the factor congruence from its central
# element: x ~ y iff phi(x, y, e).
phi = semilattice_phi()
print("\nphi =", to_text(phi))
f = compile_formula(P, phi, ["x", "y", "z"])
for e in central:
    blocks = {}
    for x in range(P.size):
        rep = min(y for y in range(P.size) if f(x, y, e))
        blocks.setdefault(rep, []).append(lab[x])
    print(f"  e = {lab[e]}: {len(blocks)} blocks, first {blocks[min(blocks)]}")

# The suite holds exactly at complementary pairs.  Elsewhere it names what breaks.
suite = sigma_suite(P.signature, phi, Z)
compiled = [(name, compile_formula(P, g, ["e", "f"])) for name, g in suite]
print(f"\n{len(suite)} axioms; complementary pairs:",
      [(lab[e[0]], lab[f[0]]) for e, f in complementary_pairs(P, Z)])
for le, lf in [((0, 1), (1, 0)), ((0, 0), (0, 0)), ((0, 2), (1, 0)), ((1, 3), (0, 4))]:
    e, f = P.index(le), P.index(lf)
    failed = [name for name, g in compiled if not g(e, f)]
    print(f"  ({le}, {lf}): {'all hold' if not failed else 'fails ' + ', '.join(failed)}")
