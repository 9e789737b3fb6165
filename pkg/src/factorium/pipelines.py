"""End-to-end checks on the example algebras: the D_n versus L_2 x L_n game
argument, the partial maps behind it, and the L_5 x L_2
semilattice examples.
"""
from __future__ import annotations

import itertools

from .algebra import Algebra, ElementMap, is_isomorphism, is_partial_isomorphism, \
    is_subuniverse
from .congruence import DEFAULT_MAX_SIZE, Cg, join, kernel
from .factorization import ZeroOneSpec, decompose, is_directly_indecomposable
from .fol.builders import build_semilattice_phi
from .fol.evaluate import eval_formula
from .fol.formula import classify, to_text
from .fol.games import DEFAULT_GAME_BUDGET, certificate_strategy, ef_game, replay_strategy
from .gallery import P0, P1, base_part, build_D, build_L, figure_subalgebra, product_L
from .malcev import UChain, validate_u_chain

SEMILATTICE_CHAIN = ("+(x,z)", "*(x,z)", "*(y,z)", "+(y,z)", "y")


def is_prime(k: int) -> bool:
    return k >= 2 and all(k % p for p in range(2, int(k ** 0.5) + 1))


def copy_strategy(D: Algebra, P: Algebra):
    """Duplicator: copy elements of the 2 x 3 part and P0; answer a P1 move
    with an unused P1 element of the other algebra."""
    idx = ({D.labels[i]: i for i in range(D.size)}, {P.labels[i]: i for i in range(P.size)})
    algs = (D, P)
    p1 = (P1(D), P1(P))

    def respond(position, side, x):
        src, dst = side, 1 - side
        lab = algs[src].labels[x]
        if lab[0] == 0 or lab[1] < 3:
            return idx[dst].get(lab)
        used = {pair[dst] for pair in position}
        for y in p1[dst]:
            if y not in used:
                return y
        return None

    return respond


def check_partial_maps(n: int = 5) -> dict:
    """Every injective partial map D_n -> L_2 x L_n that is the identity on its
    part of (2 x 3) u P0 and sends P1 elements into P1 injectively must be a
    partial isomorphism.  Enumerates all such maps."""
    D, P = build_D(n), product_L(2, n)
    fixed = [i for i in base_part(D) + P0(D)]
    target = {D.labels[i]: P.index(D.labels[i]) for i in fixed}
    src_p1, dst_p1 = P1(D), P1(P)
    checked, failures = 0, []
    for r in range(len(fixed) + 1):
        for dom in itertools.combinations(fixed, r):
            base = {a: target[D.labels[a]] for a in dom}
            for k in range(min(len(src_p1), len(dst_p1)) + 1):
                for srcs in itertools.combinations(src_p1, k):
                    for dsts in itertools.permutations(dst_p1, k):
                        m = dict(base)
                        m.update(zip(srcs, dsts))
                        checked += 1
                        if not is_partial_isomorphism(D, P, m, with_constants=False):
                            failures.append({D.labels[a]: P.labels[b] for a, b in m.items()})
    return {"n": n, "checked": checked, "failures": failures, "ok": not failures}


def counterexample_pipeline(n: int, budget: int = DEFAULT_GAME_BUDGET,
                            max_size: int = DEFAULT_MAX_SIZE) -> dict:
    """D_n against L_2 x L_n: the game of length n - 3, and direct (in)decomposability."""
    D, P = build_D(n), product_L(2, n)
    rounds = n - 3
    game = ef_game(D, P, rounds, budget)
    cert = replay_strategy(D, P, rounds, certificate_strategy(game)) if game.winner == "exists" else None
    copied = replay_strategy(D, P, rounds, copy_strategy(D, P))
    prime = is_prime(D.size)
    di_search = is_directly_indecomposable(D, max_size) if D.size <= max_size else None
    reports = decompose(P, max_size) if P.size <= max_size else []
    sizes = sorted({tuple(sorted((r.left.size, r.right.size))) for r in reports})
    report = {
        "n": n,
        "rounds": rounds,
        "game_winner": game.winner,
        "game_positions": game.positions,
        "certificate_replay": None if cert is None else cert.ok,
        "copy_strategy_replay": copied.ok,
        "copy_strategy_sequences": copied.sequences,
        "D_size": D.size,
        "D_size_prime": prime,
        "D_indecomposable": di_search,
        "cardinality_agrees": None if not prime or di_search is None else di_search,
        "product_decomposable": bool(reports),
        "product_decompositions": [list(s) for s in sizes],
        "reconstructions_verified": all(r.verify() for r in reports),
    }
    report["ok"] = bool(game.winner == "exists" and copied.ok and (cert is None or cert.ok)
                        and di_search is not False and reports and report["reconstructions_verified"])
    return report


def semilattice_phi(algebras=None):
    """Phi_sem from the chain (x+z, x*z, y*z, y+z, y), validated on the given
    algebras (default: L_2..L_6 with join)."""
    algebras = algebras or [build_L(k, True) for k in range(2, 7)]
    u = UChain(SEMILATTICE_CHAIN, ZeroOneSpec.default())
    rep = validate_u_chain(algebras, u)
    if not rep.ok:
        raise AssertionError(f"semilattice chain failed validation: {rep.failures[:1]}")
    return build_semilattice_phi(u)


def figure_checks() -> dict:
    """The L_5 x L_2 examples with join: the subalgebra L, the isomorphism F,
    the congruence theta inside ker pi_1, and the transport argument."""
    L, P = figure_subalgebra()
    Q = product_L(4, 2, with_join=True)
    out: dict = {}
    drop = [P.element(3, 1), P.element(4, 0)]
    out["L_closed"] = is_subuniverse(P, [a for a in range(P.size) if a not in drop])
    F = ElementMap({a: L.index((4, 1) if Q.labels[a] == (3, 1) else Q.labels[a])
                    for a in range(Q.size)}, Q.size, L.size)
    out["F_isomorphism"] = is_isomorphism(Q, L, F)

    theta = join(Cg(P, (P.element(0, 0), P.element(0, 1))),
                 Cg(P, (P.element(1, 0), P.element(1, 1))))
    ker1 = kernel(P, P.projection(0))
    out["theta_blocks"] = [[P.labels[a] for a in b] for b in theta.partition()]
    out["theta_le_ker_pi1"] = theta.le(ker1)
    out["theta_ne_ker_pi1"] = theta != ker1

    phi = semilattice_phi()
    out["phi_tags"] = classify(phi)
    vals = []
    for A, x, y in ((Q, (3, 0), (3, 1)), (L, (3, 0), (4, 1)), (P, (3, 0), (4, 1))):
        env = {"x": A.index(x), "y": A.index(y), "z": A.index((0, 1))}
        vals.append(eval_formula(A, phi, env))
    out["transport"] = vals
    out["phi"] = to_text(phi)
    out["ok"] = bool(out["L_closed"] and out["F_isomorphism"] and out["theta_le_ker_pi1"]
                     and out["theta_ne_ker_pi1"] and vals == [True, True, False])
    return out
