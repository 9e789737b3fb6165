"""Constructions of the kernel-defining formulas and the axioms around them."""
from __future__ import annotations

from typing import Mapping, Sequence

from ..malcev import MalcevFamily, UChain, parse_word, word_str, words, z_names
from ..terms import App, Term, Var, substitute as term_subst
from .formula import (TRUE, And, Eq, Formula, FormulaError, Implies, conj, eq, exists, forall,
                      free_vars, substitute)


def _join(a: Term, b: Term, symbol: str) -> Term:
    return App(symbol, (a, b))


def build_semilattice_phi(u: UChain, join_symbol: str = "join", bound: str = "u") -> Formula:
    """forall u ( AND_i (u_i(x,y,0) v u = u_i(x,y,z) v u) -> x v u = y v u ).

    The chain must have been validated (see malcev.validate_u_chain).
    """
    if not u.validated:
        raise FormulaError("the u-chain has not been validated on any algebra")
    zn = z_names(u.z.l)
    zero = dict(zip(zn, u.z.zeros))
    w = Var(bound)
    conds = [Eq(_join(term_subst(t, zero), w, join_symbol), _join(t, w, join_symbol))
             for t in u.terms]
    concl = Eq(_join(Var("x"), w, join_symbol), _join(Var("y"), w, join_symbol))
    return forall([bound], Implies(And(tuple(conds)), concl))


# ---------------------------------------------------------------------------
# Psi_m, Phi_1, Phi_2 and the E_m / O_m conjunctions

def _extensions(alpha: tuple, N: int, table: Mapping) -> list:
    """tau_{alpha gamma} for nonempty gamma with |alpha gamma| <= N."""
    return [table[alpha + g] for g in words(N, N - len(alpha), 1)]


def _guarded(alpha: tuple, N: int, table: Mapping) -> Formula:
    ante = _extensions(alpha, N, table)
    if not ante:
        return table[alpha]
    return Implies(And(tuple(ante)), table[alpha])


def build_psi(fam: MalcevFamily, m: int) -> Formula:
    """Psi_m: conjunction over |alpha| = m of (AND_gamma L=R at alpha gamma) -> L_alpha = R_alpha."""
    if not 1 <= m <= fam.N:
        raise FormulaError(f"Psi_m needs 1 <= m <= N, got {m}")
    taus = {w: Eq(fam.L[w], fam.R[w]) for w in words(fam.N)}
    return conj(_guarded(a, fam.N, taus) for a in words(fam.N, m, m))


def _ea_prefix(fam_n: int, first: str, body: Formula) -> Formula:
    """exists first_1 forall other_1 ... exists first_n forall other_n body."""
    other = "x" if first == "y" else "y"
    for j in range(fam_n, 0, -1):
        body = exists([f"{first}{j}"], forall([f"{other}{j}"], body))
    return body


def build_phi12(fam: MalcevFamily) -> tuple[Formula, Formula, dict[int, Formula]]:
    """(Phi_1, Phi_2, {m: Psi_m}); the kernel formula is Phi_1 and Phi_2."""
    psi = {m: build_psi(fam, m) for m in range(1, fam.N + 1)}
    k = fam.k
    phi1 = _ea_prefix(fam.n, "y", conj(psi[2 * m] for m in range(1, k + 1)))
    phi2 = _ea_prefix(fam.n, "x", conj(psi[2 * m - 1] for m in range(1, k + 1)))
    return phi1, phi2, psi


def build_phi(fam: MalcevFamily) -> Formula:
    phi1, phi2, _ = build_phi12(fam)
    return And((phi1, phi2))


def _check_taus(taus: Mapping, N: int):
    if N < 2 or N % 2:
        raise FormulaError(f"N must be a positive even integer, got {N}")
    for w in words(N, N, 1):
        if w not in taus:
            raise FormulaError(f"missing tau_{word_str(w)}")


def build_E(taus: Mapping, N: int, m: int) -> Formula:
    _check_taus(taus, N)
    parts = [_guarded(a, N, taus) for a in words(N, N, max(m, 1)) if len(a) % 2 == 0]
    return conj(parts) if parts else TRUE


def build_O(taus: Mapping, N: int, m: int) -> Formula:
    _check_taus(taus, N)
    parts = [_guarded(a, N, taus) for a in words(N, N, max(m, 1)) if len(a) % 2 == 1]
    return conj(parts) if parts else TRUE


def build_EO(taus: Mapping, N: int, n: int) -> Formula:
    """(exists y1 forall x1 ... E_2) and (exists x1 forall y1 ... O_1).

    taus maps every word alpha with 1 <= |alpha| <= N (tuples of letters,
    or dot-separated strings) to a formula.
    """
    taus = {(parse_word(k) if isinstance(k, str) else tuple(k)): v for k, v in taus.items()}
    return And((_ea_prefix(n, "y", build_E(taus, N, 2)), _ea_prefix(n, "x", build_O(taus, N, 1))))


# ---------------------------------------------------------------------------
# the Sigma suite

def _vec(base: str, l: int) -> list[str]:
    return [base] if l == 1 else [f"{base}{i}" for i in range(1, l + 1)]


class _Kernel:
    """Phi(s, t, first, second) with z := first and optional w := second."""

    def __init__(self, phi: Formula, l: int, w_names: Sequence[str] | None):
        self.phi = phi
        self.zn = z_names(l)
        self.wn = list(w_names or [])

    def __call__(self, s, t, first, second) -> Formula:
        m = {"x": _t(s), "y": _t(t)}
        m.update({z: _t(v) for z, v in zip(self.zn, first)})
        m.update({w: _t(v) for w, v in zip(self.wn, second)})
        return substitute(self.phi, m)


def _t(x) -> Term:
    return Var(x) if isinstance(x, str) else x


def sigma_suite(signature, phi: Formula, z, w_names: Sequence[str] | None = None,
                e_name: str = "e", f_name: str = "f") -> list[tuple[str, Formula]]:
    """The axioms saying that e and f are complementary central elements,
    given a formula phi(x, y, z...) defining the kernel from e.

    Free variables of each axiom are e (or e1..el) and f (or f1..fl).
    In PRES_F the variable z is universally quantified with the others.
    """
    l = z.l
    allowed = {"x", "y", *z_names(l), *(w_names or [])}
    fv = free_vars(phi)
    if not {"x", "y"} <= fv or not fv <= allowed:
        raise FormulaError(f"kernel formula has free variables {sorted(fv)}, "
                           f"expected x, y, {', '.join(z_names(l))}")
    K = _Kernel(phi, l, w_names)
    ev, fv_ = _vec(e_name, l), _vec(f_name, l)
    clash = (set(ev) | set(fv_)) & {"x", "y", "z", "u"}
    if clash:
        raise FormulaError(f"names {sorted(clash)} are reserved for bound variables")

    def Phi_e(s, t):
        return K(s, t, ev, fv_)

    def Phi_f(s, t):
        return K(s, t, fv_, ev)

    def can(P, a, b):
        return conj([P(z0, ei) for z0, ei in zip(z.zeros, map(Var, a))]
                    + [P(o, fi) for o, fi in zip(z.ones, map(Var, b))])

    def ref(P):
        return forall(["x"], P("x", "x"))

    def sym(P, Q):
        return forall(["x", "y", "z"], Implies(And((P("x", "y"), P("y", "z"), Q("z", "x"))),
                                               eq("z", "x")))

    def trans(P, Q):
        return forall(["x", "y", "z", "u"],
                      Implies(And((P("x", "y"), P("y", "z"), P("x", "u"), Q("u", "z"))),
                              eq("u", "z")))

    def pres(F, m, P, Q):
        us = [f"u{j}" for j in range(1, m + 1)]
        vs = [f"v{j}" for j in range(1, m + 1)]
        Fu = App(F, tuple(Var(x) for x in us))
        Fv = App(F, tuple(Var(x) for x in vs))
        ante = [P(a, b) for a, b in zip(us, vs)] + [P(Fu, "z"), Q("z", Fv)]
        bound = [v for pair in zip(us, vs) for v in pair] + ["z"]
        return forall(bound, Implies(And(tuple(ante)), Eq(Var("z"), Fv)))

    out = [
        ("CAN", can(Phi_e, ev, fv_)),
        ("PROD", forall(["x", "y"], exists(["z"], And((Phi_e("x", "z"), Phi_f("z", "y")))))),
        ("INT", forall(["x", "y"], Implies(And((Phi_e("x", "y"), Phi_f("x", "y"))), eq("x", "y")))),
        ("REF", ref(Phi_e)),
        ("SYM", sym(Phi_e, Phi_f)),
        ("TRANS", trans(Phi_e, Phi_f)),
        ("CAN'", can(Phi_f, fv_, ev)),
        ("REF'", ref(Phi_f)),
        ("SYM'", sym(Phi_f, Phi_e)),
        ("TRANS'", trans(Phi_f, Phi_e)),
    ]
    for F, m in signature.items():
        out.append((f"PRES_{F}", pres(F, m, Phi_e, Phi_f)))
        out.append((f"PRES_{F}'", pres(F, m, Phi_f, Phi_e)))
    return out
