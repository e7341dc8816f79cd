"""Brute-force oracles used by the test suite.

Everything here is written for transparency, not speed: quadruple loops over
matrix entries, breadth-first conjugator searches, cone peeling by column
domination.  The production code must agree with these on small inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from recipgeo.hyp_core import Moebius, Point, S_GEN, T_GEN, apply, identity


def brute_modular_orbit_i(n2max: int) -> set[tuple[Fraction, Fraction]]:
    """All points of the PSL(2,Z)-orbit of i with Frobenius norm^2 <= n2max,
    by quadruple loop over entries."""
    bound = math.isqrt(n2max)
    pts = set()
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                for d in range(-bound, bound + 1):
                    if a * d - b * c != 1:
                        continue
                    if a * a + b * b + c * c + d * d > n2max:
                        continue
                    den = c * c + d * d
                    pts.add((Fraction(a * c + b * d, den), Fraction(1, den)))
    return pts


def brute_orbit_ball_points(p: Point, q: Point, L: float, entry_bound: int) -> set:
    """Orbit points gamma.p with d(q, .) <= L over all matrices with entries
    bounded by entry_bound (complete only if the bound is generous)."""
    from recipgeo.hyp_core import cosh_dist

    K = Fraction(math.cosh(L))
    pts = set()
    rng = range(-entry_bound, entry_bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if a * d - b * c != 1:
                        continue
                    g = Moebius(a, b, c, d)
                    pt = apply(g, p)
                    cd = cosh_dist(q, pt)
                    if 1 < cd <= K:
                        pts.add((pt.x, pt.y))
    return pts


@lru_cache(maxsize=None)
def modular_ball(word_bound: int) -> tuple[Moebius, ...]:
    """All PSL(2,Z) elements of word length <= word_bound over {T, T^-1, S}."""
    gens = (T_GEN, T_GEN.invert(), S_GEN)
    frontier = [identity()]
    seen = {frontier[0].entries()}
    out = list(frontier)
    for _ in range(word_bound):
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                if h.entries() not in seen:
                    seen.add(h.entries())
                    nxt.append(h)
        out.extend(nxt)
        frontier = nxt
    return tuple(out)


def involutions_with_entries_bounded(bound: int) -> list[Moebius]:
    """All trace-zero unit-determinant integer matrices with |entries| <= bound
    (projective representatives)."""
    out = []
    for p in range(-bound, bound + 1):
        need = -(1 + p * p)  # q*r
        for q in range(-bound, bound + 1):
            if q == 0:
                continue
            if need % q != 0:
                continue
            r = need // q
            if abs(r) > bound:
                continue
            out.append(Moebius(p, q, r, -p))
    # projective dedupe happens in Moebius sign normalization
    return sorted(set(out), key=lambda m: m.entries())


def conjugator_search(g: Moebius, h: Moebius, word_bound: int = 12):
    """Some w with w g w^-1 = h, searching word length <= word_bound, or None."""
    for w in modular_ball(word_bound):
        if w @ g @ w.invert() == h:
            return w
    return None


def is_reciprocal_by_search(g: Moebius, word_bound: int = 12) -> bool:
    """Reciprocity by explicit conjugator search: some w with w g w^-1 = g^-1."""
    return conjugator_search(g, g.invert(), word_bound) is not None


# -- independent R/L word extraction (cone peeling) ---------------------------


def _is_nonneg(g: Moebius) -> bool:
    return g.a >= 0 and g.b >= 0 and g.c >= 0 and g.d >= 0


def conjugate_into_cone(g: Moebius, depth: int = 24) -> Moebius:
    """Breadth-first search over conjugations by T, T^-1, S for an entrywise
    nonnegative conjugate.  Raises if none is found within the depth."""
    if g.trace() < 0:
        g = Moebius(-g.a, -g.b, -g.c, -g.d)  # same projective element
    gens = (T_GEN, T_GEN.invert(), S_GEN)
    frontier = [g]
    seen = {g.entries()}
    for _ in range(depth):
        for cand in frontier:
            if _is_nonneg(cand):
                return cand
        nxt = []
        for cand in frontier:
            for w in gens:
                h = w @ cand @ w.invert()
                if h.entries() not in seen:
                    seen.add(h.entries())
                    nxt.append(h)
        frontier = nxt
    for cand in frontier:
        if _is_nonneg(cand):
            return cand
    raise RuntimeError(f"no nonnegative conjugate found for {g} within depth {depth}")


def cone_peel_word(g: Moebius) -> str:
    """R/L word of a nonnegative hyperbolic matrix by column domination:
    the last letter is R iff the second column dominates the first."""
    if not _is_nonneg(g):
        raise ValueError("cone peeling needs a nonnegative matrix")
    R = T_GEN
    L = Moebius(1, 0, 1, 1)
    letters = []
    cur = g
    guard = 0
    while not cur.is_identity():
        guard += 1
        if guard > 10_000_000:
            raise RuntimeError("peeling did not terminate")
        a, b, c, d = cur.entries()
        if b >= a and d >= c:
            letters.append("R")
            cur = cur @ R.invert()
        elif a >= b and c >= d:
            letters.append("L")
            cur = cur @ L.invert()
        else:
            raise RuntimeError(f"matrix {cur} is not a positive word")
    return "".join(reversed(letters))


def oracle_rl_word(g: Moebius) -> str:
    """Cyclic R/L word of a hyperbolic modular element, via cone reduction."""
    return cone_peel_word(conjugate_into_cone(g))


def min_rotation(s: str) -> str:
    return min(s[i:] + s[:i] for i in range(len(s)))


def reverse_swap(s: str) -> str:
    return "".join("L" if ch == "R" else "R" for ch in reversed(s))


def unoriented_cyclic_key(word: str) -> str:
    return min(min_rotation(word), min_rotation(reverse_swap(word)))


def is_primitive_word(word: str) -> bool:
    return (word + word).find(word, 1) == len(word)


def dihedral_contains(sigma: Moebius, tau: Moebius, g: Moebius, power_bound: int = 40) -> bool:
    """Membership of g in <sigma, tau>: elements are t^j and t^j sigma with
    t = sigma tau, |j| <= power_bound."""
    t = sigma @ tau
    cur = identity()
    for _ in range(power_bound + 1):
        for h in (cur, cur @ sigma):
            if h == g:
                return True
        inv = cur.invert()
        for h in (inv, inv @ sigma):
            if h == g:
                return True
        cur = cur @ t
    return False


def dihedral_conjugate(pair1, pair2, word_bound: int = 12) -> bool:
    """Whether <s1,t1> and <s2,t2> are conjugate subgroups, by searching
    conjugators up to the word bound.  Equal-length dihedral groups are
    conjugate iff some w maps both generators into the other group."""
    s1, t1 = pair1
    s2, t2 = pair2
    for w in modular_ball(word_bound):
        wi = w.invert()
        if dihedral_contains(s2, t2, w @ s1 @ wi) and dihedral_contains(s2, t2, w @ t1 @ wi):
            return True
    return False
