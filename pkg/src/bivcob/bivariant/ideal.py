"""Budget-bounded spans of bivariant ideals generated over the point.

For generators ``r`` over ``W -> pt`` the generated ideal consists of sums
of elements ``g_*(α • f^*(r) • β)`` with ``f: Y -> pt``, ``α`` over
``X -> W × Y`` and ``β`` over ``Y -> Z``.  Every element carries a
:class:`Witness` recording that shape.  ``closure_check`` applies each
bivariant operation to enumerated elements and rewrites the result back
into the same shape; the rewrite is then evaluated and compared with the
directly computed result.
"""
import random
from dataclasses import dataclass
from itertools import product

from .site import FinMap, all_maps, fibre_product, random_map, to_point
from .theory import SpanCycle, SpanTheory


@dataclass(frozen=True)
class Witness:
    r: SpanCycle  # over W -> pt
    alpha: SpanCycle  # over X -> W × Y
    beta: SpanCycle  # over Y -> Z
    g: FinMap  # X -> X'
    k: FinMap  # X' -> Z

    @property
    def Y(self):
        return self.beta.base.src

    def to_json(self):
        return {
            "r": self.r.to_json(),
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "g": self.g.to_json(),
            "k": self.k.to_json(),
        }


def _wy(r, Y):
    """``W ×_pt Y`` together with its projection to ``Y``."""
    return fibre_product(r.base, to_point(Y))


def evaluate(T, w):
    """``g_*(α • f^*(r) • β)``."""
    fr = T.pullback(w.r, to_point(w.Y))
    inner = T.product(T.product(w.alpha, fr), w.beta)
    return T.pushforward(inner, w.g, w.k)


def _generators(base, max_fiber):
    for fibers in product(range(max_fiber + 1), repeat=base.src):
        if any(fibers):
            yield SpanCycle(base, {fibers: 1})


def ideal_span(generators, max_size=2, max_fiber=1, limit=None):
    """Distinct nonzero elements ``g_*(α • f^*(r) • β)`` within the budget.

    Sets ``X, X', Y, Z`` range over sizes ``1..max_size``; ``α`` and
    ``β`` over single spans with fibers ``≤ max_fiber``.  Returns a list of
    ``(value, witness)`` pairs in enumeration order.
    """
    T = SpanTheory()
    out = []
    seen = set()
    sizes = range(1, max_size + 1)
    for r in generators:
        if r.base.dst != 1:
            raise ValueError("generators must live over a map to the point")
        if not r:
            continue
        for Y, Z in product(sizes, sizes):
            wy = _wy(r, Y)
            for b in all_maps(Y, Z):
                betas = list(_generators(b, max_fiber))
                for X in sizes:
                    for a in all_maps(X, wy.size):
                        base = b.compose(wy.p2.compose(a))
                        alphas = list(_generators(a, max_fiber))
                        for Xp in sizes:
                            for g in all_maps(X, Xp):
                                for k in all_maps(Xp, Z):
                                    if k.compose(g) != base:
                                        continue
                                    for alpha, beta in product(alphas, betas):
                                        w = Witness(r, alpha, beta, g, k)
                                        v = evaluate(T, w)
                                        if not v or v in seen:
                                            continue
                                        seen.add(v)
                                        out.append((v, w))
                                        if limit is not None and len(out) >= limit:
                                            return out
    return out


# -- closure rewrites ----------------------------------------------------------


def push_witness(w, g2, k2):
    """``g2_*`` of an element: compose the outer pushforward."""
    return Witness(w.r, w.alpha, w.beta, g2.compose(w.g), k2)


def right_witness(T, w, delta):
    """``E • δ = g_*(α • f^*(r) • (β • δ))``."""
    return Witness(w.r, w.alpha, T.product(w.beta, delta), w.g, delta.base.compose(w.k))


def pull_witness(T, w, h):
    """``h^*`` of an element, rewritten along ``Y' = Y ×_Z Z'``."""
    b = w.beta.base
    yp = fibre_product(b, h)  # pairs (y, z')
    Y2 = yp.size
    beta2 = T.pullback(w.beta, h)
    wy = _wy(w.r, w.Y)
    wy2 = _wy(w.r, Y2)
    u = FinMap(wy2.size, wy.size, tuple(wy.index(wv, yp.pairs[j][0]) for wv, j in wy2.pairs))
    alpha2 = T.pullback(w.alpha, u)  # source pairs (x, i) with i in W × Y'
    xz = fibre_product(w.k, h)  # target of the new pushforward: pairs (x', z')
    X2 = alpha2.base.src
    src_pairs = fibre_product(w.alpha.base, u).pairs
    g2 = FinMap(
        X2,
        xz.size,
        tuple(xz.index(w.g(x), yp.pairs[wy2.pairs[i][1]][1]) for x, i in src_pairs),
    )
    return Witness(w.r, alpha2, beta2, g2, xz.p2)


def closure_check(generators, max_size=2, max_fiber=1, trials=200, seed=42, limit=200):
    """Apply each operation to budgeted elements and verify the rewrites."""
    T = SpanTheory()
    elements = ideal_span(generators, max_size, max_fiber, limit=limit)
    report = {"elements": len(elements), "trials": 0, "seed": seed, "passed": True, "counterexample": None}
    if not elements:
        return report
    for i in range(trials):
        rng = random.Random(f"{seed}:ideal:{i}")
        value, w = elements[rng.randrange(len(elements))]
        op = ("pushforward", "right", "left", "pullback")[i % 4]
        Xp, Z = w.k.src, w.k.dst
        if op == "pushforward":
            X2 = rng.randint(1, max_size + 1)
            g2 = random_map(rng, Xp, X2)
            # k2 must satisfy k2 ∘ g2 = k; pick it where g2 is hit, arbitrary elsewhere
            vals = []
            for t in range(X2):
                pre = [x for x in range(Xp) if g2(x) == t]
                vals.append(w.k(pre[0]) if pre else rng.randrange(Z))
            k2 = FinMap(X2, Z, tuple(vals))
            if k2.compose(g2) != w.k:
                continue
            direct = T.pushforward(value, g2, k2)
            new = push_witness(w, g2, k2)
        elif op == "right":
            Z2 = rng.randint(1, max_size + 1)
            delta = T.random_element(rng, random_map(rng, Z, Z2), max_fiber + 1)
            direct = T.product(value, delta)
            new = right_witness(T, w, delta)
        elif op == "left":
            U = rng.randint(1, max_size + 1)
            gamma = T.random_element(rng, random_map(rng, U, Xp), max_fiber + 1)
            direct = T.product(gamma, value)
            new = left_witness(T, w, gamma)
        else:
            Z2 = rng.randint(1, max_size + 1)
            h = random_map(rng, Z2, Z)
            direct = T.pullback(value, h)
            new = pull_witness(T, w, h)
        report["trials"] += 1
        got = evaluate(T, new)
        if got != direct:
            report["passed"] = False
            report["counterexample"] = {
                "operation": op,
                "trial": i,
                "element": w.to_json(),
                "direct": direct.to_json(),
                "rewritten": got.to_json(),
            }
            break
    return report


def left_witness(T, w, gamma):
    """``γ • g_*(P)`` as ``g'_*((g^*γ • α) • f^*(r) • β)``.

    ``g^*(γ)`` lives over ``U ×_X' X -> X`` with pairs ``(u, x)``, and
    ``g'`` is the projection to ``U``.
    """
    pulled = T.pullback(gamma, w.g)
    fp = fibre_product(gamma.base, w.g)  # pairs (u, x)
    alpha = T.product(pulled, w.alpha)
    return Witness(w.r, alpha, w.beta, fp.p1, w.k.compose(gamma.base))


def target_annihilates(generators, **budget):
    """``to_target`` kills every spanned element iff it kills each generator."""
    from .theory import to_target

    return all(not to_target(v) for v, _ in ideal_span(generators, **budget))


__all__ = [
    "Witness",
    "closure_check",
    "evaluate",
    "ideal_span",
    "left_witness",
    "pull_witness",
    "push_witness",
    "right_witness",
    "target_annihilates",
]
