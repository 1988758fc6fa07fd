"""Formal group laws: the universal law over a truncated Lazard ring and friends.

Conventions: a law lives in a two-variable :class:`SeriesRing` on ``x, y``
with cap ``N``.  The universal law built from ``lazard_ring(W)`` has cap
``W + 1``, the largest degree at which associativity has been imposed.
Generators ``a_ij`` (``i <= j``) carry weight ``i + j - 1`` and the series
variables carry weight ``-1``, so ``F`` is homogeneous of weight ``-1``.
"""
from fractions import Fraction
from functools import lru_cache

from .exactalg.ring import QQ, ZZ, GradedRing, RingHom, laurent_ring
from .series import (
    IncompatibleSeries,
    Series,
    SeriesRing,
    reversion,
    substitute,
)


def lazard_generator(i, j):
    i, j = min(i, j), max(i, j)
    return f"a{i}{j}" if j < 10 else f"a{i}_{j}"


def _lazard_generators(W):
    return [
        (lazard_generator(i, w + 1 - i), w)
        for w in range(1, W + 1)
        for i in range(1, (w + 1) // 2 + 1)
    ]


def _generic_law(ring, cap):
    S = SeriesRing(ring, ["x", "y"], cap)
    terms = {(1, 0): 1, (0, 1): 1}
    for d in range(2, cap + 1):
        for i in range(1, d):
            terms[(i, d - i)] = ring.gen(lazard_generator(i, d - i))
    return S.element(terms)


def associativity_defect(F):
    """``F(F(x,y),z) - F(x,F(y,z))`` in ``x, y, z`` at the cap of ``F``."""
    T = SeriesRing(F.ring, ["x", "y", "z"], F.cap)
    x, y, z = T.gens()
    lhs = substitute(F, {"x": substitute(F, {"x": x, "y": y}, target=T), "y": z})
    rhs = substitute(F, {"x": x, "y": substitute(F, {"x": y, "y": z}, target=T)})
    return lhs - rhs


@lru_cache(maxsize=None)
def lazard_ring(W):
    """The Lazard ring with generators ``a_ij``, ``i + j - 1 <= W``.

    Relations are the coefficients of the associativity defect of the
    generic symmetric law, through total degree ``W + 1``.
    """
    if W < 1:
        raise ValueError("W must be at least 1")
    gens = _lazard_generators(W)
    free = GradedRing(gens, [], W, "ZZ")
    defect = associativity_defect(_generic_law(free, W + 1))
    rels = [c for _, c in sorted(defect.terms.items())]
    return GradedRing(gens, rels, W, "ZZ")


class FormalGroupLaw:
    """A formal group law ``F(x, y)`` with its inverse and difference law."""

    def __init__(self, F, name="law", check=True):
        if F.parent.vars != ("x", "y") or F.parent.degrees != (1, 1) or F.parent.bounds:
            raise ValueError("a formal group law is a series in x, y of unit degree")
        self.F = F
        self.name = name
        self.ring = F.ring
        self.cap = F.cap
        self.parent = F.parent
        self.line = SeriesRing(self.ring, ["x"], self.cap)
        if check:
            bad = self.axiom_failures()
            if bad:
                raise ValueError(f"not a formal group law: {', '.join(bad)}")
        self.inverse = self._inverse()
        self.difference = self._difference()
        self._nseries = {0: self.line.zero, 1: self.line.gen("x")}

    # -- axioms ---------------------------------------------------------------

    def axiom_failures(self):
        F = self.F
        out = []
        X = self.line.gen("x")
        if substitute(F, {"x": X, "y": self.line.zero}, target=self.line) != X:
            out.append("F(x,0) != x")
        Y = SeriesRing(self.ring, ["y"], self.cap).gen("y")
        if substitute(F, {"x": Y.parent.zero, "y": Y}, target=Y.parent) != Y:
            out.append("F(0,y) != y")
        swapped = substitute(F, {"x": self.parent.gen("y"), "y": self.parent.gen("x")})
        if swapped != F:
            out.append("F(x,y) != F(y,x)")
        if associativity_defect(F):
            out.append("associativity fails")
        return out

    def __call__(self, a, b):
        """``F(a, b)`` for series ``a, b`` sharing a parent."""
        if not isinstance(a, Series):
            a = b.parent.const(a)
        if not isinstance(b, Series):
            b = a.parent.const(b)
        return substitute(self.F, {"x": a, "y": b})

    def coefficient(self, i, j):
        return self.F.coeff((i, j))

    def _inverse(self):
        X = self.line.gen("x")
        iota = -X
        for d in range(2, self.cap + 1):
            err = self(X, iota)
            c = err.coeff((d,))
            if c:
                iota = iota - self.line.element({(d,): c})
        return iota

    def _difference(self):
        Y = self.parent.gen("y")
        iota_y = substitute(self.inverse, {"x": Y})
        return substitute(self.F, {"y": iota_y})

    def iota(self, a):
        """``ι(a)`` for a series ``a`` with zero constant term."""
        return substitute(self.inverse, {"x": a})

    def minus(self, a, b):
        """``F₋(a, b)``."""
        return substitute(self.difference, {"x": a, "y": b})

    def n_series(self, d):
        """``[d](x)``: ``[0] = 0``, ``[d+1] = F([d], x)``, ``[-d] = ι([d])``."""
        if d in self._nseries:
            return self._nseries[d]
        if d < 0:
            val = substitute(self.inverse, {"x": self.n_series(-d)})
        else:
            val = self(self.n_series(d - 1), self.line.gen("x"))
        self._nseries[d] = val
        return val

    def n_eval(self, d, a):
        return substitute(self.n_series(d), {"x": a})

    # -- logarithm and p_m ----------------------------------------------------

    def dlog(self):
        """``1 / F_2(x, 0)``, the derivative of the logarithm (integral)."""
        P = self.line.with_cap(self.cap - 1)
        F2 = P.element({(e[0],): c for e, c in self.F.terms.items() if e[1] == 1})
        return F2.inverse()

    def pm_coefficients(self):
        """``[p_0, ..., p_{N-1}]`` with ``ℓ(x) = Σ p_m x^{m+1} / (m+1)``."""
        d = self.dlog()
        return [d.coeff((m,)) for m in range(self.cap)]

    def log(self):
        """The logarithm ``ℓ`` with ``ℓ(F(x,y)) = ℓ(x) + ℓ(y)``."""
        if self.ring.domain != "QQ":
            raise ValueError("the logarithm needs a QQ coefficient ring; use tensor_q() first")
        return self.dlog().integrate("x")

    def exp(self):
        return reversion(self.log())

    # -- changes of ring ------------------------------------------------------

    def specialize(self, hom, name=None):
        P = self.parent.with_ring(hom.dst)
        return FormalGroupLaw(self.F.map_coefficients(hom, P), name or self.name, check=False)

    def tensor_q(self):
        if self.ring.domain == "QQ":
            return self
        _, hom = self.ring.tensor_q()
        return self.specialize(hom, self.name)

    def recap(self, cap):
        if cap > self.cap:
            raise ValueError(f"cannot raise the cap of a law beyond {self.cap}")
        return FormalGroupLaw(self.F.recap(cap), self.name, check=False)

    def __eq__(self, other):
        return isinstance(other, FormalGroupLaw) and self.F == other.F

    def __hash__(self):
        return hash(self.F)

    def __str__(self):
        return str(self.F)

    def to_json(self):
        ring = self.ring
        return {
            "name": self.name,
            "cap": self.cap,
            "ring": {
                "domain": ring.domain,
                "cap": ring.cap,
                "generators": [{"name": n, "weight": w} for n, w in zip(ring.names, ring.weights)],
            },
            "F": self.F.to_json(),
            "inverse": self.inverse.to_json(),
            "difference": self.difference.to_json(),
        }


# -- standard laws -------------------------------------------------------------


def universal_fgl(W):
    """``x + y + Σ a_ij x^i y^j`` over ``lazard_ring(W)``, cap ``W + 1``."""
    L = lazard_ring(W)
    return FormalGroupLaw(_generic_law(L, W + 1), "universal", check=False)


def additive_fgl(cap, ring=ZZ):
    S = SeriesRing(ring, ["x", "y"], cap)
    return FormalGroupLaw(S.parse("x + y"), "additive", check=False)


def multiplicative_fgl(cap, beta=None, ring=None):
    """``x + y - β x y``.

    With ``beta=None`` the coefficient ring is ``ZZ[β, β⁻¹]`` (generators
    ``beta``, ``betainv``).  A number gives the law over ``ZZ`` (or ``QQ``
    when the number is not an integer or ``ring`` says so).
    """
    if beta is None:
        ring = ring or laurent_ring("beta", cap, "ZZ")
        b = ring.gen("beta")
    else:
        beta = Fraction(beta)
        if ring is None:
            ring = ZZ if beta.denominator == 1 else QQ
        b = ring(beta)
    S = SeriesRing(ring, ["x", "y"], cap)
    xy = S.element({(1, 1): 1})
    return FormalGroupLaw(S.parse("x + y") - xy.scale(b), "multiplicative", check=False)


def additive_specialization(L, dst=ZZ):
    """``𝕃 -> dst`` with every ``a_ij`` sent to 0."""
    return RingHom(L, dst, {n: 0 for n in L.names})


def multiplicative_specialization(L, dst=None, beta=None):
    """``a11 -> -β``, every other ``a_ij -> 0``."""
    if beta is None:
        dst = dst or laurent_ring("beta", L.cap, L.domain)
        images = {n: dst.zero for n in L.names}
        images["a11"] = -dst.gen("beta")
        return RingHom(L, dst, images)
    if dst is None:
        dst = ZZ if L.domain == "ZZ" and Fraction(beta).denominator == 1 else QQ
    images = {n: dst.zero for n in L.names}
    images["a11"] = dst(-Fraction(beta))
    return RingHom(L, dst, images, homogeneous=False)


def law_by_name(name, cap, beta=None):
    """``universal`` (cap = W + 1), ``additive`` or ``multiplicative``."""
    if name == "universal":
        return universal_fgl(cap - 1)
    if name == "additive":
        return additive_fgl(cap)
    if name == "multiplicative":
        return multiplicative_fgl(cap, beta)
    raise ValueError(f"unknown law {name!r}")


# -- twisting ------------------------------------------------------------------


def promote(s, ring):
    """Move a series with constant (``ZZ``/``QQ``) coefficients into ``ring``."""
    if s.ring == ring:
        return s
    if s.ring.ngens:
        raise IncompatibleSeries("coefficients are not constants; cannot promote")
    if s.ring.domain == "QQ" and ring.domain != "QQ":
        if any(c.constant() != int(c.constant()) for c in s.terms.values()):
            raise IncompatibleSeries("rational coefficients need a QQ target ring")
    P = s.parent.with_ring(ring)
    return P.element({e: ring(c.constant()) for e, c in s.terms.items()})


class TwistData:
    """A change of coordinates ``g(x) = x + O(x^2)``.

    ``g`` is primary; the coefficient sequence ``τ = (b_0, b_1, ...)`` is
    read off ``Σ b_i x^i = x / g(x)`` and is known one degree below the cap.
    """

    def __init__(self, g):
        if g.parent.nvars != 1:
            raise ValueError("twist series must be in one variable")
        if g.parent.vars != ("x",):
            g = substitute(g, {g.parent.vars[0]: SeriesRing(g.ring, ["x"], g.cap).gen("x")})
        if g.constant():
            raise ValueError("twist series needs zero constant term")
        if g.coeff((1,)) != 1:
            raise ValueError("twist series must be x + O(x^2)")
        self.g = g
        self.ring = g.ring
        self.cap = g.cap

    @classmethod
    def identity(cls, cap, ring=QQ):
        return cls(SeriesRing(ring, ["x"], cap).gen("x"))

    @classmethod
    def from_b(cls, bs, ring=QQ, cap=None):
        """From ``b_0, b_1, ...``; ``cap`` defaults to ``len(bs)``."""
        bs = [ring(b) if not hasattr(b, "ring") else b for b in bs]
        if not bs or bs[0] != 1:
            raise ValueError("τ must start with b_0 = 1")
        cap = len(bs) if cap is None else cap
        if cap > len(bs):
            raise ValueError("not enough b-values for the requested cap")
        Q = SeriesRing(ring, ["x"], cap - 1)
        b = Q.element({(i,): c for i, c in enumerate(bs[:cap])})
        binv = b.inverse()
        P = SeriesRing(ring, ["x"], cap)
        return cls(P.element({(e[0] + 1,): c for e, c in binv.terms.items()}))

    def b_series(self):
        """``x / g(x)``, one degree below the cap."""
        P = self.g.parent
        Q = P.with_cap(P.cap - 1)
        shifted = Q.element({(e[0] - 1,): c for e, c in self.g.terms.items()})
        return shifted.inverse()

    @property
    def b(self):
        s = self.b_series()
        return [s.coeff((i,)) for i in range(self.cap)]

    def inverse(self):
        return TwistData(reversion(self.g))

    def promote(self, ring):
        return TwistData(promote(self.g, ring))

    def recap(self, cap):
        return TwistData(self.g.recap(cap))

    def __call__(self, c):
        """``g(c)``."""
        return substitute(promote(self.g, c.ring) if c.ring != self.ring else self.g, {"x": c})

    def __eq__(self, other):
        return isinstance(other, TwistData) and self.g == other.g

    def __hash__(self):
        return hash(self.g)

    def to_json(self):
        return {"g": self.g.to_json(), "b": [str(b) for b in self.b]}


def _align(law, t):
    if t.ring != law.ring:
        t = t.promote(law.ring)
    cap = min(law.cap, t.cap)
    return law.recap(cap) if cap < law.cap else law, t.recap(cap) if cap < t.cap else t


def twist(law, t):
    """``F_τ(x, y) = g(F(g⁻¹(x), g⁻¹(y)))``."""
    law, t = _align(law, t)
    ginv = reversion(t.g)
    P = law.parent
    gx = substitute(ginv, {"x": P.gen("x")}, target=P)
    gy = substitute(ginv, {"x": P.gen("y")}, target=P)
    inner = substitute(law.F, {"x": gx, "y": gy})
    outer = substitute(t.g, {"x": inner})
    return FormalGroupLaw(outer, f"{law.name}-twisted", check=False)


def tau_for_target(F, G):
    """The twist ``g = exp_G ∘ log_F`` carrying ``F`` to ``G``."""
    if F.ring.domain != "QQ" or G.ring.domain != "QQ":
        raise ValueError("tau_for_target needs laws over a QQ ring")
    if F.ring != G.ring:
        if not F.ring.ngens:
            F = FormalGroupLaw(promote(F.F, G.ring), F.name, check=False)
        elif not G.ring.ngens:
            G = FormalGroupLaw(promote(G.F, F.ring), G.name, check=False)
        else:
            raise IncompatibleSeries("laws live over different rings")
    cap = min(F.cap, G.cap)
    logF = F.log().recap(cap)
    expG = G.exp().recap(cap)
    return TwistData(substitute(expG, {"x": logF}))


def log_twist(law):
    """The twist by ``ℓ``, which makes a law over a QQ ring additive."""
    return TwistData(law.log().recap(law.cap))
