"""Chern classes of formal bundles over a formal group law.

Chern data lives in a nilpotent algebra: a bounded :class:`SeriesRing`
``R[v_1..v_m] / (v_i^k, (v)^(A+1))`` over the law's coefficient ring.
A :class:`ChernVector` stores ``c_1..c_r`` and, when known, Chern roots.
Operations on roots are exact; operations on bare classes go through the
symmetric-function series ``H^i`` and may lower the cap of the result when
the classes have low order (the cap of every result is explicit).
"""
from fractions import Fraction
from math import ceil, inf

from .series import (
    SeriesRing,
    elementary_symmetric,
    series_exp,
    substitute,
    sym_reduce,
)
from .exactalg.ring import QQ
from .fgl import promote


def nilpotent_algebra(ring, names, nilpotency, cap=None):
    """``ring[names] / (v^nilpotency, all monomials of degree > cap)``."""
    names = list(names)
    if isinstance(nilpotency, int):
        nilpotency = [nilpotency] * len(names)
    if any(k < 1 for k in nilpotency):
        raise ValueError("nilpotency orders must be positive")
    bounds = [k - 1 for k in nilpotency]
    full = sum(bounds)
    cap = full if cap is None else min(cap, full)
    return SeriesRing(ring, names, cap, bounds=bounds)


def _check_nilpotent(c):
    if c.constant():
        raise ValueError(f"Chern class {c} has a nonzero constant term")


class ChernVector:
    """Formal Chern data of a rank ``r`` bundle."""

    def __init__(self, law, algebra, classes=None, roots=None):
        if algebra.ring != law.ring:
            raise ValueError("algebra and law use different coefficient rings")
        if roots is not None:
            roots = tuple(algebra(s) for s in roots)
            for s in roots:
                _check_nilpotent(s)
            derived = tuple(elementary_symmetric(list(roots), algebra)[1:]) if roots else ()
            if classes is not None and tuple(algebra(c) for c in classes) != derived:
                raise ValueError("classes disagree with the given roots")
            classes = derived
        classes = tuple(algebra(c) for c in (classes or ()))
        for c in classes:
            _check_nilpotent(c)
        self.law = law
        self.algebra = algebra
        self.classes = classes
        self.roots = roots
        self.rank = len(classes)

    @classmethod
    def line(cls, law, algebra, c1):
        return cls(law, algebra, roots=[c1])

    @classmethod
    def trivial(cls, law, algebra, rank):
        return cls(law, algebra, roots=[algebra.zero] * rank)

    @property
    def nilpotency(self):
        b = self.algebra.bounds
        return None if b is None else max(x for x in b if x is not None) + 1

    def c(self, i):
        if i == 0:
            return self.algebra.one
        if 1 <= i <= self.rank:
            return self.classes[i - 1]
        return self.algebra.zero

    def total_class(self):
        out = self.algebra.one
        for c in self.classes:
            out = out + c
        return out

    def euler_class(self):
        return self.c(self.rank)

    def cap(self):
        return min([self.algebra.cap] + [c.cap for c in self.classes])

    def __eq__(self, other):
        return (
            isinstance(other, ChernVector)
            and self.rank == other.rank
            and all(a == b for a, b in zip(self.classes, other.classes))
        )

    def __hash__(self):
        return hash(self.classes)

    def __repr__(self):
        return f"ChernVector(rank={self.rank}, classes=[{', '.join(map(str, self.classes))}])"

    def to_json(self):
        out = {
            "rank": self.rank,
            "nilpotency": self.nilpotency,
            "classes": [str(c) for c in self.classes],
        }
        if self.roots is not None:
            out["roots"] = [str(s) for s in self.roots]
        return out

    @classmethod
    def from_json(cls, obj, law, algebra):
        roots = obj.get("roots")
        if roots is not None:
            return cls(law, algebra, roots=[algebra.parse(s) for s in roots])
        classes = [algebra.parse(s) for s in obj["classes"]]
        if len(classes) != obj["rank"]:
            raise ValueError("rank does not match the number of classes")
        return cls(law, algebra, classes=classes)


class TwoTermComplex:
    """The virtual bundle ``E0 - E1``."""

    def __init__(self, E0, E1):
        if E0.algebra != E1.algebra:
            raise ValueError("both terms must share an algebra")
        self.E0 = E0
        self.E1 = E1
        self.rank = E0.rank - E1.rank

    def to_json(self):
        return [self.E0.to_json(), self.E1.to_json()]


# -- the symmetric series G^i, H^i ---------------------------------------------


def _mu_names(r):
    return [f"mu{k}" for k in range(1, r + 1)]


def _s_names(r):
    return [f"s{k}" for k in range(1, r + 1)]


def g_series(law, r, i, minus=False):
    """``G^i = e_i(F(μ_1, x), ..., F(μ_r, x))`` (with ``F₋`` when ``minus``)."""
    if not 1 <= i <= r:
        raise ValueError(f"index {i} out of range for rank {r}")
    return _g_all(law, r, minus)[i - 1]


def _g_all(law, r, minus):
    cache = law.__dict__.setdefault("_g_cache", {})
    key = (r, minus)
    if key not in cache:
        P = SeriesRing(law.ring, _mu_names(r) + ["x"], law.cap)
        x = P.gen("x")
        op = law.minus if minus else law
        vals = [op(P.gen(m), x) for m in _mu_names(r)]
        cache[key] = elementary_symmetric(vals, P)[1:]
    return cache[key]


def h_series(law, r, i, minus=False):
    """``H^i(s_1..s_r, x)`` with ``H^i(e_1(μ), ..., e_r(μ), x) = G^i``."""
    if not 1 <= i <= r:
        raise ValueError(f"index {i} out of range for rank {r}")
    cache = law.__dict__.setdefault("_h_cache", {})
    key = (r, minus)
    if key not in cache:
        cache[key] = [sym_reduce(g, _mu_names(r), _s_names(r)) for g in _g_all(law, r, minus)]
    return cache[key][i - 1]


def h_minus_series(law, r, i):
    return h_series(law, r, i, minus=True)


def _eval_h(law, r, classes, lc, minus, algebra):
    out = []
    for i in range(1, r + 1):
        H = h_series(law, r, i, minus)
        assign = {s: c for s, c in zip(_s_names(r), classes)}
        assign["x"] = lc
        out.append(substitute(H, assign, target=algebra))
    return out


def chern_twist(E, lc):
    """Chern data of ``E ⊗ L`` from ``c_1(L) = lc``."""
    lc = E.algebra(lc)
    _check_nilpotent(lc)
    if E.rank == 0:
        return E
    classes = _eval_h(E.law, E.rank, E.classes, lc, False, E.algebra)
    roots = None
    if E.roots is not None:
        roots = [E.law(s, lc) for s in E.roots]
    out = ChernVector(E.law, E.algebra, classes=classes)
    out.roots = tuple(roots) if roots is not None else None
    return out


def chern_untwist(E, lc):
    """Inverse of :func:`chern_twist`: recover ``E`` from ``E ⊗ L``."""
    lc = E.algebra(lc)
    _check_nilpotent(lc)
    if E.rank == 0:
        return E
    classes = _eval_h(E.law, E.rank, E.classes, lc, True, E.algebra)
    out = ChernVector(E.law, E.algebra, classes=classes)
    if E.roots is not None:
        out.roots = tuple(E.law.minus(s, lc) for s in E.roots)
    return out


def whitney_sum(E, F):
    if E.algebra != F.algebra:
        raise ValueError("bundles live in different algebras")
    if E.roots is not None and F.roots is not None:
        return ChernVector(E.law, E.algebra, roots=E.roots + F.roots)
    r = E.rank + F.rank
    classes = []
    for k in range(1, r + 1):
        acc = E.algebra.zero
        for i in range(0, k + 1):
            acc = acc + E.c(i) * F.c(k - i)
        classes.append(acc)
    return ChernVector(E.law, E.algebra, classes=classes)


def _required_cap(classes, algebra):
    """Weighted cap needed so that series in ``s_j`` evaluate exactly."""
    ratio = inf
    for j, c in enumerate(classes, start=1):
        o = c.order()
        if o != inf:
            ratio = min(ratio, Fraction(o, j))
    if ratio == inf:
        return 0
    return ceil((algebra.cap + 1) / ratio) - 1


def symmetric_apply(E, per_root, combine="prod", cap=None):
    """Evaluate ``Π per_root(root)`` (or ``Σ``) on the Chern data of ``E``.

    ``per_root`` maps a series to a series.  With Chern roots this is direct;
    otherwise the symmetric expression is rewritten in ``s_1..s_r`` at a cap
    large enough for the given classes and then evaluated.
    """
    A = E.algebra
    if E.roots is not None:
        vals = [per_root(s) for s in E.roots]
        out = A.one if combine == "prod" else A.zero
        for v in vals:
            out = out * v if combine == "prod" else out + v
        return out
    r = E.rank
    if cap is None:
        cap = _required_cap(E.classes, A)
    P = SeriesRing(A.ring, _mu_names(r), cap)
    out = P.one if combine == "prod" else P.zero
    for m in _mu_names(r):
        v = per_root(P.gen(m))
        out = out * v if combine == "prod" else out + v
    H = sym_reduce(out, _mu_names(r), _s_names(r))
    return substitute(H, dict(zip(_s_names(r), E.classes)), target=A)


def dual(E):
    """``E^∨``: roots go to ``ι(roots)``."""
    if E.rank == 0:
        return E
    law = E.law
    if E.roots is not None:
        return ChernVector(law, E.algebra, roots=[law.iota(s) for s in E.roots])
    if E.rank == 1:
        return ChernVector(law, E.algebra, classes=[law.iota(E.classes[0])])
    r = E.rank
    P = SeriesRing(law.ring, _mu_names(r), law.cap)
    vals = [law.iota(P.gen(m)) for m in _mu_names(r)]
    classes = []
    for e in elementary_symmetric(vals, P)[1:]:
        H = sym_reduce(e, _mu_names(r), _s_names(r))
        classes.append(substitute(H, dict(zip(_s_names(r), E.classes)), target=E.algebra))
    return ChernVector(law, E.algebra, classes=classes)


def tensor_product(E, F):
    """``E ⊗ F`` via Chern roots ``F(u_i, v_j)`` (or a twist when one has rank 1)."""
    law = E.law
    if E.roots is not None and F.roots is not None:
        return ChernVector(law, E.algebra, roots=[law(u, v) for u in E.roots for v in F.roots])
    if F.rank == 1:
        return chern_twist(E, F.classes[0])
    if E.rank == 1:
        return chern_twist(F, E.classes[0])
    raise ValueError("tensor product of higher-rank bundles needs Chern roots")


# -- Todd classes and twisted first Chern classes ------------------------------


def _per_root_b(t, ring):
    b = t.b_series()
    if b.ring != ring:
        b = promote(b, ring)
    return lambda s: substitute(b, {"x": s})


def todd_inverse(t, E):
    """``Td⁻¹_τ(E) = Π_j Σ_i b_i root_j^i``."""
    if E.rank == 0:
        return E.algebra.one
    return symmetric_apply(E, _per_root_b(t, E.algebra.ring), "prod")


def todd_inverse_qs(t, C):
    """``Td⁻¹_τ(E0^∨) / Td⁻¹_τ(E1^∨)`` for the complex ``C = [E1 -> E0]``."""
    num = todd_inverse(t, dual(C.E0))
    den = todd_inverse(t, dual(C.E1))
    return num * den.inverse()


def twisted_first_chern(t, c1, convention="remark"):
    """First Chern class in the twisted orientation.

    ``remark`` (default) gives ``g(c1)``.  ``lemma`` gives the expansion
    ``Σ b_i c1^(i+1)``, that is ``c1 · b(c1)``.
    """
    if convention == "remark":
        return t(c1)
    if convention == "lemma":
        return c1 * _per_root_b(t, c1.ring)(c1)
    raise ValueError(f"unknown convention {convention!r}")


# -- K-theory and the Chern character ------------------------------------------


def k_class_of_bundle(E):
    """``r(E) + a11 · c1(E^∨)``, with ``a11`` read off the law."""
    a11 = E.law.coefficient(1, 1)
    if E.rank == 0:
        return E.algebra.zero
    return E.algebra.const(E.rank) + dual(E).classes[0].scale(a11)


def cobordism_class_of_k(combination):
    """Linear extension of :func:`k_class_of_bundle` to ``Σ coeff · [E]``.

    ``combination`` is a list of ``(coefficient, ChernVector)`` pairs; a
    coefficient may be an int, a rational or an element of the ring (so
    ``β⁻¹`` is allowed over ``ZZ[β, β⁻¹]``).
    """
    out = None
    for coeff, E in combination:
        term = k_class_of_bundle(E).scale(E.algebra.ring(coeff) if not hasattr(coeff, "ring") else coeff)
        out = term if out is None else out + term
    if out is None:
        raise ValueError("empty combination")
    return out


def chern_character(E):
    """``ch(E) = Σ exp(root)``, using ``ch(L) = e^{c1(L)}``."""
    if E.algebra.ring.domain != "QQ":
        raise ValueError("the Chern character needs a QQ coefficient ring")
    if E.rank == 0:
        return E.algebra.zero
    return symmetric_apply(E, series_exp, "sum")


def universal_symmetric_series(r, per_root, ring, cap, combine="prod"):
    """``Π per_root(μ_j)`` (or ``Σ``) written in ``s_1..s_r`` with ``deg s_j = j``."""
    P = SeriesRing(ring, _mu_names(r), cap)
    out = P.one if combine == "prod" else P.zero
    for m in _mu_names(r):
        v = per_root(P.gen(m))
        out = out * v if combine == "prod" else out + v
    return sym_reduce(out, _mu_names(r), _s_names(r))


def todd_inverse_series(t, r):
    """``Td⁻¹_τ`` of a rank ``r`` bundle in terms of its Chern classes."""
    b = t.b_series()
    return universal_symmetric_series(r, lambda s: substitute(b, {"x": s}), b.ring, b.cap)


def character_series(r, cap):
    """``ch`` of a rank ``r`` bundle in terms of its Chern classes, over QQ."""
    return universal_symmetric_series(r, series_exp, QQ, cap, combine="sum")
