"""Oriented-theory models of products of projective spaces.

A :class:`ProjModel` for dimensions ``(n_1, ..., n_k)`` over a law ``F``
is ``R[x_1..x_k] / (x_i^(n_i+1))`` with ``x_i`` the first Chern class of
``O(1)`` on the ``i``-th factor.  Pushing forward along a factor sends
``x^j`` to ``p_(n-j)``, where ``p_m`` are the coefficients of the
derivative of the law's logarithm.
"""
from fractions import Fraction
from itertools import product
from math import prod

from .chern import ChernVector, TwoTermComplex, chern_character, nilpotent_algebra, todd_inverse_qs
from .exactalg.ring import QQ
from .fgl import additive_fgl, multiplicative_fgl, tau_for_target

MAX_HRR_N = 8
MAX_HRR_D = 8


class ProjModel:
    """``P^(n_1) × ... × P^(n_k)`` over a formal group law."""

    def __init__(self, dims, law, names=None):
        dims = tuple(int(n) for n in dims)
        if any(n < 0 for n in dims):
            raise ValueError("dimensions must be non-negative")
        total = sum(dims)
        if total > law.cap or (dims and max(dims) > law.cap - 1):
            raise ValueError(f"law cap {law.cap} too small for dimensions {dims}")
        self.dims = dims
        self.law = law
        if names is None:
            names = ["x"] if len(dims) == 1 else [f"x{i}" for i in range(1, len(dims) + 1)]
        self.vars = tuple(names)
        self.algebra = nilpotent_algebra(law.ring, self.vars, [n + 1 for n in dims], cap=total)
        self.p = law.pm_coefficients()
        self._check_basis()

    def _check_basis(self):
        basis = self.basis()
        if len(basis) != prod(n + 1 for n in self.dims):
            raise AssertionError("basis has the wrong size")
        for e in basis:
            if not self.algebra.admits(e):
                raise AssertionError(f"basis monomial {e} truncated away")
        for i, n in enumerate(self.dims):
            e = [0] * len(self.dims)
            e[i] = n + 1
            if self.algebra.admits(tuple(e)):
                raise AssertionError("x^(n+1) survives")

    def basis(self):
        return list(product(*[range(n + 1) for n in self.dims]))

    @property
    def rank(self):
        return len(self.basis())

    @property
    def ring(self):
        return self.law.ring

    def gen(self, i=0):
        return self.algebra.gen(self.vars[i])

    def element(self, coeffs):
        """From ``{exponent tuple: coefficient}``."""
        return self.algebra.element(coeffs)

    def coordinates(self, a):
        """Coefficients of ``a`` on the monomial basis."""
        return {e: a.coeff(e) for e in self.basis()}

    def submodel(self, axis):
        self._axis(axis)
        dims = self.dims[:axis] + self.dims[axis + 1:]
        names = self.vars[:axis] + self.vars[axis + 1:]
        return ProjModel(dims, self.law, names)

    def _axis(self, axis):
        if not 0 <= axis < len(self.dims):
            raise IndexError(f"axis {axis} out of range for {len(self.dims)} factors")

    def line_bundle(self, degrees):
        return LineBundleOnModel(self, degrees)

    def pushforward(self, axis, a):
        """Push forward along the projection forgetting factor ``axis``."""
        return proj_pushforward(self, axis, a)

    def pullback(self, axis, a):
        """Pull back an element of ``submodel(axis)`` along the projection."""
        sub = self.submodel(axis)
        if a.parent.vars != sub.vars:
            raise ValueError("element does not live on the submodel")
        out = {}
        for e, c in a.terms.items():
            out[e[:axis] + (0,) + e[axis:]] = c
        return self.algebra.element(out)

    def __repr__(self):
        return f"ProjModel({self.dims}, {self.law.name})"


class LineBundleOnModel:
    """``O(d_1, ..., d_k)``: ``c_1`` is the ``F``-sum of ``[d_i](x_i)``."""

    def __init__(self, model, degrees):
        degrees = tuple(int(d) for d in degrees)
        if len(degrees) != len(model.dims):
            raise ValueError("one degree per factor")
        self.model = model
        self.degrees = degrees
        law = model.law
        A = model.algebra
        c1 = A.zero
        for v, d in zip(model.vars, degrees):
            c1 = law(c1, law.n_eval(d, A.gen(v)))
        self.c1 = c1

    def chern(self):
        return ChernVector.line(self.model.law, self.model.algebra, self.c1)

    def __mul__(self, other):
        return LineBundleOnModel(self.model, [a + b for a, b in zip(self.degrees, other.degrees)])


def proj_pushforward(model, axis, a):
    """``π_*(x^j · α) = p_(n-j) · α`` along factor ``axis``."""
    model._axis(axis)
    n = model.dims[axis]
    sub = model.submodel(axis)
    out = {}
    for e, c in a.terms.items():
        j = e[axis]
        if j > n:
            continue
        key = e[:axis] + e[axis + 1:]
        v = c * model.p[n - j]
        out[key] = out[key] + v if key in out else v
    return sub.algebra.element(out)


def pushforward_to_point(model, a):
    """Collapse every factor; returns a ring element."""
    while model.dims:
        a = proj_pushforward(model, len(model.dims) - 1, a)
        model = model.submodel(len(model.dims) - 1)
    return a.constant()


def linear_embedding_pushforward(src, dst, a):
    """``i_*(g) = g · x^(n-m)`` for a linear ``P^m ⊂ P^n``."""
    if len(src.dims) != 1 or len(dst.dims) != 1:
        raise ValueError("linear embeddings are between single projective spaces")
    m, n = src.dims[0], dst.dims[0]
    if m > n:
        raise ValueError(f"cannot embed P^{m} into P^{n}")
    out = {(e[0] + n - m,): c for e, c in a.terms.items()}
    return dst.algebra.element(out)


def linear_embedding_pullback(src, dst, a):
    """``i^*``: truncate to ``x^(m+1) = 0``."""
    m = src.dims[0]
    return src.algebra.element({e: c for e, c in a.terms.items() if e[0] <= m})


def specialize_element(a, hom, model):
    """Apply a coefficient homomorphism, landing in ``model``."""
    return a.map_coefficients(hom, model.algebra)


# -- Hirzebruch-Riemann-Roch on P^n --------------------------------------------


def binomial_oracle(n, d):
    """``binom(n + d, n)`` as a polynomial in ``d``; valid for negative ``d``."""
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= Fraction(d + k, k)
    return int(out)


def _check_hrr_range(n, d):
    if not 0 <= n <= MAX_HRR_N or abs(d) > MAX_HRR_D:
        raise ValueError(f"need 0 <= n <= {MAX_HRR_N} and |d| <= {MAX_HRR_D}")


def k_side(n, d):
    """``χ(P^n, O(d))`` from the ``β = 1`` multiplicative model.

    ``[O(d)]`` is ``1 - c_1(O(-d))``; pushforward uses ``p_m = 1``.
    """
    _check_hrr_range(n, d)
    law = multiplicative_fgl(n + 1, 1)
    model = ProjModel((n,), law)
    x = model.gen()
    cls = model.algebra.one - law.n_eval(-d, x)
    return int(pushforward_to_point(model, cls).constant())


def ch_side(n, d):
    """``χ(P^n, O(d))`` from ``π_*(ch(O(d)) · Td⁻¹_τ)`` in the additive model.

    ``τ`` is the twist taking the additive law to ``x + y - xy``; the
    cotangent complex of ``P^n`` is ``O(-1)^(n+1) - O``.
    """
    _check_hrr_range(n, d)
    law = additive_fgl(n + 1, QQ)
    t = tau_for_target(additive_fgl(n + 2, QQ), multiplicative_fgl(n + 2, 1, QQ))
    model = ProjModel((n,), law)
    A = model.algebra
    x = model.gen()
    ch = chern_character(model.line_bundle((d,)).chern())
    E0 = ChernVector(law, A, roots=[law.iota(x)] * (n + 1))
    E1 = ChernVector.trivial(law, A, 1)
    td = todd_inverse_qs(t, TwoTermComplex(E0, E1))
    val = pushforward_to_point(model, ch * td).constant()
    if Fraction(val).denominator != 1:
        raise ArithmeticError(f"non-integral Euler characteristic {val}")
    return int(val)


def euler_characteristic(n, d):
    return k_side(n, d)


def grr_check(n, d):
    k = k_side(n, d)
    c = ch_side(n, d)
    b = binomial_oracle(n, d)
    return {"n": n, "d": d, "k_side": k, "ch_side": c, "binomial": b, "agree": k == c == b}


# -- Conner-Floyd consistency ---------------------------------------------------


def conner_floyd_check(dims, a, universal_model, hom, special_law):
    """Push forward then specialize versus specialize then push forward."""
    special = ProjModel(dims, special_law, universal_model.vars)
    left = hom(pushforward_to_point(universal_model, a))
    right = pushforward_to_point(special, specialize_element(a, hom, special))
    return left, right
