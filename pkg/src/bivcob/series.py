"""Truncated multivariate power series over a :class:`GradedRing`.

A :class:`SeriesRing` fixes the coefficient ring, an ordered tuple of
variables, a positive degree for each variable and a cap ``N``: terms whose
weighted degree exceeds ``N`` are dropped.  Optional per-variable exponent
bounds turn the parent into a nilpotent algebra such as
``R[x1, x2] / (x1^3, x2^2)``.

Truncation is contagious.  Combining series whose parents differ only in
their caps yields a result at the smaller cap, and :func:`substitute` lowers
the cap when the substituted series cannot guarantee the full precision.
"""
from fractions import Fraction
from math import ceil, factorial, inf

from .exactalg.ring import GradedRing, RingElement
from .exactalg.syntax import format_monomial, format_sum, parse_terms


class IncompatibleSeries(ValueError):
    pass


class PrecisionError(ValueError):
    """The requested operation cannot be carried out to the required cap."""


class NotSymmetricError(ValueError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class SeriesRing:
    """Parent object for :class:`Series`."""

    def __init__(self, ring, vars, cap, degrees=None, bounds=None):
        if not isinstance(ring, GradedRing):
            raise TypeError("ring must be a GradedRing")
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError("duplicate series variables")
        clash = set(vars) & set(ring.names)
        if clash:
            raise ValueError(f"series variables clash with ring generators: {sorted(clash)}")
        self.ring = ring
        self.vars = vars
        self.nvars = len(vars)
        self.cap = int(cap)
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(vars)
        if len(self.degrees) != len(vars) or any(d < 1 for d in self.degrees):
            raise ValueError("every variable needs a positive degree")
        if bounds is not None:
            bounds = tuple(bounds)
            if len(bounds) != len(vars):
                raise ValueError("bounds must match variables")
            if all(b is None for b in bounds):
                bounds = None
        self.bounds = bounds
        self.index = {v: i for i, v in enumerate(vars)}
        self._zero_exp = (0,) * len(vars)

    def _key(self):
        return (self.ring, self.vars, self.cap, self.degrees, self.bounds)

    def __eq__(self, other):
        return self is other or (isinstance(other, SeriesRing) and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"SeriesRing({self.vars}, cap={self.cap}, over {self.ring!r})"

    def with_cap(self, cap):
        if cap == self.cap:
            return self
        return SeriesRing(self.ring, self.vars, cap, self.degrees, self.bounds)

    def with_ring(self, ring):
        return SeriesRing(ring, self.vars, self.cap, self.degrees, self.bounds)

    def exp_degree(self, e):
        return sum(a * d for a, d in zip(e, self.degrees))

    def admits(self, e):
        if self.exp_degree(e) > self.cap:
            return False
        if self.bounds is not None:
            for a, b in zip(e, self.bounds):
                if b is not None and a > b:
                    return False
        return True

    def element(self, terms):
        """Build from ``{exponent tuple: coefficient}``; truncates and drops zeros."""
        ring = self.ring
        out = {}
        for e, c in terms.items():
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            if not self.admits(e):
                continue
            c = ring(c) if not isinstance(c, RingElement) else c
            if c:
                out[e] = c
        return Series(self, out)

    @property
    def zero(self):
        return Series(self, {})

    @property
    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.ring(c)
        return Series(self, {self._zero_exp: c} if c else {})

    def gen(self, name):
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return self.element({tuple(e): 1})

    def gens(self):
        return [self.gen(v) for v in self.vars]

    def __call__(self, value):
        if isinstance(value, Series):
            return _coerce_parent(value, self)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def parse(self, text):
        """Text syntax mixing series variables and ring generators."""
        ring = self.ring
        terms = {}
        for c, powers in parse_terms(text):
            e = [0] * self.nvars
            rpow = {}
            for name, k in powers.items():
                if name in self.index:
                    e[self.index[name]] += k
                else:
                    rpow[name] = k
            coeff = ring.element({ring._mono_from_powers(rpow): c})
            key = tuple(e)
            terms[key] = terms.get(key, ring.zero) + coeff
        return self.element(terms)

    def from_json(self, obj):
        terms = {}
        for t in obj["terms"]:
            e = [0] * self.nvars
            for name, k in t.get("exponents", {}).items():
                e[self.index[name]] += int(k)
            key = tuple(e)
            terms[key] = terms.get(key, self.ring.zero) + self.ring.from_json(t["coeff"])
        return self.element(terms)


def _coerce_parent(s, parent):
    """Re-home ``s`` in ``parent`` (same ring; variables matched by name)."""
    if s.parent == parent:
        return s
    if s.parent.ring != parent.ring:
        raise IncompatibleSeries("coefficient rings differ")
    idx = []
    for v in s.parent.vars:
        if v not in parent.index:
            if any(e[s.parent.index[v]] for e in s.terms):
                raise IncompatibleSeries(f"variable {v!r} missing from target")
            idx.append(None)
        else:
            idx.append(parent.index[v])
    out = {}
    for e, c in s.terms.items():
        ne = [0] * parent.nvars
        for k, a in zip(idx, e):
            if k is not None:
                ne[k] = a
        out[tuple(ne)] = c
    return parent.element(out)


def _common_parent(a, b):
    pa, pb = a.parent, b.parent
    if pa is pb or pa == pb:
        return pa
    if (pa.ring, pa.vars, pa.degrees, pa.bounds) == (pb.ring, pb.vars, pb.degrees, pb.bounds):
        return pa if pa.cap <= pb.cap else pb
    raise IncompatibleSeries(f"incompatible series parents: {pa!r} and {pb!r}")


class Series:
    """An element of a :class:`SeriesRing`.  Coefficients are in normal form."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent, terms):
        self.parent = parent
        self.terms = terms

    @property
    def ring(self):
        return self.parent.ring

    @property
    def cap(self):
        return self.parent.cap

    def _lift(self, other):
        if isinstance(other, Series):
            P = _common_parent(self, other)
            return P, self.recap(P.cap), other.recap(P.cap)
        return self.parent, self, self.parent.const(other)

    def recap(self, cap):
        """Truncate to a smaller cap (never raises precision)."""
        if cap >= self.parent.cap:
            return self
        P = self.parent.with_cap(cap)
        return Series(P, {e: c for e, c in self.terms.items() if P.exp_degree(e) <= cap})

    def __add__(self, other):
        try:
            P, a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Series(P, out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.parent, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.ring(c) if not isinstance(c, RingElement) else c
        out = {}
        for e, v in self.terms.items():
            p = v * c
            if p:
                out[e] = p
        return Series(self.parent, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElement)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        P = _common_parent(self, other)
        return Series(P, _mul_terms(P, self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.ring.domain != "QQ":
                raise ValueError("division by a number needs a QQ coefficient ring")
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, Series):
            return self * other.inverse()
        return self.scale(self.ring.inverse(other))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.parent.one
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Series):
            try:
                P, a, b = self._lift(other)
            except IncompatibleSeries:
                return False
            return a.terms == b.terms
        if isinstance(other, (int, Fraction, RingElement)):
            return self.terms == self.parent.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.parent, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------------

    def coeff(self, exps=None, **powers):
        """Coefficient of a monomial given as a tuple or by variable name."""
        if exps is None:
            exps = powers
        if isinstance(exps, dict):
            e = [0] * self.parent.nvars
            for v, k in exps.items():
                e[self.parent.index[v]] = k
            exps = tuple(e)
        return self.terms.get(tuple(exps), self.ring.zero)

    def constant(self):
        return self.coeff(self.parent._zero_exp)

    def order(self):
        """Smallest weighted degree of a nonzero term (``inf`` for zero)."""
        if not self.terms:
            return inf
        return min(self.parent.exp_degree(e) for e in self.terms)

    def degree(self):
        if not self.terms:
            return -1
        return max(self.parent.exp_degree(e) for e in self.terms)

    def homogeneous_part(self, d):
        P = self.parent
        return Series(P, {e: c for e, c in self.terms.items() if P.exp_degree(e) == d})

    def is_weighted_homogeneous(self, weight, var_weight=-1):
        """Check ``weight(coeff) + var_weight * degree == weight`` for every term."""
        P = self.parent
        for e, c in self.terms.items():
            if not c.is_homogeneous(weight - var_weight * P.exp_degree(e)):
                return False
        return True

    def map_coefficients(self, hom, parent=None):
        """Apply a ring homomorphism to every coefficient."""
        P = parent or self.parent.with_ring(hom.dst)
        return P.element({e: hom(c) for e, c in self.terms.items()})

    def diff(self, var):
        P = self.parent
        k = P.index[var]
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return P.element(out)

    def integrate(self, var):
        """Antiderivative with zero constant; the cap grows by ``deg(var)``."""
        P = self.parent
        if P.ring.domain != "QQ":
            raise ValueError("integration needs a QQ coefficient ring")
        k = P.index[var]
        Q = P.with_cap(P.cap + P.degrees[k])
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] += 1
            out[tuple(ne)] = c * Fraction(1, ne[k])
        return Q.element(out)

    def inverse(self):
        """Multiplicative inverse; the constant term must be a unit."""
        c0 = self.constant()
        if not c0:
            raise ValueError("series with zero constant term is not invertible")
        u = self.ring.inverse(c0)
        t = self.parent.one - self.scale(u)
        out = self.parent.one
        power = self.parent.one
        while True:
            power = power * t
            if not power:
                break
            out = out + power
        return out.scale(u)

    def sorted_terms(self):
        P = self.parent
        return sorted(self.terms.items(), key=lambda it: (P.exp_degree(it[0]), tuple(-a for a in it[0])))

    def __str__(self):
        P = self.parent
        ring = P.ring
        pieces = []
        for e, c in self.sorted_terms():
            vm = format_monomial(list(zip(P.vars, e)))
            if len(c.terms) == 1:
                (m, k), = c.terms.items()
                rm = format_monomial([(ring.names[i], a) for i, a in enumerate(m)])
                mono = "*".join(x for x in (rm, vm) if x)
                pieces.append((k, mono))
            else:
                pieces.append((1, f"({c})" + (f"*{vm}" if vm else "")))
        return format_sum(pieces)

    __repr__ = __str__

    def to_json(self):
        P = self.parent
        return {
            "vars": list(P.vars),
            "cap": P.cap,
            "text": str(self),
            "terms": [
                {"exponents": {v: a for v, a in zip(P.vars, e) if a}, "coeff": c.to_json()}
                for e, c in self.sorted_terms()
            ],
        }


def _mul_terms(P, a, b):
    ring = P.ring
    degs = P.degrees
    cap = P.cap
    bounds = P.bounds
    la = [(e, sum(x * d for x, d in zip(e, degs)), c.terms) for e, c in a.items()]
    lb = [(e, sum(x * d for x, d in zip(e, degs)), c.terms) for e, c in b.items()]
    lb.sort(key=lambda t: t[1])
    acc = {}
    mul_into = ring.mul_into
    for e1, d1, c1 in la:
        room = cap - d1
        for e2, d2, c2 in lb:
            if d2 > room:
                break
            e = tuple(x + y for x, y in zip(e1, e2))
            if bounds is not None and any(b_ is not None and x > b_ for x, b_ in zip(e, bounds)):
                continue
            raw = acc.get(e)
            if raw is None:
                raw = acc[e] = {}
            mul_into(raw, c1, c2)
    out = {}
    for e, raw in acc.items():
        nf = ring.nf(raw)
        if nf:
            out[e] = RingElement(ring, nf)
    return out


# -- composition ---------------------------------------------------------------


def substitute(f, assignments, target=None, polynomial=False, strict=False):
    """Compose: replace variables of ``f`` by series in a common parent.

    Variables of ``f`` not named in ``assignments`` map to the same-named
    variable of the target.  The result is only claimed up to the degree the
    inputs determine: if some substituted series has low order relative to
    its variable's degree, the result's cap drops accordingly (or
    :class:`PrecisionError` is raised when ``strict``).  ``polynomial=True``
    declares ``f`` exact, which permits substituting series with a nonzero
    constant term.
    """
    P = f.parent
    vals = {}
    for v, g in assignments.items():
        if v not in P.index:
            raise KeyError(f"{v!r} is not a variable of the series")
        vals[v] = g
    if target is None:
        series_vals = [g for g in vals.values() if isinstance(g, Series)]
        if not series_vals:
            target = P
        else:
            target = series_vals[0].parent
            for g in series_vals[1:]:
                g0 = series_vals[0].recap(g.cap)
                target = _common_parent(g0, g.recap(g0.cap)).with_cap(min(target.cap, g.cap))
    if target.ring != P.ring:
        raise IncompatibleSeries("substitution across different coefficient rings")
    images = []
    ratio = inf
    for v, dv in zip(P.vars, P.degrees):
        if v in vals:
            g = vals[v]
            if isinstance(g, Series):
                g = _coerce_parent(g, target.with_cap(g.cap))
            else:
                g = target.const(g)
        else:
            if v not in target.index:
                raise IncompatibleSeries(f"unassigned variable {v!r} missing from target")
            g = target.gen(v)
        o = g.order()
        if o == 0 and not polynomial:
            raise ValueError(f"series with nonzero constant term substituted for {v!r} in a truncated series")
        if o != inf:
            ratio = min(ratio, Fraction(o, dv))
        images.append(g)
    if polynomial or ratio == inf:
        valid = inf
    else:
        valid = ceil((P.cap + 1) * ratio) - 1
    cap = min([target.cap, valid] + [g.cap for g in images])
    if strict and cap < target.cap:
        raise PrecisionError(
            f"substitution determines the result only to degree {cap}, below cap {target.cap}"
        )
    T = target.with_cap(cap)
    images = [_coerce_parent(g.recap(cap), T) for g in images]
    orders = [g.order() for g in images]
    memo = {P._zero_exp: T.one}

    def power_product(e):
        got = memo.get(e)
        if got is not None:
            return got
        k = max(i for i, a in enumerate(e) if a)
        prev = list(e)
        prev[k] -= 1
        val = power_product(tuple(prev)) * images[k]
        memo[e] = val
        return val

    out = T.zero
    for e, c in sorted(f.terms.items()):
        low = sum(a * o for a, o in zip(e, orders) if a)
        if low > cap:
            continue
        out = out + power_product(e).scale(c)
    return out


def compose1(f, g):
    """``f(g)`` for one-variable series sharing a parent."""
    (v,) = f.parent.vars
    return substitute(f, {v: g})


def reversion(g):
    """Compositional inverse of a one-variable series ``u*x + O(x^2)``."""
    P = g.parent
    if P.nvars != 1:
        raise ValueError("reversion needs a one-variable series")
    (x,) = P.vars
    if g.constant():
        raise ValueError("reversion needs a zero constant term")
    u = g.coeff((1,))
    if not u:
        raise ValueError("reversion needs a nonzero linear coefficient")
    try:
        uinv = P.ring.inverse(u)
    except ValueError as exc:
        raise ValueError(f"linear coefficient {u} is not invertible") from exc
    X = P.gen(x)
    h = X.scale(uinv)
    for d in range(2, P.cap + 1):
        err = compose1(g, h) - X
        c = err.coeff((d,))
        if c:
            h = h - P.element({(d,): c * uinv})
    return h


# -- exponential and logarithm over QQ -----------------------------------------


def _require_qq(ring):
    if ring.domain != "QQ":
        raise ValueError("exp/log need a QQ coefficient ring (tensor with QQ first)")


def series_exp(f):
    """``exp(f)`` for ``f`` with zero constant term."""
    _require_qq(f.ring)
    if f.constant():
        raise ValueError("exp needs a zero constant term")
    out = f.parent.one
    power = f.parent.one
    k = 0
    while True:
        k += 1
        power = power * f
        if not power:
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def series_log1p(f):
    """``log(1 + f)`` for ``f`` with zero constant term."""
    _require_qq(f.ring)
    if f.constant():
        raise ValueError("log1p needs a zero constant term")
    out = f.parent.zero
    power = f.parent.one
    k = 0
    while True:
        k += 1
        power = power * f
        if not power:
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def exp_series(parent, var=None):
    """``e^x - 1`` in the given one-variable parent."""
    var = var or parent.vars[0]
    return series_exp(parent.gen(var)) - 1


def log_series(parent, var=None):
    """``log(1 + x)``."""
    var = var or parent.vars[0]
    return series_log1p(parent.gen(var))


# -- symmetric functions -------------------------------------------------------


def elementary_symmetric(xs, parent=None):
    """``[e_0, e_1, ..., e_r]`` of the given series."""
    if parent is None:
        parent = xs[0].parent
    E = [parent.one]
    for s in xs:
        new = E + [parent.zero]
        for k in range(len(E), 0, -1):
            new[k] = new[k] + s * E[k - 1]
        E = new
    return E


def _is_symmetric(f, idx):
    for a, b in zip(idx, idx[1:]):
        for e, c in f.terms.items():
            t = list(e)
            t[a], t[b] = t[b], t[a]
            if f.terms.get(tuple(t)) != c:
                return (a, b)
    return None


def sym_reduce(f, sym_vars, s_names=None):
    """Rewrite a series symmetric in ``sym_vars`` via elementary symmetric functions.

    Returns a series in ``s_1..s_r`` followed by the remaining variables of
    ``f``.  The ``s_j`` carry degree ``j * d`` where ``d`` is the common
    degree of the symmetric variables, so the cap is preserved exactly.
    """
    P = f.parent
    sym_vars = list(sym_vars)
    r = len(sym_vars)
    idx = [P.index[v] for v in sym_vars]
    d = {P.degrees[i] for i in idx}
    if len(d) != 1:
        raise ValueError("symmetric variables must share a degree")
    d = d.pop()
    bad = _is_symmetric(f, idx)
    if bad is not None:
        names = (P.vars[bad[0]], P.vars[bad[1]])
        raise NotSymmetricError(f"series is not symmetric under swapping {names[0]} and {names[1]}", names)
    s_names = list(s_names) if s_names else [f"s{j}" for j in range(1, r + 1)]
    extra = [i for i in range(P.nvars) if i not in idx]
    out_vars = s_names + [P.vars[i] for i in extra]
    out_deg = [d * j for j in range(1, r + 1)] + [P.degrees[i] for i in extra]
    out_bounds = None
    if P.bounds is not None:
        out_bounds = [None] * r + [P.bounds[i] for i in extra]
    Q = SeriesRing(P.ring, out_vars, P.cap, out_deg, out_bounds)
    ring = P.ring

    # elementary symmetric polynomials in the mu-exponent space, as int dicts
    def e_poly(j):
        out = {}
        from itertools import combinations

        for combo in combinations(range(r), j):
            e = [0] * r
            for k in combo:
                e[k] = 1
            out[tuple(e)] = 1
        return out

    elem = [None] + [e_poly(j) for j in range(1, r + 1)]
    cache = {}

    def mul(a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in out.items() if c}

    def expansion(lead):
        # prod_j e_j^(a_j - a_{j+1})
        if lead in cache:
            return cache[lead]
        poly = {(0,) * r: 1}
        a = list(lead) + [0]
        for j in range(1, r + 1):
            for _ in range(a[j - 1] - a[j]):
                poly = mul(poly, elem[j])
        cache[lead] = poly
        return poly

    # work on (mu part, extra part) -> coefficient
    work = {}
    for e, c in f.terms.items():
        mu = tuple(e[i] for i in idx)
        ex = tuple(e[i] for i in extra)
        work[(mu, ex)] = c
    result = {}
    while work:
        lead = max(mu for mu, _ in work)
        heads = [(ex, work[(mu, ex)]) for (mu, ex) in list(work) if mu == lead]
        s_exp = tuple(lead[j] - (lead[j + 1] if j + 1 < r else 0) for j in range(r))
        poly = expansion(lead)
        for ex, c in heads:
            result[s_exp + ex] = c
            for mu, k in poly.items():
                key = (mu, ex)
                v = work.get(key, ring.zero) - c * k
                if v:
                    work[key] = v
                else:
                    work.pop(key, None)
    return Q.element(result)


def sym_expand(h, s_names, mu_names, target):
    """Substitute ``s_j -> e_j(mu)``; inverse to :func:`sym_reduce`."""
    mus = [target.gen(m) for m in mu_names]
    E = elementary_symmetric(mus, target)
    assign = {s: E[j + 1] for j, s in enumerate(s_names)}
    return substitute(h, assign, target=target)
