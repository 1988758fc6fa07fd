"""Two bivariant theories on the finite-set site.

``SpanTheory`` is the universal theory: ``M(X -> Y)`` is free abelian on
isomorphism classes of spans ``V -> X``, and such a class is pinned down by
its fiber-size function ``X -> N``.  ``MultTheory`` is a concrete target
whose elements are integer functions on ``X``; ``to_target`` is the
canonical transformation between them.
"""
from .site import FinMap, fibre_product, identity

DEGREE = 0  # finite sets carry no dimension; every class sits in degree 0


def _check_base(base):
    if not isinstance(base, FinMap):
        raise TypeError("base must be a FinMap")


class SpanCycle:
    """A ℤ-combination of spans over ``base: X -> Y``."""

    __slots__ = ("base", "terms")

    def __init__(self, base, terms=None):
        _check_base(base)
        out = {}
        for fibers, c in (terms or {}).items():
            fibers = tuple(int(k) for k in fibers)
            if len(fibers) != base.src or any(k < 0 for k in fibers):
                raise ValueError(f"fiber function {fibers} does not fit a {base.src}-element source")
            if c:
                out[fibers] = out.get(fibers, 0) + c
        self.base = base
        self.terms = {k: v for k, v in out.items() if v}

    @property
    def degree(self):
        return DEGREE

    def __add__(self, other):
        if self.base != other.base:
            raise ValueError("cannot add cycles over different maps")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return SpanCycle(self.base, terms)

    def __neg__(self):
        return SpanCycle(self.base, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SpanCycle(self.base, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, SpanCycle) and self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash((self.base, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        body = " + ".join(f"{c}*{list(k)}" for k, c in sorted(self.terms.items())) or "0"
        return f"SpanCycle({list(self.base.values)} -> {self.base.dst}: {body})"

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "degree": self.degree,
            "terms": [{"fibers": list(k), "coeff": c} for k, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(FinMap.from_json(obj["base"]), {tuple(t["fibers"]): t["coeff"] for t in obj["terms"]})


class MultFn:
    """An integer function on the source of ``base``."""

    __slots__ = ("base", "values")

    def __init__(self, base, values):
        _check_base(base)
        values = tuple(int(v) for v in values)
        if len(values) != base.src:
            raise ValueError("one value per source element")
        self.base = base
        self.values = values

    def __add__(self, other):
        if self.base != other.base:
            raise ValueError("cannot add functions over different maps")
        return MultFn(self.base, [a + b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return MultFn(self.base, [-a for a in self.values])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return MultFn(self.base, [c * a for a in self.values])

    def __eq__(self, other):
        return isinstance(other, MultFn) and self.base == other.base and self.values == other.values

    def __hash__(self):
        return hash((self.base, self.values))

    def __bool__(self):
        return any(self.values)

    def __repr__(self):
        return f"MultFn({list(self.base.values)} -> {self.base.dst}: {list(self.values)})"

    def to_json(self):
        return {"base": self.base.to_json(), "values": list(self.values)}


def _check_factor(g, new_base, base):
    if g.src != base.src or new_base.src != g.dst or new_base.dst != base.dst:
        raise ValueError("pushforward maps do not fit the cycle")
    if new_base.compose(g) != base:
        raise ValueError("pushforward needs new_base ∘ g == base")


class SpanTheory:
    """Operations of the universal theory on :class:`SpanCycle`."""

    name = "M"

    def zero(self, base):
        return SpanCycle(base)

    def generator(self, base, fibers, coeff=1):
        return SpanCycle(base, {tuple(fibers): coeff})

    def pushforward(self, c, g, new_base):
        """``g_*``: ``[V -> X]`` becomes ``[V -> X']`` over ``new_base``."""
        _check_factor(g, new_base, c.base)
        terms = {}
        for fibers, k in c.terms.items():
            out = [0] * g.dst
            for x, n in enumerate(fibers):
                out[g(x)] += n
            key = tuple(out)
            terms[key] = terms.get(key, 0) + k
        return SpanCycle(new_base, terms)

    def pullback(self, c, h):
        """``h^*`` along ``h: Y' -> Y``; lives over ``X ×_Y Y' -> Y'``."""
        fp = fibre_product(c.base, h)
        terms = {}
        for fibers, k in c.terms.items():
            key = tuple(fibers[x] for x, _ in fp.pairs)
            terms[key] = terms.get(key, 0) + k
        return SpanCycle(fp.p2, terms)

    def product(self, a, b):
        """``a • b`` for ``a`` over ``X -> Y`` and ``b`` over ``Y -> Z``."""
        f = a.base
        if f.dst != b.base.src:
            raise ValueError("cycles are not composable")
        terms = {}
        for fa, ka in a.terms.items():
            for fb, kb in b.terms.items():
                key = tuple(fa[x] * fb[f(x)] for x in range(f.src))
                terms[key] = terms.get(key, 0) + ka * kb
        return SpanCycle(b.base.compose(f), terms)

    def theta(self, f):
        return SpanCycle(f, {(1,) * f.src: 1})

    def unit(self, n):
        return self.theta(identity(n))

    def transport(self, c, sigma, new_base):
        """Relabel the source along a bijection ``sigma: X -> X~``."""
        if not sigma.is_injective() or sigma.src != sigma.dst:
            raise ValueError("transport needs a bijection")
        if new_base.compose(sigma) != c.base:
            raise ValueError("transport does not respect the base maps")
        terms = {}
        for fibers, k in c.terms.items():
            out = [0] * sigma.dst
            for x, n in enumerate(fibers):
                out[sigma(x)] = n
            terms[tuple(out)] = k
        return SpanCycle(new_base, terms)

    def random_element(self, rng, base, max_fiber, max_terms=2, max_coeff=3):
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            fibers = tuple(rng.randint(0, max_fiber) for _ in range(base.src))
            terms[fibers] = terms.get(fibers, 0) + rng.choice(
                [c for c in range(-max_coeff, max_coeff + 1) if c]
            )
        return SpanCycle(base, terms)


class CorruptedProductTheory(SpanTheory):
    """Mutation: the product reads ``b`` at ``x mod |Y|`` instead of ``f(x)``."""

    name = "M[corrupt-product]"

    def product(self, a, b):
        f = a.base
        if f.dst != b.base.src:
            raise ValueError("cycles are not composable")
        ny = max(f.dst, 1)
        terms = {}
        for fa, ka in a.terms.items():
            for fb, kb in b.terms.items():
                key = tuple(fa[x] * fb[x % ny] for x in range(f.src))
                terms[key] = terms.get(key, 0) + ka * kb
        return SpanCycle(b.base.compose(f), terms)


class CorruptedPullbackTheory(SpanTheory):
    """Mutation: a point with several preimages keeps its fiber only once."""

    name = "M[corrupt-pullback]"

    def pullback(self, c, h):
        fp = fibre_product(c.base, h)
        terms = {}
        for fibers, k in c.terms.items():
            seen = set()
            key = []
            for x, _ in fp.pairs:
                key.append(0 if x in seen else fibers[x])
                seen.add(x)
            key = tuple(key)
            terms[key] = terms.get(key, 0) + k
        return SpanCycle(fp.p2, terms)


MUTATIONS = {
    "product": CorruptedProductTheory,
    "pullback": CorruptedPullbackTheory,
}


class MultTheory:
    """Operations of the multiplicity-function target theory."""

    name = "T"

    def zero(self, base):
        return MultFn(base, [0] * base.src)

    def pushforward(self, m, g, new_base):
        _check_factor(g, new_base, m.base)
        out = [0] * g.dst
        for x, v in enumerate(m.values):
            out[g(x)] += v
        return MultFn(new_base, out)

    def pullback(self, m, h):
        fp = fibre_product(m.base, h)
        return MultFn(fp.p2, [m.values[x] for x, _ in fp.pairs])

    def product(self, m, n):
        f = m.base
        if f.dst != n.base.src:
            raise ValueError("functions are not composable")
        return MultFn(n.base.compose(f), [m.values[x] * n.values[f(x)] for x in range(f.src)])

    def theta(self, f):
        return MultFn(f, [1] * f.src)

    def unit(self, n):
        return self.theta(identity(n))

    def transport(self, m, sigma, new_base):
        if new_base.compose(sigma) != m.base:
            raise ValueError("transport does not respect the base maps")
        out = [0] * sigma.dst
        for x, v in enumerate(m.values):
            out[sigma(x)] = v
        return MultFn(new_base, out)

    def random_element(self, rng, base, max_fiber, max_terms=2, max_coeff=3):
        return to_target(SpanTheory().random_element(rng, base, max_fiber, max_terms, max_coeff))


def to_target(c):
    """The Grothendieck transformation ``[V -> X] ↦ (x ↦ |fiber over x|)``."""
    vals = [0] * c.base.src
    for fibers, k in c.terms.items():
        for x, n in enumerate(fibers):
            vals[x] += k * n
    return MultFn(c.base, vals)


# module-level conveniences mirroring the operation names

_M = SpanTheory()
_T = MultTheory()


def m_pushforward(c, g, new_base):
    return _M.pushforward(c, g, new_base)


def m_pullback(c, h):
    return _M.pullback(c, h)


def m_product(a, b):
    return _M.product(a, b)


def theta(f):
    return _M.theta(f)


def unit(n):
    return _M.unit(n)


def t_pushforward(m, g, new_base):
    return _T.pushforward(m, g, new_base)


def t_pullback(m, h):
    return _T.pullback(m, h)


def t_product(m, n):
    return _T.product(m, n)
