"""The finite-set site: objects are sizes ``n`` (the set ``{0..n-1}``).

Every map is confined and specialized and every Cartesian square is
independent.  Fibre products are lists of pairs in lexicographic order.
"""
from dataclasses import dataclass
from itertools import product


@dataclass(frozen=True)
class FinMap:
    src: int
    dst: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.src:
            raise ValueError(f"map from a {self.src}-element set needs {self.src} values")
        if any(not 0 <= v < self.dst for v in self.values):
            raise ValueError(f"values out of range for a {self.dst}-element target")

    def __call__(self, i):
        return self.values[i]

    def compose(self, other):
        """``self ∘ other``."""
        if other.dst != self.src:
            raise ValueError("maps are not composable")
        return FinMap(other.src, self.dst, tuple(self.values[v] for v in other.values))

    def is_injective(self):
        return len(set(self.values)) == len(self.values)

    def to_json(self):
        return {"src": self.src, "dst": self.dst, "values": list(self.values)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["src"], obj["dst"], tuple(obj["values"]))


def identity(n):
    return FinMap(n, n, tuple(range(n)))


def to_point(n):
    return FinMap(n, 1, (0,) * n)


def all_maps(src, dst):
    for vals in product(range(dst), repeat=src):
        yield FinMap(src, dst, vals)


def random_map(rng, src, dst):
    return FinMap(src, dst, tuple(rng.randrange(dst) for _ in range(src)))


@dataclass(frozen=True)
class FibreProduct:
    """``X ×_Z Y`` for ``f: X -> Z`` and ``g: Y -> Z``."""

    pairs: tuple
    p1: FinMap
    p2: FinMap

    @property
    def size(self):
        return len(self.pairs)

    def index(self, x, y):
        return self._lookup[(x, y)]

    @property
    def _lookup(self):
        cached = self.__dict__.get("_lk")
        if cached is None:
            cached = {p: i for i, p in enumerate(self.pairs)}
            object.__setattr__(self, "_lk", cached)
        return cached

    def induced(self, a, b, src):
        """The map ``src -> X ×_Z Y`` from ``a: src -> X`` and ``b: src -> Y``."""
        return FinMap(src, self.size, tuple(self.index(a(i), b(i)) for i in range(src)))


def fibre_product(f, g):
    if f.dst != g.dst:
        raise ValueError("fibre product needs a common target")
    by_z = {}
    for y in range(g.src):
        by_z.setdefault(g(y), []).append(y)
    pairs = tuple((x, y) for x in range(f.src) for y in by_z.get(f(x), ()))
    n = len(pairs)
    p1 = FinMap(n, f.src, tuple(p[0] for p in pairs))
    p2 = FinMap(n, g.src, tuple(p[1] for p in pairs))
    return FibreProduct(pairs, p1, p2)


def is_cartesian(top, left, right, bottom):
    """Check the square ``left ∘ ? = ...`` is Cartesian by counting.

    ``top: X' -> X``, ``left: X' -> Y'``, ``right: X -> Y``,
    ``bottom: Y' -> Y``; the square commutes and ``X'`` maps bijectively
    onto the fibre product.
    """
    if right.compose(top) != bottom.compose(left):
        return False
    fp = fibre_product(right, bottom)
    seen = {(top(i), left(i)) for i in range(top.src)}
    return len(seen) == top.src == fp.size
