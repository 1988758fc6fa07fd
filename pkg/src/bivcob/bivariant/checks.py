"""Property checks for bivariant theories on the finite-set site.

Each check names the sets of a diagram and the maps between them.  A run
first walks every diagram with all set sizes up to ``exhaustive_size``
(elements drawn from a per-diagram seeded generator), then runs seeded
random trials with sizes up to ``max_size``.  The first failure is
reported together with the full diagram so it can be replayed.
"""
import random
from itertools import product

from .site import FinMap, all_maps, fibre_product, identity, random_map, to_point
from .theory import MUTATIONS, MultTheory, SpanTheory, to_target

AXIOMS = ("a12", "a13", "a23", "a123", "commutativity")
ORIENTATION_CHECKS = ("nice", "orientation", "section", "strong", "poincare")
TRANSFORM_CHECKS = ("transform-product", "transform-pushforward", "transform-pullback", "transform-theta")
ALL_CHECKS = AXIOMS + ORIENTATION_CHECKS


class Skip(Exception):
    """The drawn diagram does not satisfy the check's side conditions."""


def _dump(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_dump(v) for v in x]
    return x


# -- individual checks ---------------------------------------------------------
# Each returns ``(lhs, rhs, elements)``; maps come in as a dict by name.


def _a12(T, m, rng, F):
    f, h, k = m["f"], m["h"], m["k"]  # X -f-> Y -h-> Z -k-> W
    alpha = T.random_element(rng, h.compose(f), F)
    beta = T.random_element(rng, k, F)
    lhs = T.pushforward(T.product(alpha, beta), f, k.compose(h))
    rhs = T.product(T.pushforward(alpha, f, h), beta)
    return lhs, rhs, {"alpha": alpha, "beta": beta}


def _a13(T, m, rng, F):
    a, b, h = m["a"], m["b"], m["h"]  # X -a-> Y -b-> Z <-h- Z'
    alpha = T.random_element(rng, a, F)
    beta = T.random_element(rng, b, F)
    lhs = T.pullback(T.product(alpha, beta), h)
    yp = fibre_product(b, h)  # Y' = Y ×_Z Z'
    hb = T.pullback(beta, h)
    ha = T.pullback(alpha, yp.p1)
    rhs = T.product(ha, hb)
    # X ×_Y Y' -> X ×_Z Z' : (x, (y, z')) -> (x, z')
    xz = fibre_product(b.compose(a), h)
    xy = fibre_product(a, yp.p1)
    sigma = FinMap(xy.size, xz.size, tuple(xz.index(x, yp.pairs[j][1]) for x, j in xy.pairs))
    rhs = T.transport(rhs, sigma, xz.p2)
    return lhs, rhs, {"alpha": alpha, "beta": beta}


def _a23(T, m, rng, F):
    f, k, h = m["f"], m["k"], m["h"]  # X -f-> Y -k-> Z <-h- Z'
    alpha = T.random_element(rng, k.compose(f), F)
    lhs = T.pullback(T.pushforward(alpha, f, k), h)
    xz = fibre_product(k.compose(f), h)
    yz = fibre_product(k, h)
    fprime = yz.induced(f.compose(xz.p1), xz.p2, xz.size)
    rhs = T.pushforward(T.pullback(alpha, h), fprime, yz.p2)
    return lhs, rhs, {"alpha": alpha}


def _a123(T, m, rng, F):
    f, g, k = m["f"], m["g"], m["k"]  # X -f-> Y <-g- Y', Y -k-> Z
    alpha = T.random_element(rng, f, F)
    beta = T.random_element(rng, k.compose(g), F)
    xp = fibre_product(f, g)
    lhs = T.pushforward(T.product(T.pullback(alpha, g), beta), xp.p1, k.compose(f))
    rhs = T.product(alpha, T.pushforward(beta, g, k))
    return lhs, rhs, {"alpha": alpha, "beta": beta}


def _commutativity(T, m, rng, F):
    f, g = m["f"], m["g"]  # X -f-> Y <-g- Y'
    alpha = T.random_element(rng, f, F)
    beta = T.random_element(rng, g, F)
    lhs = T.product(T.pullback(alpha, g), beta)
    other = T.product(T.pullback(beta, f), alpha)
    xy = fibre_product(f, g)
    yx = fibre_product(g, f)
    sigma = FinMap(yx.size, xy.size, tuple(xy.index(x, y) for y, x in yx.pairs))
    rhs = T.transport(other, sigma, g.compose(xy.p2))
    return lhs, rhs, {"alpha": alpha, "beta": beta}


def _nice(T, m, rng, F):
    f, g = m["f"], m["g"]
    lhs = T.pullback(T.theta(f), g)
    rhs = T.theta(fibre_product(f, g).p2)
    return lhs, rhs, {}


def _orientation(T, m, rng, F):
    f, g = m["f"], m["g"]
    lhs = [T.product(T.theta(f), T.theta(g)), T.theta(identity(f.src))]
    rhs = [T.theta(g.compose(f)), T.unit(f.src)]
    return lhs, rhs, {}


def _section(T, m, rng, F):
    s, r = m["s"], m["r"]  # s: X -> Y with r ∘ s = id
    if r.compose(s) != identity(s.src):
        raise Skip
    X, Y = s.src, s.dst
    alpha = T.random_element(rng, to_point(X), F)
    pushed = T.pushforward(alpha, s, to_point(Y))
    lhs = T.product(T.theta(s), pushed)
    shriek = T.pushforward(T.theta(s), s, identity(Y))  # s_!(1_X) in B(Y -> Y)
    pulled = T.pullback(shriek, s)  # over Y ×_Y X -> X
    fp = fibre_product(identity(Y), s)
    sigma = FinMap(fp.size, X, tuple(x for _, x in fp.pairs))
    pulled = T.transport(pulled, sigma, identity(X))
    rhs = T.product(pulled, alpha)
    return lhs, rhs, {"alpha": alpha}


def strong_inverse(T, beta, f, g):
    """``Φ(β) = θ(γ_g) • f^*(β)`` for ``β`` over ``f ∘ g``."""
    if f.compose(g) != beta.base:
        raise ValueError("need f ∘ g == base of β")
    fp = fibre_product(beta.base, f)  # X ×_Z Y
    graph = fp.induced(identity(g.src), g, g.src)
    return T.product(T.theta(graph), T.pullback(beta, f))


def _strong(T, m, rng, F):
    g, f = m["g"], m["f"]  # X -g-> Y -f-> Z
    alpha = T.random_element(rng, g, F)
    beta = T.random_element(rng, f.compose(g), F)
    lhs = [strong_inverse(T, T.product(alpha, T.theta(f)), f, g), T.product(strong_inverse(T, beta, f, g), T.theta(f))]
    rhs = [alpha, beta]
    return lhs, rhs, {"alpha": alpha, "beta": beta}


def exterior(T, u, v):
    """``u × v = π^*(u) • v`` for ``u, v`` over maps to the point."""
    return T.product(T.pullback(u, v.base), v)


def _poincare(T, m, rng, F):
    (X,) = m["X"]
    idX = identity(X)
    pi = to_point(X)
    a = T.random_element(rng, idX, F)
    b = T.random_element(rng, idX, F)
    tp = T.theta(pi)
    lhs = T.product(T.product(a, b), tp)
    xx = fibre_product(pi, pi)
    diag = xx.induced(idX, idX, X)
    rhs = T.product(T.theta(diag), exterior(T, T.product(a, tp), T.product(b, tp)))
    return lhs, rhs, {"a": a, "b": b}


def poincare_bijection(T, X, max_fiber):
    """``• θ(π)`` is a bijection between the budgeted generators."""
    idX, pi = identity(X), to_point(X)
    tp = T.theta(pi)
    seen = set()
    for fibers in product(range(max_fiber + 1), repeat=X):
        out = T.product(T.generator(idX, fibers), tp)
        key = tuple(sorted(out.terms.items()))
        if key in seen or len(out.terms) != 1:
            return False
        seen.add(key)
    return len(seen) == (max_fiber + 1) ** X


# -- transformation checks (M against T) ---------------------------------------

_M = SpanTheory()
_T = MultTheory()


def _tr_product(S, m, rng, F):
    a = S.random_element(rng, m["a"], F)
    b = S.random_element(rng, m["b"], F)
    return to_target(S.product(a, b)), _T.product(to_target(a), to_target(b)), {"a": a, "b": b}


def _tr_pushforward(S, m, rng, F):
    g, k = m["g"], m["k"]
    c = S.random_element(rng, k.compose(g), F)
    return to_target(S.pushforward(c, g, k)), _T.pushforward(to_target(c), g, k), {"c": c}


def _tr_pullback(S, m, rng, F):
    f, h = m["f"], m["h"]
    c = S.random_element(rng, f, F)
    return to_target(S.pullback(c, h)), _T.pullback(to_target(c), h), {"c": c}


def _tr_theta(S, m, rng, F):
    f = m["f"]
    return to_target(S.theta(f)), _T.theta(f), {}


# name -> (set names, maps as (name, src set, dst set), function)
SHAPES = {
    "a12": ("XYZW", [("f", 0, 1), ("h", 1, 2), ("k", 2, 3)], _a12),
    "a13": ("XYZz", [("a", 0, 1), ("b", 1, 2), ("h", 3, 2)], _a13),
    "a23": ("XYZz", [("f", 0, 1), ("k", 1, 2), ("h", 3, 2)], _a23),
    "a123": ("XYyZ", [("f", 0, 1), ("g", 2, 1), ("k", 1, 3)], _a123),
    "commutativity": ("XYy", [("f", 0, 1), ("g", 2, 1)], _commutativity),
    "nice": ("XYy", [("f", 0, 1), ("g", 2, 1)], _nice),
    "orientation": ("XYZ", [("f", 0, 1), ("g", 1, 2)], _orientation),
    "section": ("XY", [("s", 0, 1), ("r", 1, 0)], _section),
    "strong": ("XYZ", [("g", 0, 1), ("f", 1, 2)], _strong),
    "poincare": ("X", [], _poincare),
    "transform-product": ("XYZ", [("a", 0, 1), ("b", 1, 2)], _tr_product),
    "transform-pushforward": ("XYZ", [("g", 0, 1), ("k", 1, 2)], _tr_pushforward),
    "transform-pullback": ("XYy", [("f", 0, 1), ("h", 2, 1)], _tr_pullback),
    "transform-theta": ("XY", [("f", 0, 1)], _tr_theta),
}


def _maps_for(shape_maps, sizes):
    choices = [list(all_maps(sizes[s], sizes[d])) for _, s, d in shape_maps]
    for combo in product(*choices):
        yield {name: mp for (name, _, _), mp in zip(shape_maps, combo)}


def _diagram_json(sets, sizes, maps):
    return {
        "sets": {n: sizes[i] for i, n in enumerate(sets)},
        "maps": {k: v.to_json() for k, v in maps.items() if isinstance(v, FinMap)},
    }


def _equal(lhs, rhs):
    if isinstance(lhs, list):
        return all(a == b for a, b in zip(lhs, rhs)) and len(lhs) == len(rhs)
    return lhs == rhs


def _run_case(name, theory, sets, sizes, maps, rng, max_fiber):
    fn = SHAPES[name][2]
    lhs, rhs, elems = fn(theory, maps, rng, max_fiber)
    if _equal(lhs, rhs):
        return None
    return {
        "diagram": _diagram_json(sets, sizes, maps),
        "elements": {k: _dump(v) for k, v in elems.items()},
        "lhs": _dump(lhs),
        "rhs": _dump(rhs),
    }


def run_check(name, theory=None, max_size=4, max_fiber=3, trials=1000, seed=42, exhaustive_size=3):
    """Run one named check; returns a JSON-ready report."""
    if name not in SHAPES:
        raise KeyError(f"unknown check {name!r}")
    theory = theory or SpanTheory()
    sets, shape_maps, _ = SHAPES[name]
    exhaustive_size = min(exhaustive_size, max_size)
    report = {
        "check": name,
        "theory": theory.name,
        "seed": seed,
        "max_fiber": max_fiber,
        "exhaustive_size": exhaustive_size,
        "exhaustive_cases": 0,
        "max_size": max_size,
        "random_trials": 0,
        "passed": True,
        "counterexample": None,
    }
    case = 0
    for sizes in product(range(exhaustive_size + 1), repeat=len(sets)):
        if name == "poincare" and not poincare_bijection(theory, sizes[0], min(max_fiber, 2)):
            report["passed"] = False
            report["counterexample"] = {"diagram": {"sets": {"X": sizes[0]}}, "bijection": False}
            return report
        for maps in _maps_for(shape_maps, sizes):
            if name == "poincare":
                maps = {"X": sizes}
            rng = random.Random(f"{seed}:{name}:exhaustive:{case}")
            case += 1
            try:
                bad = _run_case(name, theory, sets, sizes, maps, rng, max_fiber)
            except Skip:
                continue
            report["exhaustive_cases"] += 1
            if bad:
                bad.update(phase="exhaustive", case=case - 1)
                report["passed"] = False
                report["counterexample"] = bad
                return report
    done = 0
    attempt = 0
    while done < trials:
        rng = random.Random(f"{seed}:{name}:random:{attempt}")
        attempt += 1
        sizes = [rng.randint(1, max_size) for _ in sets]
        maps = {nm: random_map(rng, sizes[s], sizes[d]) for nm, s, d in shape_maps}
        if name == "section":
            maps = _random_section(rng, sizes)
            sizes = [maps["s"].src, maps["s"].dst]
        if name == "poincare":
            maps = {"X": sizes}
        try:
            bad = _run_case(name, theory, sets, sizes, maps, rng, max_fiber)
        except Skip:
            continue
        done += 1
        if bad:
            bad.update(phase="random", trial=attempt - 1)
            report["passed"] = False
            report["counterexample"] = bad
            break
    report["random_trials"] = done
    return report


def _random_section(rng, sizes):
    X, Y = sizes
    if X > Y:
        X, Y = Y, X
    s = FinMap(X, Y, tuple(rng.sample(range(Y), X)))
    back = {v: i for i, v in enumerate(s.values)}
    r = FinMap(Y, X, tuple(back[y] if y in back else rng.randrange(X) for y in range(Y)))
    return {"s": s, "r": r}


def theory_for(mutate=None):
    if mutate is None:
        return SpanTheory()
    if mutate not in MUTATIONS:
        raise KeyError(f"unknown mutation {mutate!r}; choose from {sorted(MUTATIONS)}")
    return MUTATIONS[mutate]()


def run_checks(names, **kwargs):
    return [run_check(n, **kwargs) for n in names]
