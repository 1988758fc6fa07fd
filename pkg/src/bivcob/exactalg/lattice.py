"""Integer lattice reduction: Hermite normal form and Smith invariants.

Row convention throughout: a matrix is a list of rows, each row a list of
Python ints, and the lattice in question is the row span.
"""
from fractions import Fraction


def _xgcd(a, b):
    """Return (g, s, t) with g = s*a + t*b = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(rows, ncols=None):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns ``(hnf, pivots)`` where ``hnf`` lists the nonzero echelon rows,
    each with a positive pivot, and every entry above a pivot lies in
    ``[0, pivot)``.  ``pivots[i]`` is the column of row ``i``'s pivot.
    The result depends only on the lattice, not on the generating rows.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [list(r) for r in rows if any(r)]
    hnf = []
    pivots = []
    col = 0
    while work and col < ncols:
        nz = [r for r in work if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in work if not r[col]]
        # fold all rows with a nonzero entry in this column into one pivot row
        piv = nz[0]
        for r in nz[1:]:
            a, b = piv[col], r[col]
            g, s, t = _xgcd(a, b)
            ua, ub = a // g, b // g
            new_piv = [s * x + t * y for x, y in zip(piv, r)]
            killed = [ua * y - ub * x for x, y in zip(piv, r)]
            piv = new_piv
            if any(killed):
                rest.append(killed)
        if piv[col] < 0:
            piv = [-x for x in piv]
        hnf.append(piv)
        pivots.append(col)
        work = rest
        col += 1
    # reduce entries above each pivot
    for i in range(len(hnf)):
        p, d = pivots[i], hnf[i][pivots[i]]
        for j in range(i):
            q = hnf[j][p] // d
            if q:
                hnf[j] = [x - q * y for x, y in zip(hnf[j], hnf[i])]
    return hnf, pivots


def rref_rational(rows, ncols=None):
    """Reduced row echelon form over the rationals; pivots are 1."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [[Fraction(x) for x in r] for r in rows if any(r)]
    out = []
    pivots = []
    col = 0
    while work and col < ncols:
        k = next((i for i, r in enumerate(work) if r[col]), None)
        if k is None:
            col += 1
            continue
        piv = work.pop(k)
        inv = 1 / piv[col]
        piv = [x * inv for x in piv]
        nxt = []
        for r in work:
            c = r[col]
            if c:
                r = [x - c * y for x, y in zip(r, piv)]
            if any(r):
                nxt.append(r)
        work = nxt
        for j in range(len(out)):
            c = out[j][col]
            if c:
                out[j] = [x - c * y for x, y in zip(out[j], piv)]
        out.append(piv)
        pivots.append(col)
        col += 1
    return out, pivots


def smith_invariants(rows, ncols=None):
    """Nonzero invariant factors d1 | d2 | ... of the row lattice.

    The quotient Z^ncols / span(rows) is torsion-free exactly when every
    returned factor equals 1.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    if ncols is None:
        ncols = len(m[0])
    factors = []
    while m:
        # choose the entry of least absolute value as pivot
        best = None
        for i, r in enumerate(m):
            for j, x in enumerate(r):
                if x and (best is None or abs(x) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        m[0], m[i] = m[i], m[0]
        for r in m:
            r[0], r[j] = r[j], r[0]
        d = m[0][0]
        done = True
        for r in m[1:]:
            q = r[0] // d
            if q:
                for k in range(ncols):
                    r[k] -= q * m[0][k]
            if r[0]:
                done = False
        for k in range(1, ncols):
            q = m[0][k] // d
            if q:
                for r in m:
                    r[k] -= q * r[0]
            if m[0][k]:
                done = False
        if not done:
            continue
        # pivot isolated; enforce divisibility of the remaining block
        bad = next(((ri, k) for ri, r in enumerate(m[1:], 1)
                    for k in range(1, ncols) if r[k] % d), None)
        if bad is not None:
            ri = bad[0]
            for k in range(ncols):
                m[0][k] += m[ri][k]
            continue
        factors.append(abs(d))
        m = [r[1:] for r in m[1:]]
        m = [r for r in m if any(r)]
        ncols -= 1
    return factors
