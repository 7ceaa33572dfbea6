"""Orthonormal real spherical harmonics of degree s, as explicit polynomials.

The degree-s harmonic subspace of homogeneous polynomials in (x, y, z) is
computed exactly over the rationals (kernel of the Laplacian matrix), then
orthonormalized with respect to the surface measure of the unit sphere using
the closed-form monomial integrals.  Floating point enters only in the final
square-root normalization, so the components satisfy the addition theorem
(sum of squares constant) to machine precision by construction.
"""

from __future__ import annotations

from fractions import Fraction


def monomial_multi_indices(degree: int):
    """All (i, j, k) with i + j + k = degree, lexicographic."""
    out = []
    for i in range(degree, -1, -1):
        for j in range(degree - i, -1, -1):
            out.append((i, j, degree - i - j))
    out.sort()
    return out


def sphere_integral_over_4pi(i: int, j: int, k: int) -> Fraction:
    """Integral of x^i y^j z^k over the unit sphere, divided by 4*pi."""
    if i % 2 or j % 2 or k % 2:
        return Fraction(0)

    def dfact(n):  # (n)!! with (-1)!! = 1
        out = 1
        while n > 1:
            out *= n
            n -= 2
        return out

    num = dfact(i - 1) * dfact(j - 1) * dfact(k - 1)
    return Fraction(num, dfact(i + j + k + 1))


def _laplacian_kernel(degree: int):
    """Rational basis of harmonic homogeneous polynomials of given degree.

    Returns a list of dicts {(i, j, k): Fraction}; the kernel has dimension
    2*degree + 1.
    """
    monos = monomial_multi_indices(degree)
    lower = monomial_multi_indices(degree - 2) if degree >= 2 else []
    col = {m: c for c, m in enumerate(monos)}
    rowidx = {m: r for r, m in enumerate(lower)}

    # Laplacian matrix: rows indexed by degree-2 monomials
    rows = [[Fraction(0)] * len(monos) for _ in lower]
    for (i, j, k), c in col.items():
        for axis, e in enumerate((i, j, k)):
            if e < 2:
                continue
            tgt = [i, j, k]
            tgt[axis] -= 2
            rows[rowidx[tuple(tgt)]][c] += Fraction(e * (e - 1))

    # exact kernel via Gauss-Jordan
    m, n = len(rows), len(monos)
    a = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break

    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            vec[pc] = -a[pr][fc]
        basis.append({monos[c]: vec[c] for c in range(n) if vec[c] != 0})
    return basis


def _inner(p, q) -> Fraction:
    """Sphere-surface inner product of two monomial dicts, divided by 4*pi."""
    total = Fraction(0)
    for (i1, j1, k1), c1 in p.items():
        for (i2, j2, k2), c2 in q.items():
            total += c1 * c2 * sphere_integral_over_4pi(i1 + i2, j1 + j2, k1 + k2)
    return total


def unit_immersion_components(degree: int) -> list[dict]:
    """Components of the degree-s harmonic immersion into the unit sphere.

    2s+1 polynomials {(i, j, k): float} whose squares sum to 1 on the unit
    sphere: an L2-orthonormal harmonic basis scaled by sqrt(4*pi / (2s+1)).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    basis = _laplacian_kernel(degree)
    assert len(basis) == 2 * degree + 1

    # exact Gram-Schmidt; norms kept as rationals until the final sqrt
    ortho = []
    norms2 = []
    for vec in basis:
        cur = dict(vec)
        for prev, n2 in zip(ortho, norms2):
            coef = _inner(cur, prev) / n2
            if coef == 0:
                continue
            for mono, c in prev.items():
                cur[mono] = cur.get(mono, Fraction(0)) - coef * c
        cur = {m: c for m, c in cur.items() if c != 0}
        ortho.append(cur)
        norms2.append(_inner(cur, cur))

    out = []
    for vec, n2 in zip(ortho, norms2):
        # component = vec / sqrt(<vec,vec>_{S^2}) * sqrt(4 pi/(2s+1));
        # with <,> = 4 pi * n2 the 4 pi cancels
        scale = 1.0 / float(n2 * (2 * degree + 1)) ** 0.5
        out.append({m: float(c) * scale for m, c in vec.items()})
    return out
