"""Small exact linear algebra helpers over ZZ and QQ.

Vectors are tuples of int or Fraction.  Nothing here touches floats.
"""
from fractions import Fraction
from math import gcd


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def is_integral(x):
    return as_fraction(x).denominator == 1


def to_int(x):
    x = as_fraction(x)
    if x.denominator != 1:
        raise ValueError(f"{x} is not an integer")
    return x.numerator


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, v):
    return tuple(c * a for a in v)


def vsum(vectors, dim):
    out = (0,) * dim
    for v in vectors:
        out = vadd(out, v)
    return out


def normalize_vec(v):
    """Collapse Fractions with denominator 1 back to int."""
    return tuple(a.numerator if isinstance(a, Fraction) and a.denominator == 1 else a
                 for a in v)


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def vgcd(v):
    g = 0
    for a in v:
        g = gcd(g, int(a))
    return g


def lattice_length(v):
    """Lattice length of an integral vector (gcd of its coordinates)."""
    return vgcd(v)


def is_primitive(v):
    return all(is_integral(a) for a in v) and vgcd(v) == 1


def ext_gcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def sl2_to_e1(u):
    """Integer matrix of determinant 1 sending the primitive vector u to (1, 0)."""
    g, p, q = ext_gcd(u[0], u[1])
    if g != 1:
        raise ValueError(f"{u} is not primitive")
    return ((p, q), (-u[1], u[0]))


def sl2_to_e2(u):
    """Integer matrix of determinant 1 sending the primitive vector u to (0, 1)."""
    (a, b), (c, d) = sl2_to_e1(u)
    # rotate by 90 degrees afterwards: (1, 0) -> (0, 1)
    return ((-c, -d), (a, b))


def mat_vec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
                 for i in range(n))


def mat_det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def rank_q(rows):
    """Rank over QQ of a list of vectors."""
    mat = [[as_fraction(a) for a in r] for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col] / mat[rank][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def inertia(gram):
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric Gaussian elimination (LDL^T with 2x2 fix-ups by congruence),
    counting pivot signs.
    """
    n = len(gram)
    a = [[as_fraction(x) for x in row] for row in gram]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            # all diagonal entries vanish: look for an off-diagonal entry
            pair = next(((i, j) for i in active for j in active
                         if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace row/col i by row/col i + j, making a[i][i] = 2 a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / d
            if f:
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[piv][i] = a[i][piv] = Fraction(0)
    return pos, neg, n - pos - neg


def solve_q(mat, rhs):
    """Solve mat x = rhs over QQ for a square invertible matrix."""
    n = len(mat)
    aug = [[as_fraction(a) for a in row] + [as_fraction(b)] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(aug[i][n] / aug[i][i] for i in range(n))
