"""Intersection lattices of rational surfaces (Picard lattice, pairing, canonical class)."""
from dataclasses import dataclass
from fractions import Fraction

from .linalg import as_fraction, inertia, solve_q


@dataclass(frozen=True)
class IntersectionLattice:
    gram: tuple
    K: tuple
    name: str = "custom"

    def __post_init__(self):
        gram = tuple(tuple(int(a) for a in row) for row in self.gram)
        K = tuple(int(a) for a in self.K)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "K", K)
        if any(len(row) != len(gram) for row in gram) or len(K) != len(gram):
            raise ValueError("gram must be square with K of matching length")

    @property
    def rho(self):
        return len(self.gram)

    @property
    def n(self):
        """Rank of the numerical Grothendieck group, rho + 2."""
        return self.rho + 2

    def pair(self, x, y):
        return pair(self, x, y)

    def square(self, x):
        return pair(self, x, x)

    def zero(self):
        return (0,) * self.rho

    def unit(self, i):
        return tuple(1 if j == i else 0 for j in range(self.rho))

    @property
    def K2(self):
        return pair(self, self.K, self.K)


def _mul(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    return as_fraction(a) * as_fraction(b)


def pair(L, x, y):
    """x^T gram y, exact.  Returns int for integral input, Fraction otherwise."""
    if len(x) != L.rho or len(y) != L.rho:
        raise ValueError(f"dimension mismatch: {len(x)}, {len(y)} vs rho={L.rho}")
    total = 0
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = L.gram[i]
        for j, yj in enumerate(y):
            if yj and row[j]:
                total += _mul(_mul(xi, row[j]), yj)
    if isinstance(total, Fraction) and total.denominator == 1:
        return total.numerator
    return total


def make_blowup_p2(k):
    """P^2 blown up in k points; basis H, E_1..E_k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    rho = k + 1
    gram = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(rho))
                 for i in range(rho))
    K = (-3,) + (1,) * k
    return IntersectionLattice(gram, K, name=f"blowup_p2({k})")


def make_hirzebruch(a):
    """Hirzebruch surface F_a; basis P (fibre), Q with P^2 = 0, P.Q = 1, Q^2 = a."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    return IntersectionLattice(((0, 1), (1, a)), (a - 2, -2), name=f"hirzebruch({a})")


def validate_lattice(L):
    """Check symmetry, Hodge-index signature and the Noether constraint."""
    rho = L.rho
    sym = all(L.gram[i][j] == L.gram[j][i] for i in range(rho) for j in range(rho))
    sig = inertia(L.gram) if sym else None
    k2 = L.K2
    checks = {
        "symmetric": {"ok": sym},
        "signature": {"ok": sig == (1, rho - 1, 0), "value": sig},
        "noether": {"ok": k2 == 12 - (rho + 2), "K2": k2, "expected": 12 - (rho + 2)},
    }
    return {"ok": all(c["ok"] for c in checks.values()), "checks": checks}


def change_basis(L, U):
    """Lattice in the basis given by the rows of the unimodular matrix U.

    Returns (L', to_new) where to_new maps old coordinates to new ones.
    """
    rho = L.rho
    gram = tuple(tuple(pair(L, U[i], U[j]) for j in range(rho)) for i in range(rho))
    # new coords c' satisfy sum_i c'_i U[i] = c, i.e. c' = c U^{-1}
    Ut = tuple(tuple(U[j][i] for j in range(rho)) for i in range(rho))

    def to_new(c):
        sol = solve_q(Ut, c)
        return tuple(s.numerator if s.denominator == 1 else s for s in sol)

    K = tuple(int(a) for a in to_new(L.K))
    return IntersectionLattice(gram, K, name=L.name + "'"), to_new
