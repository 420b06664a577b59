"""Numerical K-theory classes (rank, c1, c2), Euler pairing and sequence diagnostics."""
from dataclasses import dataclass
from fractions import Fraction

from .lattice import make_blowup_p2, make_hirzebruch, pair
from .linalg import as_fraction, normalize_vec, vadd, vscale, vsub


@dataclass(frozen=True)
class NumClass:
    e: int
    c1: tuple
    c2: int
    L: object

    def __post_init__(self):
        object.__setattr__(self, "e", int(self.e))
        object.__setattr__(self, "c1", tuple(int(a) for a in self.c1))
        object.__setattr__(self, "c2", int(self.c2))
        if len(self.c1) != self.L.rho:
            raise ValueError("c1 length does not match lattice")

    def __neg__(self):
        return shift(self)

    def key(self):
        return (self.e, self.c1, self.c2)

    def __repr__(self):
        return f"NumClass({self.e}, {list(self.c1)}, {self.c2})"


@dataclass(frozen=True)
class ChernCharacter:
    ch0: int
    ch1: tuple
    ch2: Fraction


def _same(E, F):
    if E.L != F.L:
        raise ValueError("classes live on different lattices")
    return E.L


def chern_character(N):
    c1sq = pair(N.L, N.c1, N.c1)
    return ChernCharacter(N.e, N.c1, Fraction(c1sq, 2) - N.c2)


def from_chern(C, L):
    c1 = tuple(int(a) for a in C.ch1)
    c2 = Fraction(pair(L, c1, c1), 2) - as_fraction(C.ch2)
    if c2.denominator != 1:
        raise ValueError(f"non-integral c2 = {c2}")
    return NumClass(C.ch0, c1, c2.numerator, L)


def ch_combine(pairs, L):
    """Class with ch = sum of coeff * ch(N) over (coeff, N) pairs."""
    ch0, ch1, ch2 = 0, L.zero(), Fraction(0)
    for a, N in pairs:
        C = chern_character(N)
        ch0 += a * C.ch0
        ch1 = vadd(ch1, vscale(a, C.ch1))
        ch2 += a * C.ch2
    return from_chern(ChernCharacter(ch0, ch1, ch2), L)


def shift(N):
    """Numerical class of N[1]: the Chern character negates."""
    return NumClass(-N.e, tuple(-a for a in N.c1), pair(N.L, N.c1, N.c1) - N.c2, N.L)


def twist(N, D):
    """Tensor with the line bundle O(D): ch * (1, D, D^2/2)."""
    L = N.L
    D = tuple(int(a) for a in D)
    C = chern_character(N)
    ch1 = vadd(C.ch1, vscale(N.e, D))
    ch2 = C.ch2 + pair(L, C.ch1, D) + Fraction(N.e * pair(L, D, D), 2)
    return from_chern(ChernCharacter(N.e, ch1, ch2), L)


def serre_twist_inverse(N):
    """N tensor omega^{-1}, the helix step E_{i+n} = E_i(-K)."""
    return twist(N, tuple(-a for a in N.L.K))


def serre_twist(N):
    return twist(N, N.L.K)


def line_bundle(L, D):
    return NumClass(1, D, 0, L)


def rel_c1(E, F):
    """c1 of RHom(E, F): e c1(F) - f c1(E)."""
    _same(E, F)
    return vsub(vscale(E.e, F.c1), vscale(F.e, E.c1))


def euler(E, F):
    """Euler pairing chi(E, F) from Riemann-Roch, integrality asserted."""
    L = _same(E, F)
    e, f = E.e, F.e
    rel = rel_c1(E, F)
    val = (e * f - Fraction(pair(L, L.K, rel), 2)
           + Fraction(f * pair(L, E.c1, E.c1) + e * pair(L, F.c1, F.c1)
                      - 2 * pair(L, E.c1, F.c1), 2)
           - (f * E.c2 + e * F.c2))
    if val.denominator != 1:
        raise ValueError(f"non-integral Euler pairing {val} for {E}, {F}")
    return val.numerator


def euler_specialized(E, F):
    """Euler pairing via the simplified forms valid for exceptional classes."""
    if not (is_num_exceptional(E) and is_num_exceptional(F)):
        raise ValueError("classes must be numerically exceptional")
    L = _same(E, F)
    e, f = E.e, F.e
    if e and f:
        rel = rel_c1(E, F)
        val = (-Fraction(pair(L, L.K, rel), 2)
               + Fraction(pair(L, rel, rel) + e * e + f * f, 2 * e * f))
    elif e == 0 and f:
        val = (Fraction(f * pair(L, L.K, E.c1), 2)
               - (Fraction(f, 2) + pair(L, E.c1, F.c1) + f * E.c2))
    elif e and f == 0:
        val = (-Fraction(e * pair(L, L.K, F.c1), 2)
               - (Fraction(e, 2) + pair(L, E.c1, F.c1) + e * F.c2))
    else:
        val = Fraction(-pair(L, E.c1, F.c1))
    if val.denominator != 1:
        raise ValueError(f"non-integral Euler pairing {val}")
    return val.numerator


def is_num_exceptional(N):
    return euler(N, N) == 1


def exceptional_c2(e, c1, L):
    """The c2 forced by chi(E, E) = 1 for rank e != 0, or None if non-integral."""
    v = Fraction(e * e + (e - 1) * pair(L, c1, c1) - 1, 2 * e)
    return v.numerator if v.denominator == 1 else None


def slope(N):
    if N.e == 0:
        raise ValueError("slope of a rank-zero class")
    return normalize_vec(tuple(Fraction(a, N.e) for a in N.c1))


def rel_slope(E, F):
    """s(E, F) = s(F) - s(E)."""
    return normalize_vec(vsub(slope(F), slope(E)))


def minus_K_degree(Z):
    return -pair(Z.L, Z.L.K, Z.c1)


def sign_normalize_zero(Z):
    """Rank-zero class up to shift, chosen with -K.c1 = +1 when possible."""
    if Z.e == 0 and minus_K_degree(Z) < 0:
        return shift(Z)
    return Z


def delta(Z, seq, pos=None):
    """c1(Z).s(E) + c2(Z), asserted independent of the nonzero-rank member E.

    If Z sits at index pos of seq, members before it are replaced by their
    helix successors E(-K), so every E used follows Z in the helix.
    """
    if Z.e != 0:
        raise ValueError("delta is defined for rank-zero classes")
    if pos is None:
        pos = next((i for i, N in enumerate(seq) if N == Z), len(seq))
        if pos == len(seq):
            pos = -1
    L = Z.L
    vals = []
    for i, E in enumerate(seq):
        if E.e == 0:
            continue
        s = slope(E)
        if 0 <= i < pos:
            s = vsub(s, L.K)
        vals.append(pair(L, Z.c1, s) + Z.c2)
    if not vals:
        raise ValueError("no nonzero-rank member")
    if any(v != vals[0] for v in vals):
        raise ValueError(f"inconsistent delta values {vals}")
    return vals[0]


def normalizing_twist(zs):
    """Divisor D with c2(Z_i(D)) = 0 for orthogonal (-1)-classes c1(Z_i)."""
    if not zs:
        raise ValueError("empty list")
    L = zs[0].L
    for i, Z in enumerate(zs):
        if Z.e != 0:
            raise ValueError("rank-zero classes required")
        for j, W in enumerate(zs):
            want = -1 if i == j else 0
            if pair(L, Z.c1, W.c1) != want:
                raise ValueError("c1 classes must be orthogonal with square -1")
    D = L.zero()
    for Z in zs:
        D = vsub(D, vscale(Z.c2, Z.c1))
    return D


def validate_sequence(seq):
    """Diagnostics for a numerically exceptional sequence."""
    n = len(seq)
    if n == 0:
        return {"ok": False, "n": 0, "checks": {}, "chi": [], "failures": ["empty sequence"]}
    L = seq[0].L
    for N in seq:
        _same(seq[0], N)
    chi = [[euler(E, F) for F in seq] for E in seq]
    failures = []
    not_exc = [i for i in range(n) if chi[i][i] != 1]
    for i in not_exc:
        failures.append(f"object {i} is not numerically exceptional: chi = {chi[i][i]}")
    bad_pairs = [(i, j) for i in range(n) for j in range(i) if chi[i][j] != 0]
    for i, j in bad_pairs:
        failures.append(f"chi(E{i}, E{j}) = {chi[i][j]} != 0")
    zeros = [i for i in range(n) if seq[i].e == 0]
    t = len(zeros)
    if t > n - 3:
        failures.append(f"{t} rank-zero objects exceed n - 3 = {n - 3}")
    orth = True
    for a in zeros:
        for b in zeros:
            want = -1 if a == b else 0
            if pair(L, seq[a].c1, seq[b].c1) != want:
                orth = False
                failures.append(f"rank-zero c1 pairing ({a}, {b}) != {want}")
    deg_ok, delta_ok = True, True
    deltas = {}
    for i in zeros:
        Z = sign_normalize_zero(seq[i])
        if minus_K_degree(Z) != 1:
            deg_ok = False
            failures.append(f"-K.c1(E{i}) = {minus_K_degree(seq[i])}, expected +-1")
        try:
            d = delta(Z, seq, i)
        except ValueError as exc:
            d = None
            failures.append(f"delta(E{i}): {exc}")
        deltas[i] = d
        if d != 0:
            delta_ok = False
            if d is not None:
                failures.append(f"delta(E{i}) = {d} != 0")
    checks = {
        "exceptional": not not_exc,
        "semiorthogonal": not bad_pairs,
        "rank_zero_count": t <= n - 3,
        "rank_zero_orthogonal": orth,
        "rank_zero_degree": deg_ok,
        "rank_zero_delta": delta_ok,
    }
    return {"ok": all(checks.values()), "n": n, "t": t, "checks": checks, "chi": chi,
            "rank_zero": zeros, "delta": deltas, "failures": failures,
            "bad_pairs": bad_pairs}


def is_valid_sequence(seq):
    return validate_sequence(seq)["ok"]


def p2_sequence(d=0):
    """(O(d), O(d+1), O(d+2)) on P^2."""
    L = make_blowup_p2(0)
    return [line_bundle(L, (d + i,)) for i in range(3)]


def hirzebruch_sequence(a):
    """(O, O(P), O(Q), O(P+Q)) on F_a."""
    L = make_hirzebruch(a)
    return [line_bundle(L, D) for D in [(0, 0), (1, 0), (0, 1), (1, 1)]]


def blowup_line_bundle_sequence(k):
    """(O, O(E_1), ..., O(E_k), O(H), O(2H)) on P^2 blown up in k points."""
    L = make_blowup_p2(k)
    out = [line_bundle(L, L.zero())]
    out += [line_bundle(L, L.unit(i)) for i in range(1, k + 1)]
    out += [line_bundle(L, vscale(d, L.unit(0))) for d in (1, 2)]
    return out


def blowup_torsion_sequence(k):
    """(O_{E_1}(E_1)-type classes, then O, O(H), O(2H)) on P^2 blown up in k points."""
    L = make_blowup_p2(k)
    out = [NumClass(0, L.unit(i), 0, L) for i in range(1, k + 1)]
    out += [line_bundle(L, vscale(d, L.unit(0))) for d in (0, 1, 2)]
    return out
