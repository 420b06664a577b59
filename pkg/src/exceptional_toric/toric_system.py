"""Toric systems of exceptional sequences: extraction, validation, contraction."""
from dataclasses import dataclass
from fractions import Fraction

from .classes import rel_slope, shift, sign_normalize_zero, slope, validate_sequence
from .lattice import pair
from .linalg import is_integral, normalize_vec, rank_q, vadd, vscale, vsub, vsum
from .mutation import MutationStep, mutate_seq


@dataclass(frozen=True)
class ToricSystem:
    L: object
    Es: tuple  # c1 of the rank-zero members, in sequence order
    ranks: tuple  # signed ranks of the nonzero-rank members
    As: tuple  # A_k = s(F_k, F_{k+1}), cyclic, last one through the helix
    phi: tuple  # phi[j] = index k (0-based) with E_j . A_k = 1
    zero_positions: tuple = ()
    positions: tuple = ()

    @property
    def m(self):
        return len(self.ranks)

    @property
    def t(self):
        return len(self.Es)


@dataclass(frozen=True)
class ReducedToricSystem:
    L: object
    Atildes: tuple
    ranks: tuple
    Kred: tuple  # canonical class of the contraction, K - sum E_j

    @property
    def m(self):
        return len(self.ranks)


class ToricSystemError(ValueError):
    pass


def _phi_of(L, E, As):
    hits = [k for k, A in enumerate(As) if pair(L, E, A) != 0]
    if len(hits) != 1 or pair(L, E, As[hits[0]]) != 1:
        raise ToricSystemError(f"phi not well defined for {E}: nonzero products at {hits}")
    return hits[0]


def extract(seq, check=True):
    """Toric system of a full-length sequence."""
    if check:
        diag = validate_sequence(seq)
        if not diag["ok"]:
            raise ToricSystemError(f"invalid sequence: {diag['failures']}")
    L = seq[0].L
    if len(seq) != L.n:
        raise ToricSystemError(f"sequence length {len(seq)} != rho + 2 = {L.n}")
    pos = tuple(i for i, N in enumerate(seq) if N.e != 0)
    zpos = tuple(i for i, N in enumerate(seq) if N.e == 0)
    Fs = [seq[i] for i in pos]
    m = len(Fs)
    As = [rel_slope(Fs[k], Fs[k + 1]) for k in range(m - 1)]
    As.append(normalize_vec(vsub(vsub(slope(Fs[0]), L.K), slope(Fs[-1]))))
    Es = tuple(sign_normalize_zero(seq[i]).c1 for i in zpos)
    phi = tuple(_phi_of(L, E, As) for E in Es)
    return ToricSystem(L, Es, tuple(F.e for F in Fs), tuple(As), phi, zpos, pos)


def validate_toric_system(ts):
    """Check the defining conditions of an abstract toric system exactly."""
    L, As, r, m = ts.L, ts.As, ts.ranks, ts.m
    out = {}
    out["E_conditions"] = all(
        pair(L, E, F) == (-1 if i == j else 0)
        for i, E in enumerate(ts.Es) for j, F in enumerate(ts.Es)
    ) and all(-pair(L, L.K, E) == 1 for E in ts.Es)
    out["integrality"] = all(
        all(is_integral(x) for x in vscale(r[k] * r[(k + 1) % m], As[k])) for k in range(m))
    # the rank shared by A_k and A_{k+1} is that of the member separating them
    adj = [pair(L, As[k], As[(k + 1) % m]) for k in range(m)]
    out["adjacent"] = all(adj[k] == Fraction(1, r[(k + 1) % m] ** 2) for k in range(m))
    out["adjacent_other_reading_agrees"] = all(
        adj[k] == Fraction(1, r[k] ** 2) for k in range(m))
    out["nonadjacent"] = all(
        pair(L, As[i], As[j]) == 0
        for i in range(m) for j in range(m)
        if i != j and (j - i) % m not in (1, m - 1))
    out["sum"] = vsum(As, L.rho) == tuple(-a for a in L.K)
    phi_ok = len(ts.phi) == ts.t
    for E, p in zip(ts.Es, ts.phi):
        for k, A in enumerate(As):
            if pair(L, E, A) != (1 if k == p else 0):
                phi_ok = False
    out["phi"] = phi_ok
    ok = all(v for k, v in out.items() if k != "adjacent_other_reading_agrees")
    return {"ok": ok, "checks": out, "adjacent_products": adj}


def multiplicity_counts(ts):
    """1 + number of rank-zero members attached to each A_k."""
    counts = [1] * ts.m
    for p in ts.phi:
        counts[p] += 1
    return counts


def contract(ts):
    """A~_k = A_k + sum of E_j with phi(j) = k."""
    L = ts.L
    At = list(ts.As)
    for E, p in zip(ts.Es, ts.phi):
        At[p] = normalize_vec(vadd(At[p], E))
    Kred = vsum([L.K] + list(vscale(-1, E) for E in ts.Es), L.rho)
    rts = ReducedToricSystem(L, tuple(At), ts.ranks, Kred)
    if vsum(At, L.rho) != tuple(-a for a in Kred):
        raise ToricSystemError("contracted classes do not sum to -K of the contraction")
    if rank_q(At) != ts.m - 2:
        raise ToricSystemError(f"span of contracted classes has rank {rank_q(At)} != m - 2")
    if any(pair(L, A, E) != 0 for A in At for E in ts.Es):
        raise ToricSystemError("contracted classes are not orthogonal to the E_j")
    return rts


def self_intersections(rts):
    return [pair(rts.L, A, A) for A in rts.Atildes]


def positive_selfintersection_check(rts):
    """Sign pattern of the squares A~_i^2 for m >= 4 (vacuous for m = 3).

    If A~_i^2 >= 0, at most one other A~_j has positive square, and it is
    adjacent to A~_i.  Orthogonal classes of square zero force m = 4, and
    two adjacent zero squares force all others negative when m > 4.
    """
    sq = self_intersections(rts)
    m = rts.m
    L = rts.L
    ok = True
    if m >= 4:
        for i in range(m):
            if sq[i] < 0:
                continue
            pos = [j for j in range(m) if j != i and sq[j] > 0]
            if len(pos) > 1 or (pos and (pos[0] - i) % m not in (1, m - 1)):
                ok = False
        for i in range(m):
            for j in range(i + 1, m):
                if sq[i] == sq[j] == 0 and pair(L, rts.Atildes[i], rts.Atildes[j]) == 0:
                    ok = ok and m == 4
            if sq[i] == 0 and sq[(i + 1) % m] == 0 and m > 4:
                ok = ok and all(sq[j] < 0 for j in range(m) if j not in (i, (i + 1) % m))
    return {"ok": ok, "nonnegative": [i for i, s in enumerate(sq) if s >= 0], "squares": sq}


def move_rank_zero(seq, k, direction, check=True):
    """Move the rank-zero member at 1-based position k one step left or right.

    Right past F: left mutation, F becomes -f Z - F.  Left past E: right
    mutation, E becomes e Z - E.  Past another rank-zero member: sign change.
    Returns (new sequence, step).
    """
    n = len(seq)
    if not 1 <= k <= n or seq[k - 1].e != 0:
        raise IndexError(f"position {k} does not hold a rank-zero member")
    if direction == "right":
        if k == n:
            raise IndexError("cannot move the last member right")
        step = MutationStep(k, "left")
    elif direction == "left":
        if k == 1:
            raise IndexError("cannot move the first member left")
        step = MutationStep(k - 1, "right")
    else:
        raise ValueError(f"bad direction {direction!r}")
    out = mutate_seq(seq, step, check=check)
    if check and len(seq) == seq[0].L.n:
        _check_zero_move(seq, out, k, direction)
    return out, step


def _check_zero_move(before, after, k, direction):
    ts0, ts1 = extract(before, check=False), extract(after, check=False)
    j0 = ts0.zero_positions.index(k - 1)
    knew = k if direction == "right" else k - 2
    j1 = ts1.zero_positions.index(knew)
    Z = ts0.Es[j0]
    assert ts1.Es[j1] == Z
    assert sorted(ts0.Es) == sorted(ts1.Es)
    assert [abs(r) for r in ts0.ranks] == [abs(r) for r in ts1.ranks]
    diffs = [vsub(a1, a0) for a0, a1 in zip(ts0.As, ts1.As)]
    changed = [i for i, d in enumerate(diffs) if any(d)]
    if before[k - 2 if direction == "left" else k].e == 0:
        # swapping two rank-zero members leaves the A's alone
        assert not changed
    else:
        old, new = ts0.phi[j0], ts1.phi[j1]
        assert (new - old) % ts0.m == (1 if direction == "right" else ts0.m - 1)
        assert sorted(changed) == sorted({old, new})
        assert normalize_vec(diffs[old]) == Z
        assert normalize_vec(diffs[new]) == tuple(-a for a in Z)
    assert contract(ts0).Atildes == contract(ts1).Atildes


def zeros_to_front(seq, check=True):
    """Move every rank-zero member to the head, preserving their order."""
    steps = []
    seq = list(seq)
    done = 0
    for _ in range(len(seq)):
        idx = next((i for i in range(done, len(seq)) if seq[i].e == 0), None)
        if idx is None:
            break
        for p in range(idx + 1, done + 1, -1):
            seq, st = move_rank_zero(seq, p, "left", check=check)
            steps.append(st)
        done += 1
    return seq, steps


def normalize_zero_signs(seq):
    return [sign_normalize_zero(N) if N.e == 0 else N for N in seq]


def shift_to_positive(seq):
    """Negate members of negative rank (and rank-zero members of -K degree -1)."""
    out = []
    for N in seq:
        if N.e < 0:
            out.append(shift(N))
        else:
            out.append(sign_normalize_zero(N))
    return out

