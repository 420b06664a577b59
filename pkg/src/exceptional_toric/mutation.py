"""Numerical left/right mutations, the braid action and rank recurrences."""
from dataclasses import dataclass

from .classes import ch_combine, euler, rel_c1, validate_sequence
from .lattice import pair


@dataclass(frozen=True)
class MutationStep:
    position: int  # 1-based; acts on the pair (position, position + 1)
    direction: str  # "left" or "right"

    def __post_init__(self):
        if self.direction not in ("left", "right"):
            raise ValueError(f"bad direction {self.direction!r}")

    def inverse(self):
        return MutationStep(self.position, "left" if self.direction == "right" else "right")

    def as_dict(self):
        return {"position": self.position, "direction": self.direction}


class InvalidSequence(ValueError):
    pass


def left_mutation(E, F):
    """L_E F with ch = chi(E, F) ch(E) - ch(F)."""
    return ch_combine([(euler(E, F), E), (-1, F)], E.L)


def right_mutation(E, F):
    """R_F E with ch = chi(E, F) ch(F) - ch(E)."""
    return ch_combine([(euler(E, F), F), (-1, E)], E.L)


def left_mutation_explicit(E, F):
    """L_E F from the closed rank, c1 and c2 formulas (cross-check)."""
    L = E.L
    chi = euler(E, F)
    c1 = tuple(chi * a - b for a, b in zip(E.c1, F.c1))
    c2 = (chi * (chi - 1) // 2 * pair(L, E.c1, E.c1) - chi * pair(L, E.c1, F.c1)
          + pair(L, F.c1, F.c1) + chi * E.c2 - F.c2)
    return type(E)(chi * E.e - F.e, c1, c2, L)


def right_mutation_explicit(E, F):
    L = E.L
    chi = euler(E, F)
    c1 = tuple(chi * b - a for a, b in zip(E.c1, F.c1))
    c2 = (chi * (chi - 1) // 2 * pair(L, F.c1, F.c1) - chi * pair(L, E.c1, F.c1)
          + pair(L, E.c1, E.c1) + chi * F.c2 - E.c2)
    return type(E)(chi * F.e - E.e, c1, c2, L)


def mutate_pair(E, F, direction):
    if euler(F, E) != 0:
        raise InvalidSequence("pair is not numerically exceptional: chi(F, E) != 0")
    if direction == "left":
        return left_mutation(E, F), E
    if direction == "right":
        return F, right_mutation(E, F)
    raise ValueError(f"bad direction {direction!r}")


def mutate_seq(seq, step, check=True):
    """Apply L_i or R_i at 1-based position i; output revalidated when check is set."""
    if isinstance(step, tuple):
        step = MutationStep(*step)
    i = step.position
    if not 1 <= i < len(seq):
        raise IndexError(f"position {i} out of range for length {len(seq)}")
    a, b = mutate_pair(seq[i - 1], seq[i], step.direction)
    out = list(seq[:i - 1]) + [a, b] + list(seq[i + 1:])
    if check:
        diag = validate_sequence(out)
        if not diag["ok"]:
            raise AssertionError(f"mutation produced invalid sequence: {diag['failures']}")
    return out


def apply_steps(seq, steps, check=False):
    for s in steps:
        seq = mutate_seq(seq, s, check=check)
    return seq


def right_rotation_steps(n, i=1):
    """Steps moving the member at position i to the end by right mutations."""
    return [MutationStep(p, "right") for p in range(i, n)]


def left_rotation_steps(n, i=None):
    """Steps moving the member at position i (default last) to the front."""
    i = n if i is None else i
    return [MutationStep(p, "left") for p in range(i - 1, 0, -1)]


def _ring_mul(x, y, chi):
    # elements p*alpha + q of Z[alpha]/(alpha^2 - chi alpha + 1)
    p, q = x
    r, s = y
    return (p * r * chi + p * s + q * r, q * s - p * r)


def _ring_pow(k, chi):
    out, base = (0, 1), (1, 0)
    while k:
        if k & 1:
            out = _ring_mul(out, base, chi)
        base = _ring_mul(base, base, chi)
        k >>= 1
    return out


def _quotient(k, chi):
    """(alpha_+^k - alpha_-^k) / (alpha_+ - alpha_-), the alpha-coefficient of alpha^k."""
    return _ring_pow(k, chi)[0]


def rank_recurrence_iter(e0, e1, chi, i):
    a, b = e0, e1
    for _ in range(i):
        a, b = b, chi * b - a
    return a


def rank_recurrence(e0, e1, chi, i):
    """Rank e_i of E_{i+2} = R_{E_{i+1}} E_i, from e_0, e_1 and chi(E_0, E_1)."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if i < 2:
        return (e0, e1)[i]
    if chi * chi > 4:
        return _quotient(i + 1, chi) * e0 - _quotient(i, chi) * (chi * e0 - e1)
    if chi == 0:
        return (-1) ** (i // 2) * (e0 if i % 2 == 0 else e1)
    if chi * chi == 1:
        k, r = divmod(i, 3)
        base = (e0, e1, chi * e1 - e0)[r]
        return (-chi) ** k * base
    if chi == 2:
        return i * e1 + e0 * (1 - i)
    return (-1) ** (i + 1) * (i * e1 - e0 * (1 - i))


def verify_braid(seq):
    """Check L_i R_i = id and the braid relation for all admissible positions."""
    n = len(seq)
    inverse_ok, braid_ok = [], []
    for i in range(1, n):
        r = mutate_seq(seq, MutationStep(i, "right"), check=False)
        back = mutate_seq(r, MutationStep(i, "left"), check=False)
        lft = mutate_seq(seq, MutationStep(i, "left"), check=False)
        back2 = mutate_seq(lft, MutationStep(i, "right"), check=False)
        inverse_ok.append(back == list(seq) and back2 == list(seq))
    for i in range(1, n - 1):
        a = apply_steps(seq, [MutationStep(i, "right"), MutationStep(i + 1, "right"),
                              MutationStep(i, "right")])
        b = apply_steps(seq, [MutationStep(i + 1, "right"), MutationStep(i, "right"),
                              MutationStep(i + 1, "right")])
        braid_ok.append(a == b)
    return {"ok": all(inverse_ok) and all(braid_ok), "inverse": inverse_ok,
            "braid": braid_ok}


def mutation_transform_check(E, F, G):
    """The transforms of chi and relative c1 under R_F E, for a triple (E, F, G)."""
    R = right_mutation(E, F)
    return {
        "chi_F_R": euler(F, R) == euler(E, F),
        "chi_R_G": euler(R, G) == euler(E, F) * euler(F, G) - euler(E, G),
        "rel_c1": rel_c1(F, R) == rel_c1(E, F),
    }
