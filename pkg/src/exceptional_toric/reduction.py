"""Global algorithms: convexity reduction, normal forms, rank-one reduction,
Markov triples and the cyclic-strong length predicate."""
import logging
from dataclasses import dataclass, field
from math import isqrt

from .classes import euler, rel_c1, serre_twist_inverse
from .gale import ToricFan, winding_number
from .lattice import pair
from .mutation import MutationStep, apply_steps, mutate_seq
from .toric_geometry import classify_cone, k_squared, normalize_triple
from .toric_system import contract, extract, move_rank_zero, shift_to_positive

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    def __init__(self, msg, certificate):
        super().__init__(msg)
        self.certificate = certificate


class NormalFormError(RuntimeError):
    pass


@dataclass
class ReductionCertificate:
    initial: list
    steps: list = field(default_factory=list)
    final: list = None
    normalized: list = None
    tag: str = None
    log: list = field(default_factory=list)

    def replay(self):
        return apply_steps(self.initial, self.steps)

    def replays(self):
        return self.replay() == self.final


class _Runner:
    """Mutation bookkeeping shared by the reduction procedures."""

    def __init__(self, seq, budget=None):
        self.seq = list(seq)
        self.cert = ReductionCertificate(initial=list(seq))
        n = len(seq)
        self.budget = budget if budget is not None else n * sum(N.e ** 2 for N in seq)

    def apply(self, step):
        if len(self.cert.steps) >= self.budget:
            self.cert.final = list(self.seq)
            raise BudgetExceeded(f"step budget {self.budget} exceeded", self.cert)
        self.seq = mutate_seq(self.seq, step)
        self.cert.steps.append(step)

    def zero_left(self, k):
        """Move the rank-zero member at 1-based position k one place left."""
        out, step = move_rank_zero(self.seq, k, "left", check=False)
        self.apply(step)
        assert self.seq == out

    def zeros_to_front(self):
        done = 0
        while True:
            idx = next((i for i in range(done, len(self.seq)) if self.seq[i].e == 0), None)
            if idx is None:
                return
            for p in range(idx + 1, done + 1, -1):
                self.zero_left(p)
            done += 1

    def t(self):
        return sum(1 for N in self.seq if N.e == 0)


def _pair_data(E, F):
    rel = rel_c1(E, F)
    a = pair(E.L, rel, rel)
    return a, a + E.e ** 2 + F.e ** 2


def _eligible(seq):
    """(j, a_j, a_j + r_j^2 + r_{j+1}^2) for the cyclic pairs of nonzero members."""
    ts = extract(seq, check=False)
    rts = contract(ts)
    m = ts.m
    out = []
    for j in range(m):
        r0, r1 = rts.ranks[j], rts.ranks[(j + 1) % m]
        a = r0 ** 2 * r1 ** 2 * pair(rts.L, rts.Atildes[j], rts.Atildes[j])
        s = a + r0 ** 2 + r1 ** 2
        out.append((j, a, s))
    return out, ts


def _rank_drop_step(run, p):
    """One strict-decrease mutation on the pair at 1-based positions (p, p+1)."""
    E, F = run.seq[p - 1], run.seq[p]
    a, s = _pair_data(E, F)
    e, f = E.e, F.e
    # replace a member of maximal |rank|: left replaces F, right replaces E
    cands = []
    xl = (a + e * e) // f
    assert xl * f == a + e * e
    if f * f >= e * e and xl * xl < f * f:
        cands.append((xl * xl, 1, "left"))
    xr = (a + f * f) // e
    assert xr * e == a + f * f
    if e * e >= f * f and xr * xr < e * e:
        cands.append((xr * xr, 0, "right"))
    if not cands:
        raise AssertionError("no rank-decreasing mutation for a convex pair with a < 0")
    new_sq, _, direction = min(cands)
    before = max(e * e, f * f)
    run.apply(MutationStep(p, direction))
    E2, F2 = run.seq[p - 1], run.seq[p]
    a2, s2 = _pair_data(E2, F2)
    assert a2 == a, "a must be invariant"
    if E2.e and F2.e and s2 == 0:
        raise AssertionError("a non-flat pair mutated into a flat pair")
    after = max(E2.e ** 2, F2.e ** 2)
    run.cert.log.append({"pair": p, "direction": direction, "max_rank_sq_before": before,
                         "max_rank_sq_after": after, "new_rank_sq": new_sq})
    assert after < before or (after == before and e * e == f * f)


def _rotate_wrap(run):
    """Bring the last member to the front and re-park the zeros before it."""
    n = len(run.seq)
    t = run.t()
    for p in range(n - 1, 0, -1):
        run.apply(MutationStep(p, "left"))
    # member now at position 1, zeros at 2..t+1
    for z in range(t):
        run.zero_left(z + 2)
    for i in range(run.t()):
        assert run.seq[i].e == 0


def _reduce(run):
    run.zeros_to_front()
    while True:
        pairs, ts = _eligible(run.seq)
        m, t = ts.m, ts.t
        act = [j for j, a, s in pairs if s > 0 and a < 0]
        if not act:
            for j, a, s in pairs:
                if s < 0 and a < 0:
                    log.debug("terminal form has a concave pair %d with a = %d < 0", j, a)
                    run.cert.log.append({"diagnostic": "concave pair with a < 0",
                                         "pair": j, "a": a})
            return
        interior = [j for j in act if j < m - 1]
        if interior:
            j = interior[0]
        else:
            _rotate_wrap(run)
            j = 0
        p = t + j + 1  # 1-based position of the first member of the pair
        while True:
            E, F = run.seq[p - 1], run.seq[p]
            if E.e == 0 or F.e == 0:
                break
            a, s = _pair_data(E, F)
            if not (s > 0 and a < 0):
                break
            _rank_drop_step(run, p)
        # a newly created rank-zero member goes to the front
        run.zeros_to_front()


def convexity_reduce(seq, budget=None):
    run = _Runner(seq, budget)
    _reduce(run)
    run.cert.final = list(run.seq)
    run.cert.normalized = shift_to_positive(run.seq)
    return run.cert


def is_markov(x, y, z):
    return x * x + y * y + z * z == 3 * x * y * z


def _classify_terminal(seq):
    n = len(seq)
    ranks = [abs(N.e) for N in seq if N.e != 0]
    t = n - len(ranks)
    if t == n - 3 and is_markov(*ranks):
        return "markov-triple"
    if t == n - 4 and all(r == 1 for r in ranks):
        return "rank-one-zero"
    return None


def normal_form(seq, budget=None):
    run = _Runner(seq, budget)
    _reduce(run)
    tag = _classify_terminal(run.seq)
    if tag is None:
        raise NormalFormError(f"terminal ranks {[N.e for N in run.seq]} fit no normal form")
    run.cert.final = list(run.seq)
    run.cert.normalized = shift_to_positive(run.seq)
    run.cert.tag = tag
    return run.cert


def _markov_descent(run):
    while True:
        t = run.t()
        nz = list(range(t, len(run.seq)))
        ranks = [abs(run.seq[i].e) for i in nz]
        assert len(nz) == 3 and is_markov(*ranks)
        if max(ranks) == 1:
            return
        big = nz[max(range(3), key=lambda i: (ranks[i], -i))]
        total = sum(r * r for r in ranks)
        cands = []
        # right mutation with the following member replaces it by R
        if big + 1 < len(run.seq):
            E, F = run.seq[big], run.seq[big + 1]
            x = euler(E, F) * F.e - E.e
            cands.append((x * x, 0, MutationStep(big + 1, "right")))
        if big - 1 >= t:
            E, F = run.seq[big - 1], run.seq[big]
            x = euler(E, F) * E.e - F.e
            cands.append((x * x, 1, MutationStep(big, "left")))
        cands = [c for c in cands if total - ranks[nz.index(big)] ** 2 + c[0] < total]
        if not cands:
            raise AssertionError("Markov descent stalled")
        run.apply(min(cands)[2])
        run.cert.log.append({"markov": [abs(run.seq[i].e) for i in nz]})


def _eliminate_zeros(run):
    while run.t():
        t = run.t()
        F = run.seq[t]
        assert abs(F.e) == 1
        run.apply(MutationStep(t, "right"))
        assert abs(run.seq[t].e) == 1


def to_rank_one(seq, budget=None):
    run = _Runner(seq, budget)
    if all(abs(N.e) == 1 for N in seq):
        run.cert.final = list(seq)
    else:
        _reduce(run)
        tag = _classify_terminal(run.seq)
        if tag is None:
            raise NormalFormError(f"terminal ranks {[N.e for N in run.seq]} fit no normal form")
        if tag == "markov-triple":
            _markov_descent(run)
        _eliminate_zeros(run)
        run.cert.final = list(run.seq)
    assert all(abs(N.e) == 1 for N in run.cert.final)
    run.cert.normalized = shift_to_positive(run.cert.final)
    run.cert.tag = "rank-one"
    return run.cert


def markov_enumerate(bound):
    """All Markov triples e <= f <= g <= bound, by exchange moves from (1, 1, 1)."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    seen = {(1, 1, 1)}
    todo = [(1, 1, 1)]
    while todo:
        x = todo.pop()
        for i in range(3):
            y = list(x)
            others = [x[j] for j in range(3) if j != i]
            y[i] = 3 * others[0] * others[1] - x[i]
            y = tuple(sorted(y))
            if y[0] >= 1 and y[2] <= bound and y not in seen:
                seen.add(y)
                todo.append(y)
    out = sorted(seen)
    assert all(is_markov(*x) for x in out)
    return out


def markov_bruteforce(bound):
    """Independent search: solve the quadratic in g for each e <= f."""
    out = []
    for e in range(1, bound + 1):
        for f in range(e, bound + 1):
            disc = 9 * e * e * f * f - 4 * (e * e + f * f)
            if disc < 0:
                continue
            s = isqrt(disc)
            if s * s != disc:
                continue
            for g2 in (3 * e * f - s, 3 * e * f + s):
                if g2 % 2 == 0:
                    g = g2 // 2
                    if f <= g <= bound:
                        out.append((e, f, g))
    return sorted(set(out))


def weighted_projective_fan(triple):
    """Fan of P(e1^2, e2^2, e3^2) for a Markov triple."""
    e1, e2, e3 = sorted(triple)
    if not is_markov(e1, e2, e3):
        raise ValueError(f"{triple} is not a Markov triple")
    rays = normalize_triple(e3 * e3, e2 * e2, e1 * e1)
    ranks = (e1, e3, e2)  # volumes det(l1,l2)=e1^2, det(l2,l3)=e3^2, det(l3,l1)=e2^2
    fan = ToricFan(tuple(rays), (1, 1, 1), ranks, (), tuple(r * r for r in ranks),
                   winding_number(rays))
    for i in range(3):
        st = classify_cone(rays[i], rays[(i + 1) % 3])
        assert st.smooth or st.t_index == ranks[i]
    assert k_squared(rays) == 9
    return fan


def cyclic_strong_bound_check(seq):
    """Necessary numerical conditions for a cyclic strongly exceptional sequence."""
    L = seq[0].L
    n = len(seq)
    K2 = L.K2
    helix = [serre_twist_inverse(N) for N in seq]
    nonneg = True
    inequality = True
    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            c = euler(seq[i], seq[j])
            c2 = euler(seq[j], helix[i])
            if c < 0 or c2 < 0:
                nonneg = False
            prod = seq[i].e * seq[j].e
            if prod * K2 < c:
                inequality = False
            if prod > 0 and c > 0 and witness is None:
                witness = (i, j, c, prod * K2)
    convex = None
    if all(N.e != 0 for N in seq) and n == L.n:
        # det(w_i, w_{i+1}) = chi(F_i, F_{i+1}) around one helix winding
        ext = list(seq) + [helix[0]]
        convex = all(euler(ext[i], ext[i + 1]) >= 0 for i in range(n))
    candidate = nonneg and K2 > 0 and n <= 11 and inequality
    return {"candidate": candidate, "cyclic_nonnegative": nonneg, "K2": K2,
            "K2_positive": K2 > 0, "length_ok": n <= 11, "n": n,
            "inequality": inequality, "witness": witness, "fan_convex": convex}
