"""Gale-dual fans of reduced toric systems.

Indexing: for a reduced system with classes A~_0..A~_{m-1} and ranks
r_0..r_{m-1} (A~_k sits between members k and k+1), rays[k] is dual to
A~_{k-1}.  Cone k = (rays[k], rays[k+1]) is flanked by member k and has
volume r_k^2, and for every k

    r_{k+1}^2 rays[k] + a_k rays[k+1] + r_k^2 rays[k+2] = 0,
    a_k = r_k^2 r_{k+1}^2 (A~_k)^2.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .classes import euler, rel_c1
from .lattice import pair
from .linalg import (det2, is_integral, is_primitive, lattice_length, mat_vec, to_int,
                     vadd, vgcd, vscale, vsub)
from .mutation import mutate_seq
from .toric_geometry import classify_cone, k_squared
from .toric_system import contract, extract, multiplicity_counts


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class ToricFan:
    rays: tuple
    multiplicities: tuple
    ranks: tuple = ()
    a: tuple = ()
    volumes: tuple = field(default=())
    winding: int = 1

    @property
    def m(self):
        return len(self.rays)


@dataclass(frozen=True)
class CircumferenceData:
    p: tuple
    q: tuple
    w: tuple


def _angle_key(v):
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def angle_less(u, v):
    """Exact comparison of polar angles in [0, 2 pi)."""
    hu, hv = _angle_key(u), _angle_key(v)
    if hu != hv:
        return hu < hv
    return det2(u, v) > 0


def winding_number(rays):
    """Number of times a counterclockwise cyclic ray list goes around the origin."""
    m = len(rays)
    for i in range(m):
        if det2(rays[i], rays[(i + 1) % m]) <= 0:
            raise FanError(f"consecutive rays {i}, {(i + 1) % m} not positively oriented")
    return sum(1 for i in range(m) if angle_less(rays[(i + 1) % m], rays[i]))


def pair_coefficients(rts):
    """a_k = r_k^2 r_{k+1}^2 (A~_k)^2, integral."""
    m, r = rts.m, rts.ranks
    out = []
    for k in range(m):
        val = r[k] ** 2 * r[(k + 1) % m] ** 2 * pair(rts.L, rts.Atildes[k], rts.Atildes[k])
        if not is_integral(val):
            raise FanError(f"a_{k} = {val} is not integral")
        out.append(to_int(val))
    return out


def _try_seed(c, v2, a):
    m = len(a)
    rays = [(1, 0), (c, v2[0])]
    for k in range(m):
        num = vadd(vscale(v2[(k + 1) % m], rays[k]), vscale(a[k], rays[k + 1]))
        if num[0] % v2[k] or num[1] % v2[k]:
            return None
        nxt = (-num[0] // v2[k], -num[1] // v2[k])
        if not is_primitive(nxt):
            return None
        rays.append(nxt)
    if rays[m] != rays[0] or rays[m + 1] != rays[1]:
        return None
    return rays[:m]


def _spans(rays):
    g = 0
    for u, v in combinations(rays, 2):
        g = gcd(g, det2(u, v))
    return g == 1


def build_fan(rts, mult=None):
    """Gale-dual fan of a reduced toric system, seed-normalized."""
    m, r = rts.m, rts.ranks
    if m < 3:
        raise FanError("need at least three nonzero-rank members")
    v2 = [x * x for x in r]
    a = pair_coefficients(rts)
    seed = [0] if v2[0] == 1 else [c for c in range(v2[0]) if gcd(c, v2[0]) == 1]
    rays = None
    for c in seed:
        rays = _try_seed(c, v2, a)
        if rays is not None:
            break
    if rays is None:
        raise FanError("no seed gives an integral, primitive, closing configuration")
    # kernel property: sum_k rays[k+1] (x) A~_k = 0
    for x in range(2):
        tot = (0,) * rts.L.rho
        for k in range(m):
            tot = vadd(tot, vscale(rays[(k + 1) % m][x], rts.Atildes[k]))
        if any(tot):
            raise FanError("rays are not dual to the relations among the A~")
    if not _spans(rays):
        raise FanError("rays do not span the lattice")
    for k in range(m):
        assert det2(rays[k], rays[(k + 1) % m]) == v2[k]
        if a[k] == 0:
            assert v2[k] == v2[(k + 1) % m] and rays[k] == vscale(-1, rays[(k + 2) % m])
    w = winding_number(rays)
    if w != 1:
        raise FanError(f"winding number {w} != 1")
    mult = tuple(mult) if mult is not None else (1,) * m
    return ToricFan(tuple(rays), mult, tuple(r), tuple(a), tuple(v2), w)


def attach_multiplicities(ts, fan):
    """Ray dual to A~_i gets multiplicity 1 + #{j : phi(j) = i}."""
    counts = multiplicity_counts(ts)
    m = len(counts)
    mult = tuple(counts[(k - 1) % m] for k in range(m))
    return ToricFan(fan.rays, mult, fan.ranks, fan.a, fan.volumes, fan.winding)


def fan_of_sequence(seq):
    ts = extract(seq)
    fan = build_fan(contract(ts))
    fan = attach_multiplicities(ts, fan)
    if sum(fan.multiplicities) != len(seq):
        raise FanError("multiplicities do not add up to the sequence length")
    return fan


def circumference(fan, i):
    """p = l_{i+1} - l_i, q = p / v_i, w = r_i q for cone i."""
    m = fan.m
    l1, l2 = fan.rays[i], fan.rays[(i + 1) % m]
    r = fan.ranks[i]
    v = det2(l1, l2)
    if v != r * r:
        raise FanError(f"cone {i} has volume {v} != r^2 = {r * r}")
    p = vsub(l2, l1)
    q = tuple(Fraction(x, v) for x in p)
    w = tuple(r * x for x in q)
    if not all(is_integral(x) for x in w):
        raise FanError(f"w = {w} is not integral")
    w = tuple(to_int(x) for x in w)
    if lattice_length(p) != abs(r):
        raise FanError(f"lattice length of p is {lattice_length(p)} != |r| = {abs(r)}")
    return CircumferenceData(p, q, w)


def cone_records(fan):
    out = []
    for i in range(fan.m):
        st = classify_cone(fan.rays[i], fan.rays[(i + 1) % fan.m])
        out.append({"volume": st.v, "k": st.k, "type": st.label, "smooth": st.smooth})
    return out


def check_fan(fan):
    """The global properties every genuine fan must have."""
    m = fan.m
    out = {}
    out["primitive"] = all(is_primitive(r) for r in fan.rays)
    out["winding"] = winding_number(fan.rays) == 1
    out["volumes"] = all(det2(fan.rays[i], fan.rays[(i + 1) % m]) == fan.ranks[i] ** 2
                         for i in range(m))
    try:
        out["circumference"] = all(circumference(fan, i) is not None for i in range(m))
    except FanError:
        out["circumference"] = False
    types = [classify_cone(fan.rays[i], fan.rays[(i + 1) % m]) for i in range(m)]
    out["T_cones"] = all(st.smooth or st.t_index == abs(fan.ranks[i])
                         for i, st in enumerate(types))
    out["K2"] = k_squared(fan.rays) == 12 - m
    out["multiplicities"] = all(x >= 1 for x in fan.multiplicities)
    return {"ok": all(out.values()), "checks": out}


def convexity(E, F):
    """Sign of a + e^2 + f^2 for a pair of nonzero ranks."""
    if E.e == 0 or F.e == 0:
        raise ValueError("convexity needs nonzero ranks")
    rel = rel_c1(E, F)
    a = pair(E.L, rel, rel)
    s = a + E.e ** 2 + F.e ** 2
    kind = "convex" if s > 0 else ("concave" if s < 0 else "flat")
    return kind, s


def solve_gl2(src, dst):
    """Integer g with det +-1 and g src[0] = dst[0], g src[1] = dst[1], or None."""
    d = det2(src[0], src[1])
    if d == 0:
        return None
    # columns: g = D S^{-1}, S = [src0 src1]
    s00, s10 = src[0]
    s01, s11 = src[1]
    inv = ((s11, -s01), (-s10, s00))
    D = ((dst[0][0], dst[1][0]), (dst[0][1], dst[1][1]))
    g = []
    for i in range(2):
        row = []
        for j in range(2):
            val = D[i][0] * inv[0][j] + D[i][1] * inv[1][j]
            if val % d:
                return None
            row.append(val // d)
        g.append(tuple(row))
    g = tuple(g)
    if abs(g[0][0] * g[1][1] - g[0][1] * g[1][0]) != 1:
        return None
    return g


def _independent_pair(rays):
    for i, j in combinations(range(len(rays)), 2):
        if det2(rays[i], rays[j]):
            return i, j
    raise FanError("rays do not span")


def gl2_maps(src_set, dst_set):
    """All g in GL2(Z) with g(src_set) = dst_set as sets."""
    src = sorted(set(map(tuple, src_set)))
    dst = set(map(tuple, dst_set))
    if len(src) != len(dst):
        return []
    i, j = _independent_pair(src)
    out = []
    for u in dst:
        for v in dst:
            g = solve_gl2((src[i], src[j]), (u, v))
            if g is not None and {mat_vec(g, r) for r in src} == dst and g not in out:
                out.append(g)
    return out


def equivalent_fans(rays1, rays2):
    return bool(gl2_maps(rays1, rays2))


def locality_automorphism(fan0, fan1, moved):
    """g with g(fan1.rays[j]) = fan0.rays[j] for all j != moved."""
    m = fan0.m
    keep = [j for j in range(m) if j != moved]
    for a_, b_ in combinations(keep, 2):
        if det2(fan1.rays[a_], fan1.rays[b_]):
            g = solve_gl2((fan1.rays[a_], fan1.rays[b_]), (fan0.rays[a_], fan0.rays[b_]))
            if g is None:
                return None
            if all(mat_vec(g, fan1.rays[j]) == fan0.rays[j] for j in keep):
                return g
            return None
    return None


def mutation_locality_check(seq, step):
    """One mutation moves exactly one ray; check the explicit transformation rules."""
    if any(N.e == 0 for N in seq):
        raise ValueError("all ranks must be nonzero")
    new = mutate_seq(seq, step)
    if any(N.e == 0 for N in new):
        raise ValueError("mutation produced a rank-zero member")
    fan0, fan1 = fan_of_sequence(seq), fan_of_sequence(new)
    p = step.position - 1  # members p, p+1 form the pair
    m = fan0.m
    moved = (p + 1) % m
    g = locality_automorphism(fan0, fan1, moved)
    report = {"ok": False, "automorphism": g, "moved": moved}
    if g is None:
        return report
    E, F = seq[p], seq[p + 1]
    e, f = E.e, F.e
    rel = rel_c1(E, F)
    a = pair(E.L, rel, rel)
    chi = euler(E, F)
    l_e, l, l_f = fan0.rays[p], fan0.rays[(p + 1) % m], fan0.rays[(p + 2) % m]
    w_e = circumference(fan0, p).w
    w_f = circumference(fan0, (p + 1) % m).w
    lnew = mat_vec(g, fan1.rays[moved])
    # new segments in old coordinates
    nw_e = vsub(lnew, l_e)
    nw_f = vsub(l_f, lnew)
    e1, f1 = new[p].e, new[p + 1].e
    if nw_e[0] % e1 or nw_e[1] % e1 or nw_f[0] % f1 or nw_f[1] % f1:
        return report
    nw_e = (nw_e[0] // e1, nw_e[1] // e1)
    nw_f = (nw_f[0] // f1, nw_f[1] // f1)
    if step.direction == "right":
        coef = Fraction(a + f * f, e)
        pred = vadd(l_f, tuple(coef * x for x in w_e))
        pred_w = (vadd(vscale(chi, w_e), w_f), vscale(-1, w_e))
    else:
        coef = Fraction(a + e * e, f)
        pred = vsub(l_e, tuple(coef * x for x in w_f))
        pred_w = (vscale(-1, w_f), vadd(vscale(chi, w_f), w_e))
    report.update({
        "det_w": det2(w_e, w_f) == chi,
        "new_ray": tuple(pred) == lnew,
        "new_w": (nw_e, nw_f) == pred_w,
        "lengths": (vgcd(nw_e), vgcd(nw_f)) == (vgcd(w_e), vgcd(w_f))
                   or (vgcd(nw_e), vgcd(nw_f)) == (vgcd(w_f), vgcd(w_e)),
    })
    report["ok"] = all(report[k] for k in ("det_w", "new_ray", "new_w", "lengths"))
    report["fans"] = (fan0, fan1)
    return report
