"""Two-dimensional cones and fans: cyclic quotient singularities, Hirzebruch-Jung
expansions, class-T test, K^2 bookkeeping and minimal resolutions.

Rays are integer pairs; fans are cyclic, counterclockwise lists of rays.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .linalg import det2, ext_gcd, is_primitive, mat_vec, sl2_to_e2, vadd, vgcd, vscale, vsub


@dataclass(frozen=True)
class SingularityType:
    v: int
    k: int

    @property
    def smooth(self):
        return self.v == 1

    @property
    def t_index(self):
        """e if the cone is 1/e^2(1, k'e - 1) with gcd(k', e) = 1, e >= 2; else None."""
        e = isqrt(self.v)
        if e < 2 or e * e != self.v or (self.k + 1) % e:
            return None
        return e if gcd((self.k + 1) // e, e) == 1 else None

    @property
    def is_T(self):
        return not self.smooth and is_T(hj_expand(self.v, self.k))

    @property
    def label(self):
        if self.smooth:
            return "smooth"
        if self.t_index is not None:
            return "T"
        return "T-d" if self.is_T else "non-T"

    def __str__(self):
        return f"1/{self.v}(1,{self.k})"


@dataclass(frozen=True)
class HJExpansion:
    bs: tuple
    volumes: tuple  # V_0 = v, V_1 = k, ..., V_r = 1


def normalize_cone(l1, l2):
    """(v, k) with an SL2(Z) map taking l1 to (1, 0) and l2 to (-k, v)."""
    if not (is_primitive(l1) and is_primitive(l2)):
        raise ValueError(f"non-primitive cone generators {l1}, {l2}")
    v = det2(l1, l2)
    if v <= 0:
        raise ValueError(f"cone ({l1}, {l2}) is not positively oriented")
    g = cone_normalizer(l1, l2)
    x, y = mat_vec(g, l2)
    assert mat_vec(g, l1) == (1, 0) and y == v
    return SingularityType(v, -x)


def cone_normalizer(l1, l2):
    """SL2(Z) matrix g with g l1 = (1, 0) and g l2 = (-k, v), 0 <= k < v."""
    x1, y1 = l1
    _, p, q = ext_gcd(x1, y1)
    g = ((p, q), (-y1, x1))
    s, v = mat_vec(g, l2)
    k = (-s) % v
    t = (-k - s) // v
    return ((g[0][0] + t * g[1][0], g[0][1] + t * g[1][1]), g[1])


def classify_cone(l1, l2):
    return normalize_cone(l1, l2)


def hj_expand(v, k):
    """v/k = [b_1, ..., b_r] with b_i >= 2; volumes V_0 = v, V_1 = k, ..., V_r = 1."""
    if not (0 < k < v and gcd(k, v) == 1):
        if v == 1 and k == 0:
            return HJExpansion((), (1,))
        raise ValueError(f"need 0 < k < v coprime, got v={v}, k={k}")
    bs, vols = [], [v, k]
    while vols[-1] != 1:
        a, b = vols[-2], vols[-1]
        c = -(-a // b)
        bs.append(c)
        vols.append(c * b - a)
    bs.append(vols[-2])  # last step: V_{r-1} / 1
    return HJExpansion(tuple(bs), tuple(vols))


def hj_evaluate(bs):
    """Value of the continued fraction b_1 - 1/(b_2 - 1/(...))."""
    val = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        val = b - 1 / val
    return val


@lru_cache(maxsize=None)
def _is_T_list(bs):
    if bs == (4,):
        return True
    if len(bs) >= 2 and bs[0] == 3 and bs[-1] == 3 and all(b == 2 for b in bs[1:-1]):
        return True
    if len(bs) < 2:
        return False
    if bs[0] == 2 and bs[-1] >= 3 and _is_T_list(bs[1:-1] + (bs[-1] - 1,)):
        return True
    if bs[-1] == 2 and bs[0] >= 3 and _is_T_list((bs[0] - 1,) + bs[1:-1]):
        return True
    return False


def is_T(exp):
    """Class-T test by reverse peeling of the expansion."""
    bs = exp.bs if isinstance(exp, HJExpansion) else exp
    return _is_T_list(tuple(bs))


def is_T_arithmetic(v, k):
    """Direct test: v = d e^2, k = k' d e - 1 with gcd(k', e) = 1, e >= 2."""
    for e in range(2, isqrt(v) + 1):
        if v % (e * e):
            continue
        d = v // (e * e)
        if (k + 1) % (d * e) == 0 and gcd((k + 1) // (d * e), e) == 1:
            return True
    return False


def circumference_length(v, k):
    """Lattice length of l2 - l1 for the normalized cone 1/v(1, k)."""
    return gcd(v, k + 1)


def normalize_triple(a1, a2, a3):
    """Primitive l1, l2, l3 with a1 l1 + a2 l2 + a3 l3 = 0, l1 = (1, 0), l2 = (x, a3)."""
    if a1 <= 0 or a3 <= 0:
        raise ValueError("a1 and a3 must be positive")
    g = gcd(gcd(a1, a2), a3)
    if gcd(a1, a2) != g or gcd(a2, a3) != g or gcd(a1, a3) != g:
        raise ValueError(f"inconsistent gcds for ({a1}, {a2}, {a3})")
    for x in range(0, -a3, -1):
        num = a1 + a2 * x
        if num % a3:
            continue
        l2, l3 = (x, a3), (-num // a3, -a2)
        if is_primitive(l2) and is_primitive(l3):
            return (1, 0), l2, l3
    raise ValueError(f"no integral primitive solution for ({a1}, {a2}, {a3})")


def fan_volumes(rays):
    m = len(rays)
    return [det2(rays[i], rays[(i + 1) % m]) for i in range(m)]


def segments(rays):
    """Reduced circumference segments q_i = (l_{i+1} - l_i) / v_i."""
    m = len(rays)
    out = []
    for i in range(m):
        v = det2(rays[i], rays[(i + 1) % m])
        p = vsub(rays[(i + 1) % m], rays[i])
        out.append(tuple(Fraction(a, v) for a in p))
    return out


def ray_terms(rays):
    """Per-ray K^2 contributions (a_i + v_i + v_{i+1}) / (v_i v_{i+1})."""
    m = len(rays)
    out = []
    for i in range(m):
        lm, l, lp = rays[i - 1], rays[i], rays[(i + 1) % m]
        v0, v1, a = det2(lm, l), det2(l, lp), det2(lp, lm)
        out.append(Fraction(a + v0 + v1, v0 * v1))
    return out


def k_squared(rays):
    """K^2 of the complete toric surface of a winding-one fan, exact."""
    rays = getattr(rays, "rays", rays)
    if any(v <= 0 for v in fan_volumes(rays)):
        raise ValueError("fan is not positively oriented")
    total = sum(ray_terms(rays), Fraction(0))
    q = segments(rays)
    m = len(rays)
    alt = sum((det2(q[i - 1], q[i]) for i in range(m)), Fraction(0))
    assert total == alt
    return total


def hj_rays(l1, l2):
    """Rays u_1..u_r resolving the cone (l1, l2), in order from l1."""
    st = normalize_cone(l1, l2)
    if st.smooth:
        return [], hj_expand(1, 0)
    exp = hj_expand(st.v, st.k)
    u_prev = l1
    u = tuple(a // st.v for a in vadd(l2, vscale(st.k, l1)))
    assert vscale(st.v, u) == vadd(l2, vscale(st.k, l1))
    out = []
    for b in exp.bs:
        out.append(u)
        u_prev, u = u, vsub(vscale(b, u), u_prev)
    assert u == tuple(l2)
    return out, exp


def resolution_drop(exp):
    """K^2 drop of the minimal resolution of one cone."""
    V = exp.volumes
    return sum((Fraction((V[i] - V[i - 1] + 1) ** 2, V[i - 1] * V[i])
                for i in range(1, len(V))), Fraction(0))


def resolve_fan(rays):
    """Minimal resolution: smooth fan, per-cone expansions and a K^2 ledger.

    Rays are inserted one at a time; each partial step is checked against
    the single-step K^2 drop and the relation for the remaining cone.
    """
    rays = [tuple(r) for r in getattr(rays, "rays", rays)]
    m = len(rays)
    k_in = k_squared(rays)
    current = list(rays)
    cones, ledger = [], []
    for i in range(m):
        l1, l2 = rays[i], rays[(i + 1) % m]
        new, exp = hj_rays(l1, l2)
        cones.append({"index": i, "v": exp.volumes[0],
                      "k": exp.volumes[1] if len(exp.volumes) > 1 else 0,
                      "bs": list(exp.bs), "self_intersections": [-b for b in exp.bs],
                      "drop": resolution_drop(exp)})
        if not new:
            continue
        V = exp.volumes
        pos = current.index(l1)
        u3 = current[(current.index(l2) + 1) % len(current)]
        term0 = ray_terms(current)[current.index(l2)]
        partial = Fraction(0)
        for s, u in enumerate(new, start=1):
            before = k_squared(current)
            current.insert(pos + s, u)
            after = k_squared(current)
            step = Fraction((V[s] - V[s - 1] + 1) ** 2, V[s - 1] * V[s])
            assert before - after == step
            # remaining cone (u, l2), next ray u3: w u + b l2 + V_s u3 = 0
            w, b, Vs = det2(l2, u3), det2(u3, u), det2(u, l2)
            assert Vs == V[s]
            assert vadd(vadd(vscale(w, u), vscale(b, l2)), vscale(Vs, u3)) == (0, 0)
            partial += Fraction(V[s] - V[s - 1] + 1, V[s - 1] * V[s])
            term = ray_terms(current)[current.index(l2)]
            assert term0 - term == partial
            ledger.append({"cone": i, "step": s, "ray": list(u), "drop": step,
                           "K2": after})
    k_out = k_squared(current)
    assert all(v == 1 for v in fan_volumes(current))
    assert k_in - k_out == sum(c["drop"] for c in cones)
    return {"rays": current, "cones": cones, "ledger": ledger, "K2_in": k_in,
            "K2_out": k_out}


def resolved_self_intersections(rays, resolved):
    """Self-intersections of the strict transforms of the original rays."""
    n = len(resolved)
    out = []
    for r in rays:
        j = resolved.index(tuple(r))
        out.append(det2(resolved[(j + 1) % n], resolved[j - 1]))
    return out


def resolution_selfintersection_sum(rays):
    """Sum of strict-transform self-intersections; checks 12 - 3n + |I|."""
    rays = [tuple(r) for r in getattr(rays, "rays", rays)]
    res = resolve_fan(rays)
    a = resolved_self_intersections(rays, res["rays"])
    singular = [c for c in res["cones"] if c["v"] > 1]
    for c in singular:
        st = SingularityType(c["v"], c["k"])
        if st.t_index is None:
            raise ValueError(f"cone {c['index']} is not of type 1/e^2(1, ke - 1)")
        assert sum(c["bs"]) - 3 * len(c["bs"]) == 1
    n = len(rays)
    expected = 12 - 3 * n + len(singular)
    return {"a": a, "sum": sum(a), "expected": expected, "ok": sum(a) == expected,
            "singular": len(singular)}


def _alpha_beta(rays, i):
    """(alpha, beta) of cone i = (rays[i], rays[i+1]) of volume e^2.

    alpha: map rays[i+1] to (0, 1); rays[i] goes to (e^2, y), y = 1 - alpha e mod e^2.
    beta: map rays[i] to (0, 1); rays[i+1] goes to (-e^2, y), y = 1 - beta e mod e^2.
    """
    m = len(rays)
    l1, l2 = rays[i], rays[(i + 1) % m]
    v = det2(l1, l2)
    e = isqrt(v)
    g = sl2_to_e2(l2)
    x, y = mat_vec(g, l1)
    assert x == v
    alpha = next(a for a in range(1, e) if (y - 1 + a * e) % v == 0)
    g = sl2_to_e2(l1)
    x, y = mat_vec(g, l2)
    assert x == -v
    beta = next(b for b in range(1, e) if (y - 1 + b * e) % v == 0)
    return alpha, beta


def lambda_terms(rays):
    """Per-ray shear terms lambda_i = det(q_{i-1}, q_i) - tau - sigma.

    tau = alpha/e for a singular cone before the ray (1 if smooth), sigma =
    beta/f for the cone after it.  Checks alpha + beta = e on every singular
    cone and sum lambda = 12 - 3n + |I|.
    """
    rays = [tuple(r) for r in getattr(rays, "rays", rays)]
    m = len(rays)
    vols = fan_volumes(rays)
    ab = []
    for i in range(m):
        st = normalize_cone(rays[i], rays[(i + 1) % m])
        if st.smooth:
            ab.append(None)
            continue
        e = st.t_index
        if e is None:
            raise ValueError(f"cone {i} is {st}, not of type 1/e^2(1, ke - 1)")
        alpha, beta = _alpha_beta(rays, i)
        assert alpha == e - beta
        ab.append((e, alpha, beta))
    q = segments(rays)
    lam = []
    for i in range(m):
        before, after = ab[i - 1], ab[i]
        tau = Fraction(before[1], before[0]) if before else Fraction(1)
        sigma = Fraction(after[2], after[0]) if after else Fraction(1)
        lam.append(det2(q[i - 1], q[i]) - tau - sigma)
    singular = sum(1 for v in vols if v > 1)
    expected = 12 - 3 * m + singular
    total = sum(lam, Fraction(0))
    res = resolution_selfintersection_sum(rays)
    return {"lambda": lam, "sum": total, "expected": expected, "ok": total == expected,
            "resolution_a": res["a"],
            "difference": [x - y for x, y in zip(lam, res["a"])],
            "alpha_beta": ab}


def transform_rays(g, rays):
    return [mat_vec(g, r) for r in rays]


def lattice_length(v):
    return vgcd(v)
