import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import example_f1, random_walk, rng, seed_sequences, tangent_p2

from exceptional_toric.classes import (blowup_line_bundle_sequence, blowup_torsion_sequence,
                                       euler, line_bundle, p2_sequence)
from exceptional_toric.gale import (FanError, ToricFan, build_fan, check_fan, circumference,
                                    convexity, equivalent_fans, fan_of_sequence, gl2_maps,
                                    mutation_locality_check, winding_number)
from exceptional_toric.lattice import make_blowup_p2, make_hirzebruch
from exceptional_toric.linalg import det2, is_primitive, vadd, vscale
from exceptional_toric.mutation import MutationStep, left_mutation, mutate_pair, mutate_seq
from exceptional_toric.toric_geometry import classify_cone, k_squared
from exceptional_toric.toric_system import contract, extract

P114 = {(1, 0), (0, 1), (-1, -4)}


def f0_sequence():
    L = make_hirzebruch(0)
    return [line_bundle(L, D) for D in [(0, 0), (1, 0), (1, 1), (2, 1)]]


def test_build_fan_p2():
    fan = build_fan(contract(extract(p2_sequence())))
    assert fan.rays == ((1, 0), (0, 1), (-1, -1)) and fan.winding == 1


def test_build_fan_p1xp1():
    ts = extract(f0_sequence())
    assert ts.As == ((1, 0), (0, 1), (1, 0), (0, 1))
    fan = build_fan(contract(ts))
    assert fan.rays == ((1, 0), (0, 1), (-1, 0), (0, -1))
    assert fan.a == (0, 0, 0, 0)
    # zero coefficient: opposite rays
    assert all(fan.rays[k] == vscale(-1, fan.rays[(k + 2) % 4]) for k in range(4))


def test_build_fan_example_f1():
    fan = fan_of_sequence(example_f1())
    assert fan.rays == ((1, 0), (3, 4), (-1, -1))
    assert equivalent_fans(fan.rays, P114)
    assert fan.volumes == (4, 1, 1) and fan.a == (1, 4, 1)
    assert fan.multiplicities == (2, 1, 1)


def test_multiplicities():
    assert fan_of_sequence(tangent_p2()).multiplicities == (1, 1, 1)
    fan = fan_of_sequence(blowup_torsion_sequence(2))
    assert sorted(fan.multiplicities) == [1, 1, 3] and sum(fan.multiplicities) == 5


def test_winding_number_examples():
    p2 = [(1, 0), (0, 1), (-1, -1)]
    assert winding_number(p2) == 1
    assert winding_number(p2 * 2) == 2
    assert winding_number([(1, 0), (0, 1), (-1, -4)]) == 1
    with pytest.raises(FanError):
        winding_number([(1, 0), (-1, 0), (0, 1)])


def test_classify_cone_examples():
    assert classify_cone((1, 0), (0, 1)).smooth
    st_ = classify_cone((-1, -4), (1, 0))
    assert (st_.v, st_.k, st_.t_index, st_.label) == (4, 1, 2, "T")
    st_ = classify_cone((1, 0), (-1, 3))
    assert (st_.v, st_.k, st_.t_index) == (3, 1, None) and st_.label == "non-T"


def test_circumference_examples():
    fan = ToricFan(((1, 0), (0, 1), (-1, -4)), (1, 1, 1), (1, 1, 2))
    cd = circumference(fan, 2)
    assert cd.p == (2, 4) and cd.w == (1, 2)
    cd = circumference(fan, 0)
    assert cd.p == (-1, 1) and cd.w == (-1, 1)
    f1 = fan_of_sequence(tangent_p2())
    assert det2(circumference(f1, 0).w, circumference(f1, 1).w) == 3


def test_mutation_locality_example():
    seq = tangent_p2()
    for p in (1, 2):
        for d in ("left", "right"):
            rep = mutation_locality_check(seq, MutationStep(p, d))
            assert rep["ok"], rep
    rep = mutation_locality_check(p2_sequence(), MutationStep(1, "right"))
    assert rep["ok"]
    f0, f1 = rep["fans"]
    kept = sum(1 for x, y in zip(f0.rays, f1.rays) if x == y)
    assert kept >= 1 and rep["lengths"]
    with pytest.raises(ValueError):
        mutation_locality_check(example_f1(), MutationStep(2, "right"))


def test_example_mutation_ray():
    seq = example_f1()
    fan = fan_of_sequence(seq)
    new = fan_of_sequence(mutate_seq(seq, MutationStep(1, "right")))
    assert new.rays == ((1, 0), (3, 4), (-1, 4), (0, -1)) and new.ranks == (2, -4, 1, 1)
    assert any(g for g in gl2_maps(fan.rays, P114))


def test_convexity_examples():
    L = make_blowup_p2(0)
    assert convexity(line_bundle(L, (0,)), line_bundle(L, (1,))) == ("convex", 3)
    T, O2 = tangent_p2()[:2]
    assert convexity(T, O2) == ("convex", 6)
    L2 = make_blowup_p2(2)
    E, F = line_bundle(L2, (0, 1, 0)), line_bundle(L2, (0, 0, 1))
    assert convexity(E, F) == ("flat", 0)
    assert euler(E, F) == 0
    Lm, _ = mutate_pair(E, F, "left")
    _, R = mutate_pair(E, F, "right")
    assert Lm.e == -F.e and R.e == -E.e


def test_build_fan_rejects_short():
    rts = contract(extract(p2_sequence()))
    bad = type(rts)(rts.L, rts.Atildes[:2], rts.ranks[:2], rts.Kred)
    with pytest.raises(FanError):
        build_fan(bad)


def _nodes(seed):
    r = rng(seed)
    out = []
    for _ in range(25):
        _, _, nodes = random_walk(r.choice(seed_sequences(5)), 8, r, max_rank=60)
        out.extend(nodes)
    return out


NODES = _nodes(31)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(NODES))
def test_fan_global_properties(seq):
    fan = fan_of_sequence(seq)
    assert check_fan(fan)["ok"]
    assert all(is_primitive(x) for x in fan.rays)
    assert sum(fan.multiplicities) == len(seq)
    assert k_squared(fan.rays) == 12 - fan.m
    m, r = fan.m, fan.ranks
    for k in range(m):
        rel = vadd(vadd(vscale(r[(k + 1) % m] ** 2, fan.rays[k]),
                        vscale(fan.a[k], fan.rays[(k + 1) % m])),
                   vscale(r[k] ** 2, fan.rays[(k + 2) % m]))
        assert rel == (0, 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([s for s in NODES if all(N.e for N in s)]), st.data())
def test_mutation_locality_random(seq, data):
    p = data.draw(st.integers(1, len(seq) - 1))
    d = data.draw(st.sampled_from(["left", "right"]))
    E, F = seq[p - 1], seq[p]
    new = mutate_pair(E, F, d)
    if any(N.e == 0 for N in new):
        return
    rep = mutation_locality_check(seq, MutationStep(p, d))
    assert rep["ok"]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([s for s in NODES if all(N.e for N in s)]))
def test_zero_rank_configuration(seq):
    fan = fan_of_sequence(seq)
    m = fan.m
    for k in range(m - 1):
        e = seq[k].e
        if left_mutation(seq[k], seq[k + 1]).e == 0:
            l0, l1, l2 = fan.rays[k], fan.rays[k + 1], fan.rays[(k + 2) % m]
            rel = vadd(vadd(vscale(e ** 4, l0), vscale(-e * e, l1)), vscale(e * e, l2))
            assert rel == (0, 0)


def test_blowup_line_bundle_fans_smooth():
    for k in range(0, 7):
        seq = blowup_line_bundle_sequence(k) if k else p2_sequence()
        fan = fan_of_sequence(seq)
        assert all(v == 1 for v in fan.volumes) and fan.m == len(seq)
