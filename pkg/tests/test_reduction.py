import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import example_f1, random_walk, rng, tangent_p2

from exceptional_toric.classes import (blowup_line_bundle_sequence, hirzebruch_sequence,
                                       p2_sequence)
from exceptional_toric.gale import equivalent_fans, fan_of_sequence
from exceptional_toric.lattice import make_blowup_p2
from exceptional_toric.mutation import MutationStep, apply_steps
from exceptional_toric.reduction import (BudgetExceeded, convexity_reduce,
                                         cyclic_strong_bound_check, is_markov,
                                         markov_bruteforce, markov_enumerate, normal_form,
                                         to_rank_one, weighted_projective_fan)
from exceptional_toric.toric_geometry import classify_cone, k_squared

P2FAN = [(1, 0), (0, 1), (-1, -1)]
P114 = [(1, 0), (0, 1), (-1, -4)]
F1FAN = [(1, 0), (0, 1), (-1, 1), (0, -1)]


def p2_with_ranks_125():
    """Mutate (O, O(1), O(2)) up the Markov tree to ranks (1, 2, 5) up to sign."""
    seq = apply_steps(p2_sequence(), [MutationStep(1, "left"), MutationStep(1, "left")])
    assert sorted(abs(N.e) for N in seq) == [1, 2, 5]
    return seq


def test_convexity_reduce_p2_terminal():
    cert = convexity_reduce(p2_sequence())
    assert cert.steps == [] and cert.final == p2_sequence()


def test_convexity_reduce_example():
    cert = convexity_reduce(example_f1())
    assert cert.replays() and cert.final[0].e == 0
    assert sum(1 for N in cert.final if N.e == 0) == 1


def test_convexity_reduce_scramble():
    r = rng(4)
    seq, _, _ = random_walk(blowup_line_bundle_sequence(1), 15, r)
    cert = convexity_reduce(seq)
    assert cert.replays()
    assert all(N.e == 0 for N in cert.final[:sum(1 for N in cert.final if N.e == 0)])


def test_normal_form_examples():
    r = rng(9)
    seq, _, _ = random_walk(p2_sequence(), 6, r)
    cert = normal_form(seq)
    assert cert.tag == "markov-triple" and cert.replays()
    cert = normal_form(hirzebruch_sequence(0))
    assert cert.tag == "rank-one-zero" and cert.steps == []
    cert = normal_form(p2_with_ranks_125())
    assert cert.tag == "markov-triple"
    assert sorted(N.e for N in cert.normalized) == [1, 2, 5]
    assert is_markov(1, 2, 5)


def test_to_rank_one_example_f1():
    cert = to_rank_one(example_f1())
    assert cert.tag == "rank-one" and cert.replays()
    assert [N.e for N in cert.normalized] == [1, 1, 1, 1]
    fan = fan_of_sequence(cert.normalized)
    assert all(v == 1 for v in fan.volumes)
    assert equivalent_fans(fan.rays, F1FAN)


def test_to_rank_one_tangent():
    cert = to_rank_one(tangent_p2())
    assert [N.e for N in cert.normalized] == [1, 1, 1]
    assert any("markov" in e for e in cert.log)
    assert len(cert.steps) == 1


def test_to_rank_one_identity():
    seq = blowup_line_bundle_sequence(3)
    cert = to_rank_one(seq)
    assert cert.steps == [] and cert.final == seq


def test_budget_exceeded_partial_certificate():
    with pytest.raises(BudgetExceeded) as exc:
        to_rank_one(example_f1(), budget=1)
    cert = exc.value.certificate
    assert len(cert.steps) == 1 and cert.replays()


def test_markov_examples():
    assert markov_enumerate(30) == [(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29)]
    assert markov_bruteforce(30) == markov_enumerate(30)
    assert 4 + 25 + 841 == 870 == 3 * 2 * 5 * 29
    assert markov_enumerate(1) == [(1, 1, 1)]
    with pytest.raises(ValueError):
        markov_enumerate(0)


def test_weighted_projective_fan_examples():
    assert equivalent_fans(weighted_projective_fan((1, 1, 1)).rays, P2FAN)
    fan = weighted_projective_fan((1, 1, 2))
    assert equivalent_fans(fan.rays, P114) and k_squared(fan.rays) == 9
    fan = weighted_projective_fan((1, 2, 5))
    assert sorted(fan.volumes) == [1, 4, 25]
    for i in range(3):
        st_ = classify_cone(fan.rays[i], fan.rays[(i + 1) % 3])
        assert st_.smooth or st_.label == "T"
    with pytest.raises(ValueError):
        weighted_projective_fan((1, 2, 3))


def test_cyclic_strong_bound_examples():
    rep = cyclic_strong_bound_check(p2_sequence())
    assert rep["candidate"] and rep["n"] == 3 and rep["K2"] == 9
    rep = cyclic_strong_bound_check(blowup_line_bundle_sequence(9))
    assert not rep["candidate"] and rep["K2"] == 0
    rep = cyclic_strong_bound_check(hirzebruch_sequence(0))
    assert rep["candidate"] and rep["K2"] == 8


def _scrambles(seed, count):
    r = rng(seed)
    out = []
    for _ in range(count):
        k = r.randrange(0, 5)
        start = blowup_line_bundle_sequence(k) if k else p2_sequence()
        seq, _, _ = random_walk(start, r.randrange(1, 16), r)
        out.append(seq)
    return out


SCRAMBLES = _scrambles(17, 30)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SCRAMBLES))
def test_reduction_properties(seq):
    cert = normal_form(seq)
    assert cert.replays()
    assert len(cert.steps) <= len(seq) * sum(N.e ** 2 for N in seq)
    for e in cert.log:
        if "max_rank_sq_before" in e:
            assert e["new_rank_sq"] < e["max_rank_sq_before"]
            assert e["max_rank_sq_after"] <= e["max_rank_sq_before"]
    if cert.tag == "markov-triple":
        assert is_markov(*[abs(N.e) for N in cert.final if N.e])
    ro = to_rank_one(seq)
    fan = fan_of_sequence(ro.normalized)
    assert ro.replays() and fan.winding == 1 and all(v == 1 for v in fan.volumes)
    assert fan.m == len(seq)


def test_two_point_blowup_scramble_returns_to_rank_one():
    L = make_blowup_p2(2)
    seq, _, _ = random_walk(blowup_line_bundle_sequence(2), 12, rng(23))
    assert seq[0].L == L and len(seq) == L.n
    cert = to_rank_one(seq)
    assert cert.replays() and all(abs(N.e) == 1 for N in cert.final)
