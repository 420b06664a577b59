"""Shared fixtures-as-functions: standard sequences and random mutation walks."""
import random

from exceptional_toric.classes import (NumClass, blowup_line_bundle_sequence,
                                       blowup_torsion_sequence, hirzebruch_sequence,
                                       line_bundle, p2_sequence)
from exceptional_toric.lattice import make_blowup_p2, make_hirzebruch
from exceptional_toric.mutation import MutationStep, mutate_seq

F1 = make_blowup_p2(1)
P2 = make_blowup_p2(0)


def example_f1():
    """(O_E(E), b*T, b*O(2), b*O(4)) on the blow-up of P^2 in one point."""
    return [NumClass(0, (0, 1), 0, F1), NumClass(2, (3, 0), 3, F1),
            NumClass(1, (2, 0), 0, F1), NumClass(1, (4, 0), 0, F1)]


def tangent_p2():
    """(T, O(2), O(4)) on P^2."""
    return [NumClass(2, (3,), 3, P2), line_bundle(P2, (2,)), line_bundle(P2, (4,))]


def random_walk(seq, steps, rng, max_rank=None):
    """Random mutation walk; steps whose output fails validation are skipped.

    Returns (final sequence, applied steps, visited nodes).
    """
    applied, nodes = [], [list(seq)]
    tries = 0
    while len(applied) < steps and tries < 20 * steps + 20:
        tries += 1
        st = MutationStep(rng.randrange(1, len(seq)), rng.choice(["left", "right"]))
        try:
            new = mutate_seq(seq, st)
        except AssertionError:
            continue
        if max_rank is not None and max(abs(N.e) for N in new) > max_rank:
            continue
        seq = new
        applied.append(st)
        nodes.append(seq)
    return seq, applied, nodes


def line_bundle_sequences_small():
    """Line-bundle sequences on P^2, F_0, F_2 and blow-ups in at most 3 points."""
    return ([p2_sequence(), hirzebruch_sequence(0), hirzebruch_sequence(2)]
            + [blowup_line_bundle_sequence(k) for k in range(1, 4)])


def seed_sequences(max_points=6):
    out = [p2_sequence()]
    for k in range(1, max_points + 1):
        out.append(blowup_line_bundle_sequence(k))
        out.append(blowup_torsion_sequence(k))
    return out


def rng(seed):
    return random.Random(seed)
