"""Seeded sweep helpers shared by the property and acceptance suites."""

import random

from causalspaces.effects import EffectQuery
from causalspaces.generators import GenConfig, gen_dormant_space, gen_random_space, gen_screened_space
from causalspaces.space import coordinate_subalgebra, generated_algebra


def random_effect_query(rng: random.Random, cs) -> EffectQuery:
    """A random query covering every subject/target/conditioning combination."""
    sp = cs.space
    ids = sorted(sp.ids)
    outcomes = list(sp.outcomes)
    u = frozenset(rng.sample(ids, rng.randint(0, len(ids))))
    if rng.random() < 0.5:
        subject = rng.choice(outcomes)
    else:
        subject = frozenset(rng.sample(outcomes, rng.randint(1, len(outcomes))))
    roll = rng.random()
    if roll < 0.7:
        target = frozenset(rng.sample(outcomes, rng.randint(0, len(outcomes))))
    elif roll < 0.85:
        target = coordinate_subalgebra(sp, frozenset(rng.sample(ids, rng.randint(0, len(ids)))))
    else:
        target = generated_algebra(sp, [frozenset(rng.sample(outcomes, rng.randint(0, len(outcomes))))])
    mode = rng.random()
    given = post = None
    if mode < 0.35:
        pass
    elif mode < 0.55:
        given = frozenset(rng.sample(outcomes, rng.randint(0, len(outcomes))))
    elif mode < 0.75:
        given = coordinate_subalgebra(sp, frozenset(rng.sample(ids, rng.randint(0, len(ids)))))
    else:
        post = frozenset(rng.sample(ids, rng.randint(0, len(ids))))
    return EffectQuery(u, subject, target, given=given, post=post)


def random_space_stream(rng: random.Random, trial: int):
    """A mix of adversarial constructions and random full-family spaces."""
    seed = rng.randrange(10**6)
    if trial % 40 == 0:
        return gen_dormant_space()
    if trial % 40 == 1:
        return gen_screened_space(GenConfig(seed=seed))
    if trial % 5 == 0:
        return gen_random_space(GenConfig(seed=seed, max_coords=2, max_labels=3))
    return gen_random_space(GenConfig(seed=seed, max_labels=2))
