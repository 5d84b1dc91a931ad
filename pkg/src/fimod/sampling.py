"""Seeded random presentations for property suites.

Structures (generator degrees plus integer relation terms) are drawn once
from a seeded generator and can be instantiated over any ring, so one seed
drives identical checks over Q, F_p and Z. Every consumer records the seed,
making failures replayable.
"""
from __future__ import annotations

import random

from .injections import Injection, enumerate_injections
from .presentations import FIPresentation, FreeElement
from .rings import RingSpec


def random_structure(rng: random.Random, max_generators: int = 2,
                     max_generator_degree: int = 2, max_relations: int = 2,
                     max_relation_degree: int = 3):
    """(generator degrees, relations as integer term dicts)."""
    k = rng.randint(1, max_generators)
    degrees = tuple(rng.randint(0, max_generator_degree) for _ in range(k))
    relations = []
    for _ in range(rng.randint(0, max_relations)):
        e = rng.randint(min(degrees), max_relation_degree)
        terms: dict = {}
        for _ in range(rng.randint(1, 3)):
            g = rng.randrange(k)
            injs = enumerate_injections(degrees[g], e)
            if not injs:
                continue
            inj = injs[rng.randrange(len(injs))]
            c = rng.choice([-2, -1, 1, 2])
            terms[(g, inj.images)] = terms.get((g, inj.images), 0) + c
        terms = {key: v for key, v in terms.items() if v}
        if terms:
            relations.append((e, terms))
    return degrees, tuple(relations)


def instantiate(structure, ring: RingSpec) -> FIPresentation:
    degrees, relations = structure
    rels = []
    for e, terms in relations:
        el = {}
        for (g, images), c in terms.items():
            el[(g, Injection(degrees[g], e, images))] = c
        rels.append(FreeElement(e, el))
    return FIPresentation(ring, degrees, rels)


def seeded_structures(seed: int, count: int, **kwargs):
    rng = random.Random(seed)
    return [random_structure(rng, **kwargs) for _ in range(count)]


def random_injection(rng: random.Random, source: int, target: int) -> Injection:
    if source > target:
        raise ValueError("no injections shrink a set")
    return Injection(source, target,
                     tuple(rng.sample(range(1, target + 1), source)))
