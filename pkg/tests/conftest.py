import random

import pytest

from gencat import gen_any_instance, gen_split_instance


@pytest.fixture(scope="session")
def split_corpus():
    """200 categories with axioms-passing, split-generated families."""
    rng = random.Random(90210)
    return [gen_split_instance(rng) for _ in range(200)]


@pytest.fixture(scope="session")
def mixed_corpus():
    """200 categories with any axioms-passing family."""
    rng = random.Random(31337)
    return [gen_any_instance(rng) for _ in range(200)]


@pytest.fixture(scope="session")
def tiny_corpus():
    """Small enough for full congruence enumeration (<= 8 morphisms)."""
    rng = random.Random(777)
    return [gen_any_instance(rng, max_morphisms=8) for _ in range(20)]
