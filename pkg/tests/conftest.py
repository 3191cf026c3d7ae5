import numpy as np
import pytest

import npcmaj as nm
from npcmaj import sampling


NPC_SPACES = [
    nm.Euclidean(2),
    nm.HalfPlane(),
    nm.Spd(2),
    nm.Product(nm.Euclidean(1), nm.HalfPlane()),
]

NPC_IDS = ["euclidean2", "halfplane", "spd2", "product"]


@pytest.fixture(params=NPC_SPACES, ids=NPC_IDS)
def npc_space(request):
    return request.param


def pairwise_scale(space, pts):
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = max(best, nm.distance(space, pts[i], pts[j]))
    return max(best, 1e-12)


def random_points(space, rng, k):
    return [sampling.random_point(space, rng) for _ in range(k)]
