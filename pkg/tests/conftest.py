import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from causalpaths import (  # noqa: E402
    GraphClass,
    KnowledgeConstraint,
    MixedGraph,
    ResourceError,
    Sign,
    dag_to_cpdag,
    latent_project,
    mag_to_pag,
)
from causalpaths.bench import GenConfig, gen_random_dag  # noqa: E402


def chain(kind=GraphClass.PAG):
    return MixedGraph("XYZ", ["X oo Y", "Y oo Z"], kind)


def diamond_reference():
    """The DAG X -> V, X -> W, V -> W, V -> Y, W -> Y read as a MAG."""
    return MixedGraph("XVWY", ["X -> V", "X -> W", "V -> W", "V -> Y", "W -> Y"], GraphClass.MAG)


@pytest.fixture
def chain_pag():
    return chain(GraphClass.PAG)


@pytest.fixture
def chain_pdag():
    return chain(GraphClass.PDAG)


def random_dag(rng: random.Random, n_min=2, n_max=8, densities=(0.2, 0.35, 0.5, 0.7)):
    n = rng.randint(n_min, n_max)
    cfg = GenConfig(n, rng.choice(densities), 0, replicate_seed=rng.randrange(2**31))
    return gen_random_dag(cfg)


def random_pdag_case(rng: random.Random, n_max=10, max_undirected=12):
    """(truth DAG, CPDAG) with a bounded number of undirected edges."""
    while True:
        d = random_dag(rng, 3, n_max)
        p = dag_to_cpdag(d)
        if p.num_circles() // 2 <= max_undirected:
            return d, p


def random_pag_case(rng: random.Random, n_max=8, max_circles=12):
    """(truth MAG, PAG) over at most ``n_max`` observed vertices."""
    while True:
        d = random_dag(rng, 3, n_max + 2)
        k = min(rng.randint(0, 2), d.n - 3)
        hidden = rng.sample(d.vertices, k)
        m = latent_project(d, hidden)
        if m.n > n_max:
            continue
        try:
            p = mag_to_pag(m)
        except ResourceError:
            continue
        if p.num_circles() <= max_circles:
            return m, p


def random_constraints(rng: random.Random, vertices, k_max=5, k_min=0):
    vs = list(vertices)
    out = []
    for _ in range(rng.randint(k_min, k_max)):
        x, y = rng.sample(vs, 2)
        out.append(KnowledgeConstraint(x, y, rng.choice([Sign.POSITIVE, Sign.NEGATIVE])))
    return out


def true_constraints(rng: random.Random, truth, vertices, k_max=5):
    """Constraints that hold in ``truth`` (so they are jointly consistent)."""
    from causalpaths import is_ancestor

    vs = list(vertices)
    out = []
    for _ in range(rng.randint(0, k_max)):
        x, y = rng.sample(vs, 2)
        sign = Sign.POSITIVE if is_ancestor(truth, x, y) else Sign.NEGATIVE
        out.append(KnowledgeConstraint(x, y, sign))
    return out
