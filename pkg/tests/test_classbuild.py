import itertools
import random

import pytest

import oracles as O
from causalpaths import (
    GraphClass,
    GraphClassError,
    InputError,
    LatentSpec,
    MixedGraph,
    ResourceError,
    dag_to_cpdag,
    dag_to_mag,
    latent_project,
    mag_to_pag,
    markov_equivalent,
    pag_to_mag,
)
from conftest import random_dag, random_pag_case


def dag(vs, edges):
    return MixedGraph(vs, edges, GraphClass.DAG)


def mag(vs, edges):
    return MixedGraph(vs, edges, GraphClass.MAG)


def _edges(g):
    return [str(e) for e in g.edges()]


def test_cpdag_examples():
    assert _edges(dag_to_cpdag(dag("ABC", ["A -> B", "C -> B"]))) == ["A -> B", "B >- C"]
    assert _edges(dag_to_cpdag(dag("ABC", ["A -> B", "B -> C"]))) == ["A oo B", "B oo C"]
    out = dag_to_cpdag(dag("AB", ["A -> B"]))
    assert out.kind == GraphClass.PDAG and _edges(out) == ["A oo B"]
    with pytest.raises(GraphClassError):
        dag_to_cpdag(mag("AB", ["A -> B"]))


def _members_by_d_separation(d):
    """All DAGs on the skeleton of ``d`` with its independence model."""
    target = O.independence_model(d._m)
    out = []
    for m in O.skeleton_mags(d._m):
        if any(m[i][j] == m[j][i] for i, j in itertools.combinations(range(d.n), 2) if m[i][j]):
            continue  # bidirected
        if O.independence_model(m) == target:
            out.append(m)
    return out


def test_cpdag_completions_are_the_equivalence_class():
    rng = random.Random(31)
    for _ in range(25):
        d = random_dag(rng, 3, 5)
        p = dag_to_cpdag(d)
        assert p.skeleton() == d.skeleton()
        got = sorted(map(str, O.pdag_members(p)))
        assert got == sorted(map(str, _members_by_d_separation(d)))
        # marks fixed in the CPDAG are shared by every completion
        assert O.expected_solid(p, O.pdag_members(p)) == p._m


def test_latent_projection_examples():
    assert _edges(latent_project(dag("ALB", ["A -> L", "L -> B"]), {"L"})) == ["A -> B"]
    assert _edges(latent_project(dag("ALB", ["L -> A", "L -> B"]), LatentSpec({"L"}))) == ["A >> B"]
    with pytest.raises(InputError):
        latent_project(dag("AB", ["A -> B"]), {"Q"})


def test_latent_projection_preserves_observed_separations():
    rng = random.Random(32)
    for _ in range(15):
        d = random_dag(rng, 8, 8, densities=(0.25, 0.35))
        hidden = set(rng.sample(d.vertices, 2))
        m = latent_project(d, hidden)
        obs = [d.index(v) for v in m.vertices]
        for a, b in itertools.combinations(range(m.n), 2):
            rest = [v for v in range(m.n) if v not in (a, b)]
            for k in range(len(rest) + 1):
                for z in itertools.combinations(rest, k):
                    got = O.m_separated(m._m, a, b, set(z))
                    want = O.m_separated(d._m, obs[a], obs[b], {obs[v] for v in z})
                    assert got == want


def test_dag_to_mag():
    g = dag_to_mag(dag("AB", ["A -> B"]))
    assert g.kind == GraphClass.MAG and _edges(g) == ["A -> B"]
    assert dag_to_mag(dag("AB", [])).edges() == []
    rng = random.Random(33)
    for _ in range(10):
        d = random_dag(rng)
        assert latent_project(d, set()) == dag_to_mag(d)


def test_mag_to_pag_examples():
    assert _edges(mag_to_pag(mag("XYZ", ["X -> Y", "Y -> Z"]))) == ["X oo Y", "Y oo Z"]
    # "Y >o Z" is Y <-o Z: marks are listed at Y, then at Z
    assert _edges(mag_to_pag(mag("XYZ", ["X -> Y", "Z -> Y"]))) == ["X o> Y", "Y >o Z"]
    full = mag_to_pag(mag("ABC", ["A -> B", "B -> C", "A -> C"]))
    assert all(e.mark_u.value == e.mark_v.value == 1 for e in full.edges())


def _pag_by_enumeration(m):
    members = [d for d in O.skeleton_mags(m._m) if O.same_separations(d, m._m)]
    out = [[0] * m.n for _ in range(m.n)]
    for i in range(m.n):
        for j in range(m.n):
            if m._m[i][j]:
                marks = {d[i][j] for d in members}
                out[i][j] = marks.pop() if len(marks) == 1 else 1
    return out


def test_mag_to_pag_matches_enumeration():
    rng = random.Random(34)
    for _ in range(25):
        m, p = random_pag_case(rng, n_max=5, max_circles=30)
        assert p._m == _pag_by_enumeration(m)


def test_mag_to_pag_round_trip():
    rng = random.Random(35)
    for _ in range(20):
        m, p = random_pag_case(rng, n_max=7, max_circles=12)
        members = O.pag_members(p, m._m)
        assert m._m in members
        assert O.expected_solid(p, members) == p._m


def test_mag_to_pag_cap():
    m = mag("ABCDE", ["A -> B", "B -> C", "C -> D", "D -> E"])
    with pytest.raises(ResourceError, match="cap"):
        mag_to_pag(m, max_positions=4)
    assert mag_to_pag(m, max_positions=None).num_circles() == 8


def test_pag_to_mag_is_a_member():
    rng = random.Random(36)
    for _ in range(30):
        m, p = random_pag_case(rng, n_max=7, max_circles=30)
        r = pag_to_mag(p)
        assert r.kind == GraphClass.MAG
        assert markov_equivalent(r, m)
        for i, row in enumerate(p._m):
            for j, mk in enumerate(row):
                if mk not in (0, 1):
                    assert r._m[i][j] == mk
