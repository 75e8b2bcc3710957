import itertools
import random

import pytest

import oracles as O
from causalpaths import (
    GraphClass,
    GraphClassError,
    InputError,
    InvariantError,
    MixedGraph,
    build_separation_table,
    is_m_separated,
    markov_equivalent,
    separations_preserved,
)
from causalpaths.separation import table_from_text, table_to_text
from conftest import random_pag_case


def mag(vs, edges):
    return MixedGraph(vs, edges, GraphClass.MAG)


def test_chain_and_collider():
    c = mag("XYZ", ["X -> Y", "Y -> Z"])
    assert is_m_separated(c, "X", "Z", {"Y"})
    assert not is_m_separated(c, "X", "Z")
    v = mag("XYZ", ["X -> Y", "Z -> Y"])
    assert is_m_separated(v, "X", "Z")
    assert not is_m_separated(v, "X", "Z", {"Y"})


def test_collider_opened_by_descendant():
    g = mag("XYZD", ["X -> Y", "Z -> Y", "Y -> D"])
    assert not is_m_separated(g, "X", "Z", {"D"})


def test_bidirected_collider():
    g = mag("XYZ", ["X >> Y", "Y >> Z"])
    assert is_m_separated(g, "X", "Z")
    assert not is_m_separated(g, "X", "Z", {"Y"})


def test_argument_errors():
    g = mag("XYZ", ["X -> Y"])
    with pytest.raises(InputError):
        is_m_separated(g, "X", "X")
    with pytest.raises(InputError):
        is_m_separated(g, "X", "Z", {"X"})
    p = MixedGraph("XY", ["X oo Y"], GraphClass.PAG)
    with pytest.raises(GraphClassError):
        is_m_separated(p, "X", "Y")


def test_equivalence_examples():
    a = mag("XYZ", ["X -> Y", "Y -> Z"])
    b = mag("XYZ", ["X >- Y", "Y >- Z"])
    v = mag("XYZ", ["X -> Y", "Z -> Y"])
    assert markov_equivalent(a, a)
    assert markov_equivalent(a, b)
    assert not markov_equivalent(v, a)
    with pytest.raises(InputError):
        markov_equivalent(a, mag("XYW", []))


def test_equivalence_ignores_vertex_order():
    a = mag("XYZ", ["X -> Y", "Y -> Z"])
    b = mag("ZYX", ["X -> Y", "Y -> Z"])
    assert markov_equivalent(a, b)


def _random_mags(seed, count, n_max):
    rng = random.Random(seed)
    return [random_pag_case(rng, n_max=n_max, max_circles=30)[0] for _ in range(count)]


def test_m_separation_matches_path_oracle():
    for m in _random_mags(1, 40, 7):
        n = m.n
        for a, b in itertools.combinations(range(n), 2):
            rest = [v for v in range(n) if v not in (a, b)]
            for k in range(len(rest) + 1):
                for z in itertools.combinations(rest, k):
                    names = {m.vertices[v] for v in z}
                    got = is_m_separated(m, m.vertices[a], m.vertices[b], names)
                    assert got == O.m_separated(m._m, a, b, set(z))
                    assert got == is_m_separated(m, m.vertices[b], m.vertices[a], names)
                    if m._m[a][b]:
                        assert not got


def _skeleton_families(seed, count, n_max):
    rng = random.Random(seed)
    for m in _random_mags(seed, count, n_max):
        fam = [MixedGraph.from_matrix(m.vertices, d, GraphClass.MAG) for d in O.skeleton_mags(m._m)]
        if len(fam) > 40:
            fam = rng.sample(fam, 40)
        yield fam


def test_equivalence_matches_definition():
    for fam in _skeleton_families(2, 12, 5):
        for g1, g2 in itertools.combinations_with_replacement(fam, 2):
            expected = O.equivalent_by_definition(g1._m, g2._m)
            assert markov_equivalent(g1, g2) == expected
            assert markov_equivalent(g1, g2, method="profile") == expected


def test_equivalence_is_an_equivalence_relation():
    for fam in _skeleton_families(4, 6, 5):
        eq = {(i, j): markov_equivalent(a, b) for (i, a), (j, b) in itertools.product(enumerate(fam), repeat=2)}
        k = len(fam)
        for i in range(k):
            assert eq[i, i]
            for j in range(k):
                assert eq[i, j] == eq[j, i]
                for h in range(k):
                    if eq[i, j] and eq[j, h]:
                        assert eq[i, h]


def test_table_examples():
    t = build_separation_table(mag("XYZ", ["X -> Y", "Y -> Z"]))
    assert len(t) == 1
    assert t["X", "Z"].z == frozenset({"Y"})
    complete = mag("ABC", ["A -> B", "B -> C", "A -> C"])
    assert len(build_separation_table(complete)) == 0


def test_table_witnesses_are_smallest_and_verify():
    for m in _random_mags(3, 30, 7):
        t = build_separation_table(m)
        missing = [(a, b) for a, b in itertools.combinations(m.vertices, 2) if not m.adjacent(a, b)]
        assert len(t) == len(missing)
        for a, b in missing:
            w = t[a, b]
            assert a not in w.z and b not in w.z
            assert is_m_separated(m, a, b, w.z)
            rest = [v for v in m.vertices if v not in (a, b)]
            smaller = (z for k in range(len(w.z)) for z in itertools.combinations(rest, k))
            assert not any(is_m_separated(m, a, b, z) for z in smaller)


def test_table_on_non_maximal_graph():
    # ancestral but not maximal: C and D are joined by an inducing path
    g = MixedGraph("ABCD", ["A >> B", "A -> C", "A >> D", "B >> C", "B -> D"], GraphClass.MAG)
    with pytest.raises(InvariantError):
        build_separation_table(g)


def test_preserved_examples():
    ref = mag("XYZ", ["X -> Y", "Y -> Z"])
    t = build_separation_table(ref)
    assert separations_preserved(t, ref)
    assert not separations_preserved(t, mag("XYZ", ["X -> Y", "Z -> Y"]))
    with pytest.raises(InputError):
        separations_preserved(t, mag("XYZ", ["X -> Y"]))


def test_preserved_agrees_with_equivalence():
    for fam in _skeleton_families(5, 12, 6):
        ref = fam[0]
        t = build_separation_table(ref)
        for g in fam:
            assert separations_preserved(t, g) == markov_equivalent(ref, g, method="profile")


def test_table_text_roundtrip():
    m = mag("ABCD", ["A -> B", "C -> B", "B -> D"])
    t = build_separation_table(m)
    text = table_to_text(t)
    assert "sepset A C |" in text
    back = table_from_text(text, m)
    assert back.witnesses == t.witnesses
    with pytest.raises(InputError):
        table_from_text("sepset A B | C\n", m)
