import pytest

from mlsgraph import (BudgetExceededError, Hom, MetricGraph, brute_force_isometry,
                      compute_core, disguise, enumerate_cyclic_loops, format_path,
                      random_graph, spanning_tree, spectra_agree_up_to)
from mlsgraph.fungroup import identity_hom, marked_length
from mlsgraph.graphs import GraphError


def test_enumerate_theta_two_edges(theta):
    loops = enumerate_cyclic_loops(theta, 2)
    assert len(loops) == 6
    supports = sorted(tuple(sorted(c.support())) for c in loops)
    assert supports == [(0, 1), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)]


def test_enumerate_tree_is_empty():
    g = MetricGraph([0, 1], [(0, 0, 1, 1)])
    assert enumerate_cyclic_loops(g, 6) == []


def test_enumerate_self_loop_orientations():
    g = MetricGraph([0], [(0, 0, 0, 1)])
    loops = enumerate_cyclic_loops(g, 1)
    assert sorted(format_path(c) for c in loops) == ["e0", "e0^-1"]


def test_enumerate_deduplicates_rotations(dumbbell):
    loops = enumerate_cyclic_loops(dumbbell, 4)
    keys = [c.steps for c in loops]
    assert len(keys) == len(set(keys))


def test_enumerate_matches_spectrum_values(dumbbell):
    """Loop enumeration and the spectrum table describe the same classes:
    within the edge budget, the value multisets coincide."""
    basis = spanning_tree(dumbbell)
    from mlsgraph.fungroup import enumerate_reduced_words, word_cyclic_core
    spectrum_cores = {}
    for w in enumerate_reduced_words(basis.rank, 4):
        core = word_cyclic_core(basis, w)
        if core is not None and len(core.steps) <= 4:
            spectrum_cores[core.steps] = core.length
    oracle_cores = {c.steps: c.length for c in enumerate_cyclic_loops(dumbbell, 4)}
    assert spectrum_cores == oracle_cores
    assert sorted(spectrum_cores.values()) == sorted(oracle_cores.values())


def test_enumerate_budget_guard():
    g = random_graph(0, 2, 6, 3)
    with pytest.raises(BudgetExceededError):
        enumerate_cyclic_loops(g, 14, budget=50)


def test_budget_env_override(monkeypatch, theta):
    monkeypatch.setenv("MLS_BUDGET", "10")
    with pytest.raises(BudgetExceededError):
        enumerate_cyclic_loops(theta, 6)
    monkeypatch.setenv("MLS_BUDGET", "1000000")
    assert enumerate_cyclic_loops(theta, 4)


def test_brute_force_relabeled(theta):
    relabeled = theta.relabeled({0: 5, 1: 3}, {0: 9, 1: 4, 2: 0}, flip_edges={1})
    witness = brute_force_isometry(theta, relabeled)
    assert witness is not None
    vmap, pairs = witness
    assert vmap in ({0: 5, 1: 3}, {0: 3, 1: 5})
    assert len(pairs) == 3


def test_brute_force_theta_vs_dumbbell(theta, dumbbell):
    assert brute_force_isometry(theta, dumbbell) is None


def test_brute_force_requires_cores(theta):
    from mlsgraph import attach_tree
    from mlsgraph.graphs import random_tree
    import random
    g = attach_tree(theta, 0, random_tree(random.Random(0), 3), 0)
    with pytest.raises(GraphError):
        brute_force_isometry(g, theta)


def test_brute_force_two_disguises(theta):
    a = disguise(theta, 4)
    b = disguise(theta, 9)
    ca = compute_core(a.graph).core
    cb = compute_core(b.graph).core
    assert brute_force_isometry(ca, cb) is not None


def test_brute_force_circles():
    a = MetricGraph([0], [(0, 0, 0, 6)])
    b = MetricGraph([0, 1], [(0, 0, 1, 2), (1, 1, 0, 4)])
    c = MetricGraph([0], [(0, 0, 0, 7)])
    assert brute_force_isometry(a, b) is not None
    assert brute_force_isometry(a, c) is None


def test_spectra_agree_identity(theta):
    basis = spanning_tree(theta)
    assert spectra_agree_up_to(basis, basis, identity_hom(basis), 3) is None


def test_spectra_mismatch_found(theta):
    perturbed = MetricGraph([0, 1],
                            [(0, 0, 1, 1), (1, 0, 1, "15/7"), (2, 0, 1, 3)])
    b1, b2 = spanning_tree(theta), spanning_tree(perturbed)
    h = Hom(b1, b2, ((1,), (2,)), ((1,), (2,)))
    w = spectra_agree_up_to(b1, b2, h, 1)
    assert w == (1,)
    assert marked_length(b1, w) != marked_length(b2, w)


def test_spectra_agree_on_disguise(theta):
    inst = disguise(theta, 2)
    assert spectra_agree_up_to(inst.hom.source, inst.hom.target, inst.hom, 4) is None


def test_spectra_guard():
    g = random_graph(0, 4, 5, 3)
    basis = spanning_tree(g)
    with pytest.raises(BudgetExceededError):
        spectra_agree_up_to(basis, basis, identity_hom(basis), 9)


def test_oracle_pipeline_agreement():
    """reconstruct accepts exactly when the brute-force witness exists and
    the bounded spectrum sweep finds no counterexample."""
    from fractions import Fraction
    from mlsgraph import IsometryCertificate, reconstruct

    cases = []
    for seed in (3, 11, 19, 27):
        g = random_graph(seed, 2 + seed % 4, 1 + seed % 3, 5)
        if compute_core(g).is_empty:
            continue
        inst = disguise(g, seed + 40)
        cases.append((g, inst.graph, inst.hom))
        # perturbed variant of the same instance
        core_edge = min(compute_core(inst.graph).core.edge_ids)
        rows = [(eid, rec.u, rec.v,
                 rec.length + (Fraction(1, 7) if eid == core_edge else 0))
                for eid, rec in inst.graph.edges_sorted()]
        bad = MetricGraph(inst.graph.vertex_ids, rows, name="bad")
        cases.append((g, bad, Hom(spanning_tree(g), spanning_tree(bad),
                                  inst.hom.images, inst.hom.inverse_images)))
    assert cases
    for g1, g2, hom in cases:
        if hom.source.rank > 4:
            continue
        result = reconstruct(g1, g2, hom)
        witness = brute_force_isometry(compute_core(g1).core, compute_core(g2).core)
        counterexample = spectra_agree_up_to(hom.source, hom.target, hom, 4)
        if isinstance(result, IsometryCertificate):
            assert witness is not None and counterexample is None
        else:
            assert witness is None or counterexample is not None


def test_covering_depth_is_minimal_stabilization():
    """The computed sufficient depth matches the first budget at which the
    loop union stabilizes on the core, checked by direct enumeration."""
    from mlsgraph.oracle import covering_loop_depth

    for seed in range(20):
        g = random_graph(seed, 2 + seed % 4, 1 + seed % 3, 4)
        d = compute_core(g)
        core_edges = set(d.core.edge_ids)
        if not core_edges:
            continue
        depth = covering_loop_depth(g, core_edges)
        union = set()
        for c in enumerate_cyclic_loops(g, depth):
            union |= c.support()
        assert union == core_edges
        if depth > 1:
            prior = set()
            for c in enumerate_cyclic_loops(g, depth - 1):
                prior |= c.support()
            assert prior != core_edges
