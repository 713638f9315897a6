import pytest

from mlsgraph import (DisguiseError, IsometryCertificate, MetricGraph, compute_core,
                      disguise, random_graph, read_graph, read_truth, reconstruct,
                      spectra_agree_up_to, write_graph)
from mlsgraph.disguise import truth_comments
from mlsgraph.fungroup import apply_hom, marked_length


def test_disguise_is_isometric_on_spectra(theta):
    inst = disguise(theta, 1)
    assert inst.hom.is_certified_isomorphism()
    assert spectra_agree_up_to(inst.hom.source, inst.hom.target, inst.hom, 4) is None


def test_disguise_rejects_tree():
    g = MetricGraph([0, 1, 2], [(0, 0, 1, 1), (1, 1, 2, 1)])
    with pytest.raises(DisguiseError, match="core is empty"):
        disguise(g, 1)


def test_disguise_seeds_differ(theta):
    a = disguise(theta, 1)
    b = disguise(theta, 2)
    assert write_graph(a.graph) != write_graph(b.graph)
    assert write_graph(disguise(theta, 1).graph) == write_graph(a.graph)


def test_disguise_preserves_total_core_length(dumbbell):
    inst = disguise(dumbbell, 6)
    c1 = compute_core(dumbbell).core.total_length()
    c2 = compute_core(inst.graph).core.total_length()
    assert c1 == c2


def test_disguise_map_path_preserves_length(pendant_theta):
    g = pendant_theta
    inst = disguise(g, 3)
    from mlsgraph.paths import shortest_path
    p = shortest_path(g, 1, 2)
    image = inst.map_path(p)
    assert image.length == p.length
    assert image.start == inst.vertex_image[1]
    assert image.end == inst.vertex_image[2]


def test_disguise_branch_map_is_ground_truth(pendant_theta):
    for seed in range(1, 6):
        inst = disguise(pendant_theta, seed)
        cert = reconstruct(pendant_theta, inst.graph, inst.hom)
        assert isinstance(cert, IsometryCertificate)
        assert cert.vertex_map == inst.branch_map


def test_truth_sidecar_roundtrip(dumbbell):
    inst = disguise(dumbbell, 4)
    text = write_graph(inst.graph, extra_comments=truth_comments(inst))
    parsed = read_graph(text)
    assert write_graph(parsed) == write_graph(inst.graph)
    branch_map, tau = read_truth(text)
    assert branch_map == inst.branch_map
    assert tau == inst.tau


def test_disguise_of_circle():
    g = MetricGraph([0], [(0, 0, 0, 10)])
    inst = disguise(g, 5)
    cert = reconstruct(g, inst.graph, inst.hom)
    assert isinstance(cert, IsometryCertificate)
    assert cert.kind == "circle"


def test_disguise_word_lengths_match(theta):
    inst = disguise(theta, 9)
    from mlsgraph.fungroup import enumerate_reduced_words
    for w in enumerate_reduced_words(inst.hom.source.rank, 3):
        assert marked_length(inst.hom.source, w) == \
            marked_length(inst.hom.target, apply_hom(inst.hom, w))


def test_disguise_random_graphs_roundtrip():
    count = 0
    for seed in range(30):
        g = random_graph(seed, 2 + seed % 5, 1 + seed % 3, 5)
        if compute_core(g).is_empty:
            continue
        inst = disguise(g, seed + 500)
        cert = reconstruct(g, inst.graph, inst.hom)
        assert isinstance(cert, IsometryCertificate), (seed, cert)
        count += 1
    assert count >= 25
