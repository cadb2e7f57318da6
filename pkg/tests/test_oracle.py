import json
import random

import pytest

from conftest import gs, square
from solap_enrich.enrich import PHASES
from solap_enrich.oracle import (
    InvalidSpec,
    SyntheticCubeSpec,
    build_layout,
    generate_synthetic_cube,
    ground_truth,
    load_truth,
    oracle_predicate,
    oracle_relate,
    oracle_relate_verdict,
    relation_counts,
)
from solap_enrich.oracle.sampling import exact_segments_touch
from solap_enrich.rdf import serialize_rdf
from solap_enrich.vocab import QB_OBSERVATION, RDF_TYPE


def test_nested_half_disjoint():
    outer = gs(square(0, 0, 4, 4))
    assert oracle_relate(gs(square(1, 1, 2, 2)), outer) == "within"
    assert oracle_relate(gs(square(2, 0, 6, 4)), outer) == "intersects"
    assert oracle_relate(gs(square(5, 5, 6, 6)), outer) is None


def test_higher_dimension_child_is_none():
    assert oracle_relate(gs(square(0, 0, 1, 1)), gs("POINT(0 0)")) is None


def test_exact_segment_contacts():
    assert exact_segments_touch(((0, 0), (2, 2)), ((0, 2), (2, 0)))
    assert exact_segments_touch(((0, 0), (1, 1)), ((1, 1), (2, 0)))
    assert not exact_segments_touch(((0, 0), (1, 0)), ((0, 1), (1, 1)))
    assert exact_segments_touch(((0, 0), (2, 0)), ((1, 0), (3, 0)))


def test_near_boundary_is_flagged_ambiguous():
    # an edge 1e-7 away from the other square sits inside the sampling band
    v = oracle_predicate("intersects", gs(square(0, 0, 1, 1)), gs(square(1 + 1e-7, 0, 2, 1)))
    assert v.ambiguous


def test_grid_cells_each_within_one_quadrant():
    spec = SyntheticCubeSpec(rows=10, cols=10, partitions=4, facts=50, overlap=0.0, seed=1)
    rels = ground_truth(spec)["discover_spatial_hs"]
    within = [r for r in rels if r.relation.value == "within"]
    assert len(within) == 100
    assert len({r.subject for r in within}) == 100
    # the remaining relations are cells sharing an edge or corner with a neighbouring
    # quadrant; closed-set semantics make those Intersects
    touching = [r for r in rels if r.relation.value != "within"]
    assert relation_counts(touching) == {"intersects": 44}
    for r in touching:
        r_, c_ = map(int, r.subject.value.rsplit("_", 2)[-2:])
        assert r_ in (4, 5) or c_ in (4, 5)


def test_overlap_cells_straddle_partitions():
    spec = SyntheticCubeSpec(rows=10, cols=10, partitions=4, facts=0, overlap=0.2, seed=4)
    lay = build_layout(spec)
    stretched = {k for k, (x0, y0, x1, y1) in lay.cells.items() if (x1 - x0, y1 - y0) != (1, 1)}
    assert len(stretched) == 20
    per_cell: dict = {}
    for r in ground_truth(lay)["discover_spatial_hs"]:
        per_cell.setdefault(r.subject.value, []).append(r.relation.value)
    for r, c in stretched:
        rels = per_cell[f"{spec.namespace}cell_{r}_{c}"]
        assert rels.count("intersects") >= 2 and "within" not in rels
    # no unstretched cell loses its Within
    for (r, c) in set(lay.cells) - stretched:
        assert per_cell[f"{spec.namespace}cell_{r}_{c}"].count("within") == 1


def test_zero_facts_means_members_only():
    schema, inst, truth = generate_synthetic_cube(SyntheticCubeSpec(facts=0, seed=2))
    assert inst.subjects(RDF_TYPE, QB_OBSERVATION) == []
    assert truth["detect_fact_level"] == set() and truth["discover_fact_level"] == set()
    assert len(inst) > 0


def test_same_spec_same_bytes():
    spec = SyntheticCubeSpec(rows=5, cols=7, partitions=6, facts=30, overlap=0.3, seed=11)
    a = generate_synthetic_cube(spec)
    b = generate_synthetic_cube(SyntheticCubeSpec.from_json(json.dumps(spec.to_dict())))
    for ga, gb in zip(a[:2], b[:2]):
        assert serialize_rdf(ga) == serialize_rdf(gb)
    assert a[2].to_json() == b[2].to_json()


def test_different_seed_different_cube():
    a = generate_synthetic_cube(SyntheticCubeSpec(seed=1))[1]
    b = generate_synthetic_cube(SyntheticCubeSpec(seed=2))[1]
    assert serialize_rdf(a) != serialize_rdf(b)


def test_truth_json_round_trip():
    truth = generate_synthetic_cube(SyntheticCubeSpec(rows=4, cols=4, facts=10, seed=3))[2]
    rows = json.loads(truth.to_json())
    assert all(set(row) == {"s", "rel", "o"} for row in rows)
    assert load_truth(truth.to_json()) == truth.all()
    assert set(truth.phases) == set(PHASES)


@pytest.mark.parametrize(
    "kw",
    [
        {"rows": 0},
        {"cols": -1},
        {"partitions": 0},
        {"facts": -5},
        {"overlap": 1.5},
        {"rows": 1, "cols": 1, "partitions": 4},
        {"partitions": 1, "overlap": 0.2},
        {"rows": 2.5},
    ],
)
def test_invalid_specs(kw):
    with pytest.raises(InvalidSpec):
        build_layout(SyntheticCubeSpec(**kw))


def test_unknown_spec_field():
    with pytest.raises(InvalidSpec):
        SyntheticCubeSpec.from_dict({"rows": 3, "colour": "red"})


def test_facts_sit_away_from_cell_edges():
    lay = build_layout(SyntheticCubeSpec(rows=8, cols=8, facts=500, seed=6))
    for x, y, *_ in lay.facts:
        fx, fy = x % 1, y % 1
        assert 0.05 - 1e-12 <= fx <= 0.95 + 1e-12 and 0.05 - 1e-12 <= fy <= 0.95 + 1e-12
        assert abs(fx - 0.5) >= 0.05 - 1e-12 and abs(fy - 0.5) >= 0.05 - 1e-12


@pytest.mark.parametrize("mode,multipart", [("exact", False), ("exact", True), ("bbox", True)])
def test_oracle_agrees_with_constructive_truth(mode, multipart):
    spec = SyntheticCubeSpec(rows=6, cols=6, partitions=4, facts=0, overlap=0.3, seed=8, multipart=multipart)
    lay = build_layout(spec)
    truth = ground_truth(lay, mode)["discover_spatial_hs"]
    expected = {(r.subject.value, r.object.value): r.relation.value for r in truth}
    ns = spec.namespace
    rng = random.Random(0)
    pairs = rng.sample([(c, p) for c in sorted(lay.cells) for p in sorted(lay.partitions)], 18)
    checked = 0
    for cell, part in pairs:
        child = gs(square(*lay.cells[cell]))
        parent = gs(*(square(*rect) for rect in lay.partitions[part]))
        verdict = oracle_relate_verdict(child, parent, mode)
        if verdict.ambiguous:
            continue
        key = (f"{ns}cell_{cell[0]}_{cell[1]}", f"{ns}partition_{part[0]}_{part[1]}")
        assert verdict.value == expected.get(key), key
        checked += 1
    assert checked >= 12
