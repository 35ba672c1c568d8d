import json
import random

import pytest

from chambers import catalog, chamber, coxeter, groups
from chambers.chamber import HomogeneousSpec, TypedGallery
from chambers.errors import (
    Disconnected,
    DuplicateChamber,
    InconsistentResidues,
    PartitionNotCovering,
    ResidueCollision,
    ResidueNotPolygon,
    WrongRank,
)


def test_from_partitions_validation():
    C = chamber.from_partitions(2, 1, {1: [(0, 1)]})
    assert C.n == 2 and C.panel_of(1, 0) == (0, 1)
    C = chamber.from_partitions(2, 1, {1: [(0,), (1,)]})
    assert not C.is_connected()
    with pytest.raises(DuplicateChamber):
        chamber.from_partitions(3, 1, {1: [(0, 1), (1, 2)]})
    with pytest.raises(PartitionNotCovering):
        chamber.from_partitions(3, 1, {1: [(0, 1)]})
    with pytest.raises(PartitionNotCovering):
        chamber.from_partitions(2, 2, {1: [(0, 1)]})


def test_from_cosets_s3():
    S3 = groups.symmetric_group(3)
    triv = groups.Subgroup(S3, [groups.identity(3)])
    f1 = groups.subgroup_generated(S3, [groups.perm_from_cycles(3, [(0, 1)])])
    f2 = groups.subgroup_generated(S3, [groups.perm_from_cycles(3, [(1, 2)])])
    C = chamber.from_cosets(HomogeneousSpec(S3, triv, {1: f1, 2: f2}))
    assert C.n == 6
    assert chamber.is_isomorphic(C, coxeter.coxeter_complex(coxeter.A2))
    # panel sizes equal the face-group index over the principal subgroup
    for i in (1, 2):
        assert all(len(p) == 2 for p in C.panels[i])


def test_from_cosets_single_chamber():
    S3 = groups.symmetric_group(3)
    whole = groups.Subgroup(S3, S3.elements, check=False)
    C = chamber.from_cosets(HomogeneousSpec(S3, whole, {1: whole}))
    assert C.n == 1 and len(C.panels[1]) == 1


def test_residues():
    a3 = catalog.build_a3_f2()
    assert a3.residue((), 5).chambers == (5,)
    assert len(a3.residue(a3.types, 0).chambers) == 315
    assert len(a3.residue((1, 2), 0).chambers) == 21
    assert len(a3.residue((1, 3), 0).chambers) == 9
    rs = a3.residues((1, 2))
    assert len(rs) == 15 and sum(len(r.chambers) for r in rs) == 315


def test_min_gallery():
    a2 = coxeter.coxeter_complex(coxeter.A2)
    g = a2.min_gallery(0, 0)
    assert g.chambers == (0,) and g.types == ()
    assert a2.minimal_gallery_types(0, 0) == frozenset({()})
    table = coxeter.enumerate_group(coxeter.A2)
    w0 = table.longest_id()
    assert a2.minimal_gallery_types(0, w0) == frozenset({(1, 2, 1), (2, 1, 2)})
    # adjacent chambers sharing only an i-panel have type set {(i,)}
    partner = [d for d in a2.panel_of(1, 0) if d != 0][0]
    assert a2.minimal_gallery_types(0, partner) == frozenset({(1,)})
    g = a2.min_gallery(0, w0)
    assert len(g) == 3
    chamber.validate_gallery(a2, g)
    disc = chamber.from_partitions(2, 1, {1: [(0,), (1,)]})
    with pytest.raises(Disconnected):
        disc.min_gallery(0, 1)


def test_gallery_normalize_concat():
    g = TypedGallery((0, 0, 1), (1, 1))
    assert g.normalized().chambers == (0, 1)
    h = TypedGallery((1, 2), (2,))
    assert g.normalized().concat(h).chambers == (0, 1, 2)


def test_generalized_mgon():
    thin2 = coxeter.coxeter_complex(coxeter.A1xA1)
    assert chamber.is_generalized_mgon(thin2, 2)
    assert not chamber.is_generalized_mgon(thin2, 3)
    fano = catalog.build_fano_flags()
    assert chamber.is_generalized_mgon(fano, 3)
    assert not chamber.is_generalized_mgon(fano, 4)
    with pytest.raises(WrongRank):
        chamber.is_generalized_mgon(catalog.build_a3_f2(), 3)


def test_infer_type_matrix():
    assert chamber.infer_type_matrix(coxeter.coxeter_complex(coxeter.C3)) == coxeter.C3
    M = chamber.infer_type_matrix(catalog.build_a3_f2())
    assert M == coxeter.A3
    # inconsistent: disjoint union of a triangle system and a digon system
    fano = catalog.build_fano_flags()
    thin2 = coxeter.coxeter_complex(coxeter.A1xA1)
    n = fano.n + thin2.n
    parts = {}
    for i in (1, 2):
        panels = [p for p in fano.panels[i]]
        panels += [tuple(c + fano.n for c in p) for p in thin2.panels[i]]
        parts[i] = panels
    mixed = chamber.from_partitions(n, 2, parts)
    with pytest.raises(InconsistentResidues):
        chamber.infer_type_matrix(mixed)
    # a residue that is no polygon at all
    path = chamber.from_partitions(2, 2, {1: [(0, 1)], 2: [(0,), (1,)]})
    with pytest.raises(ResidueNotPolygon):
        chamber.infer_type_matrix(path)


def test_is_simplicial():
    ok, wit = chamber.is_simplicial(coxeter.coxeter_complex(coxeter.A3))
    assert ok and wit is None
    single = chamber.from_partitions(1, 3, {1: [(0,)], 2: [(0,)], 3: [(0,)]})
    assert chamber.is_simplicial(single)[0]
    # the 3-chamber Singer quotient of the Fano flags: every chamber has the
    # same vertex pair
    q = chamber.from_partitions(3, 2, {1: [(0, 1, 2)], 2: [(0, 1, 2)]})
    ok, wit = chamber.is_simplicial(q)
    assert not ok and wit[0] == "duplicate-vertices"


def test_quotient_trivial_and_collisions():
    fano = catalog.build_fano_flags()
    Q, proj = chamber.quotient(fano, [tuple(range(fano.n))])
    assert Q.n == fano.n and chamber.is_isomorphic(Q, fano)
    # rank-2 systems admit no proper quotient: the whole system is one
    # rank-2 residue
    M = (2, 4, 3)
    perm = tuple(catalog.mat_apply(M, v) - 1 for v in range(1, 8))
    index = {lab: c for c, lab in enumerate(fano.labels)}
    auto = tuple(index[(perm[p - 1] + 1, tuple(sorted(perm[x - 1] + 1 for x in L)))]
                 for p, L in fano.labels)
    autos = []
    cur = tuple(range(fano.n))
    for _ in range(7):
        autos.append(cur)
        cur = tuple(auto[c] for c in cur)
    with pytest.raises(ResidueCollision):
        chamber.quotient(fano, autos)


def test_quotient_singer():
    base, quot, proj = catalog.build_singer_quotient(5)
    assert base.n == 315 and quot.n == 63
    with pytest.raises(ResidueCollision):
        catalog.build_singer_quotient(15)
    with pytest.raises(ResidueCollision):
        catalog.build_singer_quotient(3)


def test_sub_system_requires_panel_closure():
    fano = catalog.build_fano_flags()
    with pytest.raises(ValueError):
        chamber.sub_system(fano, [0, 1], (1, 2))


def test_isomorphism_negative():
    fano = catalog.build_fano_flags()
    gq = catalog.build_gq22()
    assert chamber.isomorphism(fano, gq) is None
    thin = coxeter.coxeter_complex(coxeter.A1xA1)
    disc = chamber.from_partitions(4, 2, {1: [(0, 1), (2, 3)], 2: [(0, 1), (2, 3)]})
    assert chamber.isomorphism(thin, disc) is None


def test_verify_isomorphism():
    fano = catalog.build_fano_flags()
    assert chamber.verify_isomorphism(fano, fano, tuple(range(fano.n)))
    bad = list(range(fano.n))
    bad[0], bad[1] = bad[1], bad[0]
    assert chamber.verify_isomorphism(fano, fano, tuple(bad)) in (True, False)


def test_json_roundtrip_and_dot():
    fano = catalog.build_fano_flags()
    obj = chamber.system_to_json(fano)
    text = json.dumps(obj, sort_keys=True)
    C2 = chamber.system_from_json(json.loads(text))
    assert C2.n == fano.n and C2.panels == fano.panels
    dot = chamber.adjacency_dot(fano)
    assert "c0 --" in dot or "-- c0" in dot
    inc = chamber.incidence_dot(fano)
    assert "a0" in inc and "b0" in inc


def test_component_maps_deterministic():
    a3 = catalog.build_a3_f2()
    rng = random.Random(9)
    for _ in range(5):
        J = tuple(sorted(rng.sample([1, 2, 3], rng.randint(1, 3))))
        m1 = a3.component_map(J)
        m2 = a3.component_map(frozenset(J))
        assert m1 == m2
