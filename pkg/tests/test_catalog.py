import json

import pytest

from chambers import catalog, chamber, groups, verify
from chambers.errors import ResidueCollision


def test_catalog_builds_and_validates():
    for name, entry in catalog.CATALOG.items():
        if name == "singer-quotient":
            with pytest.raises(ResidueCollision):
                catalog.build(name)
            continue
        artifacts = catalog.build(name)
        C = artifacts["system"]
        assert C.n == entry.expected["n"]
        assert C.rank == entry.expected["rank"]


def test_builds_deterministic():
    before = json.dumps(chamber.system_to_json(catalog.build_fano_flags()), sort_keys=True)
    catalog.build_fano_flags.cache_clear()
    after = json.dumps(chamber.system_to_json(catalog.build_fano_flags()), sort_keys=True)
    assert before == after
    b1 = json.dumps(chamber.system_to_json(catalog.build_neumaier_a7()[0]), sort_keys=True)
    catalog.build_neumaier_a7.cache_clear()
    b2 = json.dumps(chamber.system_to_json(catalog.build_neumaier_a7()[0]), sort_keys=True)
    assert b1 == b2


def test_fano_planes_enumeration():
    planes = catalog.fano_planes_on_7()
    assert len(planes) == 30
    orbit = catalog.a7_plane_orbit()
    assert len(orbit) == 15
    # the chosen orbit contains the lexicographically least plane
    assert catalog._plane_key(planes[0]) == min(map(catalog._plane_key, orbit))


def test_singer_matrix_order():
    v, k = 1, 0
    while True:
        v = catalog.mat_apply(catalog.SINGER_MATRIX, v)
        k += 1
        if v == 1:
            break
    assert k == 15


def test_singer_automorphism_properties():
    base = catalog.build_a3_f2()
    g = catalog.singer_flag_automorphism(1)
    assert sorted(g) == list(range(base.n))
    assert chamber.is_type_preserving(base, g)
    # order 15 on chambers
    cur = tuple(range(base.n))
    for _ in range(15):
        cur = tuple(g[c] for c in cur)
    assert cur == tuple(range(base.n))


def test_explicit_isomorphisms():
    a3 = catalog.build_a3_f2()
    a3c = catalog.build_a3_f2("cosets")
    m = catalog.coset_flag_isomorphism(catalog.a3_f2_spec(), a3, catalog.a3_f2_label_action)
    assert chamber.verify_isomorphism(a3c, a3, m)
    neu, spec = catalog.build_neumaier_a7()
    neu_c = chamber.from_cosets(spec)
    m2 = catalog.coset_flag_isomorphism(spec, neu, catalog.neumaier_label_action)
    assert chamber.verify_isomorphism(neu_c, neu, m2)


def test_generic_isomorphism_search_a3f2():
    a3 = catalog.build_a3_f2()
    a3c = catalog.build_a3_f2("cosets")
    assert chamber.isomorphism(a3, a3c) is not None


def test_neumaier_vertex_groups_match_derived():
    _, spec = catalog.build_neumaier_a7()
    for j in spec.types:
        supplied = spec.vertex[j]
        derived = groups.subgroup_generated(
            spec.group,
            [g for i, F in sorted(spec.faces.items()) if i != j for g in F.elements])
        assert supplied.set == derived.set


def test_neumaier_point_residue_is_gq22():
    neu, _ = catalog.build_neumaier_a7()
    res = neu.residue((2, 3), 0)
    assert len(res.chambers) == 45
    sub, _ = chamber.sub_system(neu, res.chambers, (2, 3))
    assert chamber.polygon_parameter(sub) == 4
    assert chamber.is_isomorphic(sub, catalog.build_gq22())
    # a generalized quadrangle of order (2,2): panels of size 3 throughout
    assert all(len(p) == 3 for i in sub.types for p in sub.panels[i])


def test_neumaier_plane_residue_is_fano():
    neu, _ = catalog.build_neumaier_a7()
    res = neu.residue((1, 2), 0)
    assert len(res.chambers) == 21
    sub, _ = chamber.sub_system(neu, res.chambers, (1, 2))
    assert chamber.polygon_parameter(sub) == 3
    assert all(len(p) == 3 for i in sub.types for p in sub.panels[i])


def test_line_residues_are_digons():
    neu, _ = catalog.build_neumaier_a7()
    res = neu.residue((1, 3), 0)
    assert len(res.chambers) == 9
    sub, _ = chamber.sub_system(neu, res.chambers, (1, 3))
    assert chamber.polygon_parameter(sub) == 2
