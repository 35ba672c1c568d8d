"""Reference geometries: Fano flags, the symplectic quadrangle over F2,
flag systems of PG(3,2) (direct and as GL(4,2) cosets), the A7 triple
geometry, and Singer-subgroup quotients.

All constructions are deterministic: fixed generator matrices, fixed basis
order, chambers sorted lexicographically by label.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import groups
from .chamber import ChamberSystem, HomogeneousSpec, from_cosets, quotient
from .covers import CoveringMap

# ---------------------------------------------------------------------------
# GF(2) linear algebra on bitmask vectors


def mat_apply(M, v):
    """Apply a matrix (tuple of basis images) to a bitmask vector."""
    r = 0
    b = 0
    while v:
        if v & 1:
            r ^= M[b]
        v >>= 1
        b += 1
    return r


def span(vs):
    s = {0}
    for v in vs:
        s |= {x ^ v for x in s}
    return frozenset(x for x in s if x)


def subspaces(dim_total, dim, points=None):
    """All dim-dimensional subspaces of F2^dim_total as frozensets of
    nonzero vectors."""
    if points is None:
        points = range(1, 1 << dim_total)
    out = set()
    for basis in combinations(points, dim):
        s = span(basis)
        if len(s) == (1 << dim) - 1:
            out.add(s)
    return sorted(out, key=sorted)


# companion matrix of x^4 + x + 1 (primitive over F2); order 15
SINGER_MATRIX = (2, 4, 8, 3)


@lru_cache(maxsize=None)
def gl4_2():
    """GL(4,2) as permutations of the 15 nonzero vectors of F2^4."""
    cyc = (2, 4, 8, 1)       # basis 4-cycle
    tv = (1, 3, 4, 8)        # transvection e2 -> e1 + e2
    gens = [tuple(mat_apply(M, v) - 1 for v in range(1, 16)) for M in (cyc, tv)]
    G = groups.group_from_generators(gens, cap=30000)
    assert G.order == 20160
    return G


def _setwise(g, idxs):
    return frozenset(g[i] for i in idxs)


@lru_cache(maxsize=None)
def gl4_2_parabolics():
    """(G, Borel, minimal parabolics, vertex parabolics) for the standard
    flag e1 < <e1,e2> < <e1,e2,e3>."""
    G = gl4_2()
    p0 = frozenset({0})
    L0 = frozenset({0, 1, 2})          # vectors {1,2,3}
    pl0 = frozenset(range(7))          # vectors {1..7}

    def stab(*sets):
        return groups.stabilizer(G, lambda g: all(_setwise(g, s) == s for s in sets))

    borel = stab(p0, L0, pl0)
    assert borel.order == 64
    faces = {1: stab(L0, pl0), 2: stab(p0, pl0), 3: stab(p0, L0)}
    assert all(F.order == 192 for F in faces.values())
    vertex = {1: stab(p0), 2: stab(L0), 3: stab(pl0)}
    assert vertex[1].order == 1344 and vertex[2].order == 576 and vertex[3].order == 1344
    return G, borel, faces, vertex


@lru_cache(maxsize=None)
def a3_f2_spec():
    G, borel, faces, vertex = gl4_2_parabolics()
    return HomogeneousSpec(G, borel, faces, vertex=vertex)


# ---------------------------------------------------------------------------
# flag systems


def _flag_system(flags, rank):
    """Chamber system from maximal flags: chambers sorted by label, the
    type-i panel collects flags equal away from position i-1."""
    flags = sorted(flags)
    index = {f: c for c, f in enumerate(flags)}
    partitions = {}
    for i in range(1, rank + 1):
        buckets = {}
        for f, c in index.items():
            key = f[:i - 1] + f[i:]
            buckets.setdefault(key, []).append(c)
        partitions[i] = sorted(tuple(sorted(v)) for v in buckets.values())
    return ChamberSystem(len(flags), rank, partitions, labels=tuple(flags))


@lru_cache(maxsize=None)
def build_fano_flags():
    """Incident (point, line) pairs of the projective plane over F2."""
    lines = subspaces(3, 2)
    flags = [(p, tuple(sorted(L))) for L in lines for p in sorted(L)]
    C = _flag_system(flags, 2)
    assert C.n == 21
    return C


@lru_cache(maxsize=None)
def build_gq22():
    """Incident (point, totally isotropic line) pairs of the symplectic
    space F2^4 with form matrix [[0,I],[I,0]]."""

    def form(x, y):
        return ((x & 1) * (y >> 2 & 1) ^ (x >> 1 & 1) * (y >> 3 & 1)
                ^ (x >> 2 & 1) * (y & 1) ^ (x >> 3 & 1) * (y >> 1 & 1))

    lines = []
    for L in subspaces(4, 2):
        a, b, _ = sorted(L)
        if form(a, b) == 0:
            lines.append(L)
    assert len(lines) == 15
    flags = [(p, tuple(sorted(L))) for L in lines for p in sorted(L)]
    C = _flag_system(flags, 2)
    assert C.n == 45
    return C


@lru_cache(maxsize=None)
def build_a3_f2(model="flags"):
    """The 315-chamber flag system of PG(3,2), either directly from flags
    or as the coset system of GL(4,2) with its Borel and minimal parabolics."""
    if model == "cosets":
        C = from_cosets(a3_f2_spec())
        assert C.n == 315
        return C
    assert model == "flags"
    pts = range(1, 16)
    lines = subspaces(4, 2)
    planes = subspaces(4, 3)
    assert len(lines) == 35 and len(planes) == 15
    flags = []
    for pl in planes:
        pl_key = tuple(sorted(pl))
        for L in lines:
            if L <= pl:
                L_key = tuple(sorted(L))
                for p in sorted(L):
                    flags.append((p, L_key, pl_key))
    C = _flag_system(flags, 3)
    assert C.n == 315
    return C


# ---------------------------------------------------------------------------
# the A7 triple geometry


@lru_cache(maxsize=None)
def fano_planes_on_7():
    """All 30 Fano plane structures on {1..7}, via the S7 orbit of one."""
    std = frozenset(frozenset(t) for t in
                    [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)])
    transpositions = []
    for a in range(1, 7):
        m = {x: x for x in range(1, 8)}
        m[a], m[a + 1] = a + 1, a
        transpositions.append(m)

    def act(plane, m):
        return frozenset(frozenset(m[x] for x in t) for t in plane)

    seen = {std}
    frontier = [std]
    while frontier:
        nxt = []
        for p in frontier:
            for m in transpositions:
                q = act(p, m)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    assert len(seen) == 30
    return sorted(seen, key=lambda P: sorted(sorted(t) for t in P))


def _plane_key(plane):
    return tuple(sorted(tuple(sorted(t)) for t in plane))


@lru_cache(maxsize=None)
def a7_plane_orbit():
    """The Alt(7)-orbit of Fano structures containing the lexicographically
    least plane (15 of the 30)."""
    planes = fano_planes_on_7()
    start = planes[0]
    evens = []
    for a in range(1, 6):
        m = {x: x for x in range(1, 8)}
        m[a], m[a + 1], m[a + 2] = m[a + 1], m[a + 2], m[a]
        evens.append(m)

    def act(plane, m):
        return frozenset(frozenset(m[x] for x in t) for t in plane)

    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for m in evens:
                q = act(p, m)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    assert len(seen) == 15
    return sorted(seen, key=_plane_key)


@lru_cache(maxsize=None)
def build_neumaier_a7():
    """The 315-chamber rank-3 geometry on 7 points, all 35 triples as
    lines, and one Alt(7)-orbit of Fano structures as planes.  Returns
    (system, coset spec under Alt(7))."""
    planes = a7_plane_orbit()
    flags = []
    for pl in planes:
        pk = _plane_key(pl)
        for t in sorted(pl, key=sorted):
            tk = tuple(sorted(t))
            for p in tk:
                flags.append((p, tk, pk))
    C = _flag_system(flags, 3)
    assert C.n == 315

    A7 = groups.alternating_group(7)
    p0, L0, pl0 = min(flags)

    def line_img(g, tk):
        return tuple(sorted(g[x - 1] + 1 for x in tk))

    def plane_img(g, pk):
        return tuple(sorted(line_img(g, t) for t in pk))

    def stab(point=None, line=None, plane=None):
        def pred(g):
            if point is not None and g[point - 1] + 1 != point:
                return False
            if line is not None and line_img(g, line) != line:
                return False
            if plane is not None and plane_img(g, plane) != plane:
                return False
            return True
        return groups.stabilizer(A7, pred)

    H = stab(point=p0, line=L0, plane=pl0)
    assert H.order == 8
    faces = {1: stab(line=L0, plane=pl0), 2: stab(point=p0, plane=pl0), 3: stab(point=p0, line=L0)}
    assert all(F.order == 24 for F in faces.values())
    vertex = {1: stab(point=p0), 2: stab(line=L0), 3: stab(plane=pl0)}
    assert vertex[1].order == 360 and vertex[2].order == 72 and vertex[3].order == 168
    spec = HomogeneousSpec(A7, H, faces, vertex=vertex)
    return C, spec


# ---------------------------------------------------------------------------
# Singer quotients


def coset_flag_isomorphism(spec, C_flags, act_label):
    """Explicit isomorphism coset-system -> flag-system sending the coset of
    g to the flag g . f0, where f0 is the least flag label (the one whose
    stabilizer is the principal subgroup).  Returns the chamber map."""
    ct = groups.left_cosets(spec.group, spec.principal)
    f0 = min(C_flags.labels)
    index = {lab: c for c, lab in enumerate(C_flags.labels)}
    return tuple(index[act_label(rep, f0)] for rep in ct.reps)


def a3_f2_label_action(g, label):
    """Apply a GL(4,2) point permutation (0-based vector indices) to a
    PG(3,2) flag label."""
    p, L, pl = label
    return (g[p - 1] + 1,
            tuple(sorted(g[x - 1] + 1 for x in L)),
            tuple(sorted(g[x - 1] + 1 for x in pl)))


def neumaier_label_action(g, label):
    """Apply an Alt(7) symbol permutation (0-based) to a triple-geometry
    flag label."""
    p, L, pl = label
    return (g[p - 1] + 1,
            tuple(sorted(g[x - 1] + 1 for x in L)),
            tuple(sorted(tuple(sorted(g[x - 1] + 1 for x in t)) for t in pl)))


def singer_flag_automorphism(power=1):
    """The chamber permutation of the PG(3,2) flag system induced by the
    power of the fixed Singer matrix."""
    base = build_a3_f2()
    index = {lab: c for c, lab in enumerate(base.labels)}
    M = SINGER_MATRIX

    def vec(v):
        w = v
        for _ in range(power):
            w = mat_apply(M, w)
        return w

    perm = []
    for p, L, pl in base.labels:
        lab = (vec(p), tuple(sorted(vec(x) for x in L)), tuple(sorted(vec(x) for x in pl)))
        perm.append(index[lab])
    return tuple(perm)


def build_singer_quotient(subgroup_order=15, base=None):
    """Quotient of the PG(3,2) flag system by the cyclic subgroup of the
    given order inside the Singer cycle of the fixed primitive matrix.

    Orders 15 and 3 are rejected with ResidueCollision: their order-3
    subgroup stabilizes the five lines that are 1-dimensional over F4, so
    the projection would not be a 2-covering.  Order 5 gives the free
    63-chamber quotient.  Returns (base, quotient, projection map).
    """
    assert 15 % subgroup_order == 0 and subgroup_order > 1
    if base is None:
        base = build_a3_f2()
    g = singer_flag_automorphism(15 // subgroup_order)
    autos = []
    cur = tuple(range(base.n))
    for _ in range(subgroup_order):
        autos.append(cur)
        cur = tuple(g[c] for c in cur)
    assert cur == autos[0]
    quot, proj = quotient(base, autos)
    return base, quot, CoveringMap(base, quot, proj)


# ---------------------------------------------------------------------------
# the catalog table


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    expected: dict
    builder: object
    note: str = ""


def _build_fano():
    return {"system": build_fano_flags()}


def _build_gq22():
    return {"system": build_gq22()}


def _build_a3f2():
    return {"system": build_a3_f2()}


def _build_a3f2_cosets():
    return {"system": build_a3_f2("cosets"), "spec": a3_f2_spec()}


def _build_neumaier():
    C, spec = build_neumaier_a7()
    return {"system": C, "spec": spec}


def _build_singer_z5():
    base, quot, proj = build_singer_quotient(5)
    return {"system": quot, "base": base, "projection": proj}


def _build_singer_z15():
    base, quot, proj = build_singer_quotient(15)
    return {"system": quot, "base": base, "projection": proj}


CATALOG = {
    e.name: e for e in [
        CatalogEntry(
            "fano", "flag system of the projective plane over F2",
            {"n": 21, "rank": 2, "girth": 6, "diameter": 3}, _build_fano),
        CatalogEntry(
            "gq22", "flag system of the symplectic quadrangle over F2",
            {"n": 45, "rank": 2, "girth": 8, "diameter": 4}, _build_gq22),
        CatalogEntry(
            "a3-f2", "flag system of PG(3,2)",
            {"n": 315, "rank": 3}, _build_a3f2),
        CatalogEntry(
            "a3-f2-cosets", "PG(3,2) flags as GL(4,2) Borel cosets",
            {"n": 315, "rank": 3}, _build_a3f2_cosets),
        CatalogEntry(
            "neumaier-a7", "triple geometry on 7 points under Alt(7)",
            {"n": 315, "rank": 3}, _build_neumaier),
        CatalogEntry(
            "singer-quotient-z5", "free Singer-subgroup quotient of the PG(3,2) flags",
            {"n": 63, "rank": 3}, _build_singer_z5),
        CatalogEntry(
            "singer-quotient", "order-15 Singer quotient of the PG(3,2) flags",
            {"n": 21, "rank": 3}, _build_singer_z15,
            note=("rejected at build time: the order-3 subgroup of the Singer cycle "
                  "stabilizes the five F4-lines, so no 2-covering quotient exists")),
    ]
}


def build(name):
    """Build a catalog entry and validate it against its expected stats."""
    entry = CATALOG[name]
    artifacts = entry.builder()
    C = artifacts["system"]
    exp = entry.expected
    if C.n != exp["n"] or C.rank != exp["rank"]:
        raise AssertionError(
            f"catalog {name}: got n={C.n} rank={C.rank}, expected {exp}")
    if "girth" in exp:
        from .chamber import incidence_graph_stats
        girth, diam = incidence_graph_stats(C)
        if (girth, diam) != (exp["girth"], exp["diameter"]):
            raise AssertionError(
                f"catalog {name}: incidence graph ({girth},{diam}) != expected")
    return artifacts
