"""Deterministic builders for the example spaces used in tests and the CLI.

Every space is constructed from first principles here (staircase products,
regluing of cut presentations, barycentric quotients, connected sums), so
the test suite can verify each against independent invariants (Euler
characteristics, untwisted Betti numbers) instead of trusting imported
triangulation tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, permutations, product as iproduct

from .complexes import (
    CutPresentation,
    FlatBundle,
    IntegralCocycle,
    SimplicialComplex,
    glue,
    validate,
)
from .fields import FieldSpec, root_of_unity


@dataclass
class NamedSpace:
    """A corpus space: complex, distinguished class xi, extra cocycles,
    optional cut presentation along the curve dual to xi, bundle recipes."""

    name: str
    X: SimplicialComplex
    xi: IntegralCocycle
    cocycles: dict = dc_field(default_factory=dict)
    cut: CutPresentation = None
    seam_vertices: set = None
    bundles: dict = dc_field(default_factory=dict)  # name -> recipe

    def make_bundle(self, key: str, spec: FieldSpec) -> FlatBundle:
        recipe = self.bundles[key]
        kind = recipe[0]
        if kind == "rootpow":
            n = recipe[1]
            a = root_of_unity(spec, n)
            if a is None:
                raise ValueError(
                    f"{spec!r} has no nontrivial {n}-th root of unity; "
                    f"use a field extension")
            return FlatBundle.rank1(spec, self.X, self.xi, a, name=key)
        if kind == "a^xi":
            a = spec.elem(recipe[1])
            return FlatBundle.rank1(spec, self.X, self.xi, a, name=key)
        raise ValueError(f"unknown bundle recipe {recipe!r}")

    def check(self):
        diag = validate(self.X, self.xi)
        for z in self.cocycles.values():
            d2 = validate(self.X, z)
            diag.issues.extend(d2.issues)
        diag.ok = not diag.issues
        return diag


# -- products ----------------------------------------------------------------


def simplicial_product(X: SimplicialComplex, Y: SimplicialComplex):
    """Staircase triangulation of X x Y with the lexicographic vertex order.

    Vertex (x, y) gets index x * nY + y; each pair of facets contributes the
    monotone lattice paths through its grid.
    """
    ny = Y.n_vertices
    facets = []
    fx = _facets(X)
    fy = _facets(Y)
    for s in fx:
        for t in fy:
            p, q = len(s) - 1, len(t) - 1
            for path in _lattice_paths(p, q):
                facets.append(tuple(s[i] * ny + t[j] for (i, j) in path))
    return SimplicialComplex.from_facets(X.n_vertices * ny, facets)


def _facets(X: SimplicialComplex):
    """Simplices not properly contained in another simplex."""
    out = []
    for d in sorted(X.by_dim, reverse=True):
        for s in X.simplices(d):
            if d == X.dim or not _covered(X, s):
                out.append(s)
    return out


def _covered(X, s):
    d = len(s)
    for bigger in X.simplices(d):
        if set(s) <= set(bigger):
            return True
    return False


def _lattice_paths(p: int, q: int):
    """Monotone paths from (0,0) to (p,q) stepping +1 in one coordinate."""
    paths = []
    for pattern in combinations(range(p + q), p):
        pt, path = [0, 0], [(0, 0)]
        for step in range(p + q):
            if step in pattern:
                pt[0] += 1
            else:
                pt[1] += 1
            path.append((pt[0], pt[1]))
        paths.append(path)
    return paths


def pullback_x(XY: SimplicialComplex, zX: IntegralCocycle, ny: int):
    """Pull an X-cocycle back along the projection of a staircase product."""
    vals = {}
    for (u, v) in XY.edges:
        w = zX(u // ny, v // ny) if u // ny != v // ny else 0
        if w:
            vals[(u, v)] = w
    return IntegralCocycle(vals)


def pullback_y(XY: SimplicialComplex, zY: IntegralCocycle, ny: int):
    vals = {}
    for (u, v) in XY.edges:
        w = zY(u % ny, v % ny) if u % ny != v % ny else 0
        if w:
            vals[(u, v)] = w
    return IntegralCocycle(vals)


def reroute_cocycle(X: SimplicialComplex, z: IntegralCocycle, g: dict):
    """Cohomologous cocycle z - delta(g) over all edges of X."""
    vals = {}
    for (u, v) in X.edges:
        w = z(u, v) - (g.get(v, 0) - g.get(u, 0))
        if w:
            vals[(u, v)] = w
    return IntegralCocycle(vals)


def push_cocycle(glued, zN: IntegralCocycle) -> IntegralCocycle:
    """Transfer a cocycle on N through a gluing; fails on inconsistency."""
    vmap = glued.vertex_map
    vals = {}
    seen = {}
    for (p, q), w in zN.values.items():
        a, b = vmap[p], vmap[q]
        e, val = ((a, b), w) if a < b else ((b, a), -w)
        if e in seen and seen[e] != val:
            raise ValueError(f"cocycle does not descend to glued edge {e}")
        seen[e] = val
        if val:
            vals[e] = val
    return IntegralCocycle(vals)


# -- basic pieces ------------------------------------------------------------


def _path(n_edges: int) -> SimplicialComplex:
    return SimplicialComplex.from_facets(
        n_edges + 1, [(i, i + 1) for i in range(n_edges)])


def _cycle3() -> SimplicialComplex:
    return SimplicialComplex.from_facets(3, [(0, 1), (0, 2), (1, 2)])


def _point() -> SimplicialComplex:
    return SimplicialComplex(1, [(0,)])


def _sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex: the minimal n-sphere."""
    verts = tuple(range(n + 2))
    return SimplicialComplex.from_facets(
        n + 2, list(combinations(verts, n + 1)))


def circle() -> NamedSpace:
    """Triangle circle with z(01) = 1, cut open into a 4-vertex path."""
    N = _path(3)
    cut = CutPresentation(N, _point(), {0: 0}, {0: 3})
    G = glue(cut)
    assert G.z.values == {(0, 1): 1}
    return NamedSpace("circle", G.X, G.z, {"xi": G.z}, cut, G.seam_vertices)


def torus(n: int = 2) -> NamedSpace:
    """T^n for n <= 3: reglued staircase cylinder, then circle products."""
    if n == 1:
        return circle()
    if n == 2:
        cyl = simplicial_product(_path(3), _cycle3())
        zy_cyl = pullback_y(cyl, IntegralCocycle({(0, 1): 1}), 3)
        cut = CutPresentation(
            cyl, _cycle3(),
            {v: 0 * 3 + v for v in range(3)},
            {v: 3 * 3 + v for v in range(3)})
        G = glue(cut)
        zy = push_cocycle(G, zy_cyl)
        # xi supported on a parallel copy of the seam (for the support test)
        g = {v: 1 for v in range(G.X.n_vertices) if v // 3 == 1}
        par = reroute_cocycle(G.X, G.z, g)
        return NamedSpace("torus2", G.X, G.z,
                          {"xi": G.z, "y": zy, "xi_parallel": par},
                          cut, G.seam_vertices)
    if n == 3:
        t2 = torus(2)
        X = simplicial_product(t2.X, _cycle3())
        zx = pullback_x(X, t2.xi, 3)
        zy = pullback_x(X, t2.cocycles["y"], 3)
        zz = pullback_y(X, IntegralCocycle({(0, 1): 1}), 3)
        return NamedSpace("torus3", X, zx,
                          {"xi": zx, "y": zy, "z": zz})
    raise ValueError("torus(n) supports n <= 3")


def _choose_facet(X: SimplicialComplex, cocycles, forbidden=frozenset()):
    """First facet (lex order) avoiding forbidden vertices on which every
    given cocycle vanishes edge-wise."""
    for s in X.simplices(X.dim):
        if any(v in forbidden for v in s):
            continue
        if all(all(z(u, v) == 0 for (u, v) in combinations(s, 2))
               for z in cocycles):
            return s
    raise ValueError("no admissible facet for connected sum")


def connected_sum_complexes(XA, XB, cocA, cocB,
                            forbiddenA=frozenset(), forbiddenB=frozenset()):
    """Remove one facet from each complex and glue the boundary spheres by
    the sorted vertex bijection.  A keeps its labels; B is relabeled.

    cocA/cocB: dicts of cocycles carried through (they must vanish on the
    removed facets, which the facet chooser guarantees).
    Returns (X, cocycles, relabelB).
    """
    if XA.dim != XB.dim or XA.dim < 2:
        raise ValueError("connected sum needs equal dimensions >= 2")
    tA = _choose_facet(XA, cocA.values(), forbiddenA)
    tB = _choose_facet(XB, cocB.values(), forbiddenB)
    relabel = {}
    for a, b in zip(tA, tB):
        relabel[b] = a
    nxt = XA.n_vertices
    for v in range(XB.n_vertices):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    facets = [s for s in XA.simplices(XA.dim) if s != tA]
    for s in XB.simplices(XB.dim):
        if s == tB:
            continue
        facets.append(tuple(sorted(relabel[v] for v in s)))
    X = SimplicialComplex.from_facets(nxt, facets)
    out = {}
    for name, z in cocA.items():
        out[name] = IntegralCocycle(dict(z.values))
    for name, z in cocB.items():
        vals = {}
        for (u, v), w in z.values.items():
            a, b = relabel[u], relabel[v]
            e, val = ((a, b), w) if a < b else ((b, a), -w)
            vals[e] = val
        out[name] = IntegralCocycle(vals)
    for name, z in out.items():
        bad = z.violations(X)
        if bad:
            raise AssertionError(f"carried cocycle {name} broken on {bad[0]}")
    return X, out, relabel


def surface(g: int) -> NamedSpace:
    """Closed orientable surface of genus g with xi dual to a nonseparating
    curve on one handle and v1, v2 the coordinate classes of another.

    Built as a staircase cylinder connected-summed with g-1 reglued tori,
    then closed up along the cylinder seam, so the cut presentation along
    the curve dual to xi comes for free.
    """
    if g < 1:
        raise ValueError("surface(g) needs g >= 1")
    if g == 1:
        return torus(2)
    N = simplicial_product(_path(3), _cycle3())
    seam = set(range(3)) | {3 * 3 + v for v in range(3)}
    coc = {"y_cyl": pullback_y(N, IntegralCocycle({(0, 1): 1}), 3)}
    t2 = torus(2)
    for h in range(1, g):
        handle = {f"v{2*h - 1}": t2.xi, f"v{2*h}": t2.cocycles["y"]}
        N, coc, _ = connected_sum_complexes(N, t2.X, coc, handle,
                                            forbiddenA=seam)
    cut = CutPresentation(N, _cycle3(),
                          {v: v for v in range(3)},
                          {v: 9 + v for v in range(3)})
    G = glue(cut)
    cocycles = {"xi": G.z}
    for name, z in coc.items():
        cocycles[name] = push_cocycle(G, z)
    # parallel copy of the seam class, supported away from the seam ring
    cocycles["xi_parallel"] = reroute_cocycle(
        G.X, G.z, {G.vertex_map[v]: 1 for v in range(12) if 3 <= v < 6})
    return NamedSpace(f"surface{g}", G.X, G.z, cocycles, cut,
                      G.seam_vertices)


def dual_curve_cocycles(space: NamedSpace):
    """(v1, v2, xi) for a genus >= 2 surface: v1, v2 live on a handle
    disjoint from the curve dual to xi."""
    return space.cocycles["v1"], space.cocycles["v2"], space.xi


def rp(n: int) -> NamedSpace:
    """Real projective space, n = 2 or 3."""
    if n == 2:
        # antipodal icosahedron quotient: the 6-vertex projective plane
        facets = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
                  (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
        X = SimplicialComplex.from_facets(6, facets)
        return NamedSpace("rp2", X, IntegralCocycle({}))
    if n == 3:
        return NamedSpace("rp3", _rp3_complex(), IntegralCocycle({}))
    raise ValueError("rp(n) supports n in {2, 3}")


def _rp3_complex() -> SimplicialComplex:
    """RP^3 as the antipodal quotient of the barycentric subdivision of the
    boundary of the 4-dimensional cross-polytope.

    Subdivision vertices are the faces (vertex sets free of antipodal
    pairs); simplices are inclusion chains.  The antipodal involution is
    free and no chain meets an orbit twice, so the quotient is simplicial.
    """
    def antipode_face(F):
        return tuple(sorted((v + 4) % 8 for v in F))

    faces = set()
    for k in range(1, 5):
        for axes in combinations(range(4), k):
            for signs in iproduct((0, 1), repeat=k):
                faces.add(tuple(sorted(a + 4 * s for a, s in zip(axes, signs))))
    rep = {F: min(F, antipode_face(F)) for F in faces}
    rep_ids = {r: i for i, r in enumerate(
        sorted(set(rep.values()), key=lambda f: (len(f), f)))}
    tets = set()
    for F in faces:
        if len(F) != 4:
            continue
        for perm in permutations(F):
            chain = [tuple(sorted(perm[:k])) for k in range(1, 5)]
            tet = tuple(sorted(rep_ids[rep[c]] for c in chain))
            if len(set(tet)) != 4:
                raise AssertionError("antipodal quotient degenerates a chain")
            tets.add(tet)
    return SimplicialComplex.from_facets(len(rep_ids), tets)


def s1_x_sphere(n: int) -> NamedSpace:
    """S^1 x S^(n-1) as a staircase product, xi the circle coordinate."""
    if n < 2:
        raise ValueError("s1_x_sphere(n) needs n >= 2")
    sph = _sphere(n - 1)
    X = simplicial_product(_cycle3(), sph)
    xi = pullback_x(X, IntegralCocycle({(0, 1): 1}), sph.n_vertices)
    return NamedSpace(f"s1xs{n - 1}", X, xi, {"xi": xi})


def connected_sum(A: NamedSpace, B: NamedSpace, xi_from: str = "b",
                  name: str = "") -> NamedSpace:
    """Connected sum of two named spaces of equal dimension."""
    X, coc, relabel = connected_sum_complexes(
        A.X, B.X,
        {f"a.{k}": z for k, z in A.cocycles.items()},
        {f"b.{k}": z for k, z in B.cocycles.items()})
    xi = coc.get(f"{xi_from}.xi", IntegralCocycle({}))
    coc["xi"] = xi
    return NamedSpace(name or f"{A.name}#{B.name}", X, xi, coc)


def rp3_handle() -> NamedSpace:
    """RP^3 # (S^1 x S^2) with xi running once along the handle; carries
    the rank-1 bundle recipe with cube-root monodromy along the handle."""
    space = connected_sum(rp(3), s1_x_sphere(3), xi_from="b",
                          name="rp3_handle")
    space.bundles["omega^xi"] = ("rootpow", 3)
    return space


def product_with_circle(A: NamedSpace, xi_from: str = "circle") -> NamedSpace:
    """A x S^1; xi pulled from the circle factor or from A's class."""
    X = simplicial_product(A.X, _cycle3())
    coc = {}
    for k, z in A.cocycles.items():
        coc[f"base.{k}"] = pullback_x(X, z, 3)
    coc["xi_circle"] = pullback_y(X, IntegralCocycle({(0, 1): 1}), 3)
    xi = coc["xi_circle"] if xi_from == "circle" else coc["base.xi"]
    coc["xi"] = xi
    return NamedSpace(f"{A.name}_x_circle", X, xi, coc)


EXAMPLES = {
    "circle": circle,
    "torus2": lambda: torus(2),
    "torus3": lambda: torus(3),
    "surface2": lambda: surface(2),
    "surface3": lambda: surface(3),
    "rp2": lambda: rp(2),
    "rp3": lambda: rp(3),
    "s1xs2": lambda: s1_x_sphere(3),
    "rp3_handle": rp3_handle,
    "s1_x_surface2": lambda: product_with_circle(surface(2), "circle"),
    "surface2_x_s1": lambda: product_with_circle(surface(2), "base"),
}


def build(name: str, **kw) -> NamedSpace:
    """Builder dispatch: circle, torus(n), surface(g), rp(n),
    s1_x_sphere(n), connected_sum(a, b), product_with_circle(a)."""
    table = {
        "circle": circle,
        "torus": torus,
        "surface": surface,
        "rp": rp,
        "s1_x_sphere": s1_x_sphere,
        "connected_sum": connected_sum,
        "product_with_circle": product_with_circle,
    }
    if name in table:
        return table[name](**kw)
    if name in EXAMPLES:
        return EXAMPLES[name]()
    raise ValueError(f"unknown space {name!r}")
