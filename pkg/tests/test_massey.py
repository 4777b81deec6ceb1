"""Spectral pages, chain-level differentials, survivors, support criterion."""

import random
from fractions import Fraction

import pytest

from cupbound import linalg
from cupbound.complexes import (FlatBundle, IntegralCocycle, TwistedComplex,
                                edge_vector, twisted_complex)
from cupbound.corpus import build
from cupbound.cuplen import cup
from cupbound.fields import FieldSpec
from cupbound.massey import (certificate_defects, chain_level_dr, chain_pages,
                             pages_from_modules, recentered_layers,
                             spectral_pages, support_criterion, survivors,
                             _laurent_complex)
from cupbound.poly import Poly


Q = FieldSpec.rationals()
F4 = FieldSpec.extension(2, 2)
F5 = FieldSpec.prime(5)


# -- frozen page tables -------------------------------------------------------


def test_circle_pages():
    sp = build("circle")
    pages = spectral_pages(sp.X, sp.xi, spec=Q)
    assert len(pages) == 2
    assert pages[0].dims == [1, 1] and pages[0].d_ranks == [1, 0]
    assert pages[1].dims == [0, 0] and pages[1].stabilized


def test_torus_pages():
    pages = spectral_pages(build("torus2").X, build("torus2").xi, spec=Q)
    assert pages[0].dims == [1, 2, 1] and pages[0].d_ranks == [1, 1, 0]
    assert pages[1].dims == [0, 0, 0] and pages[1].stabilized


def test_surface_pages():
    sp = build("surface2")
    pages = spectral_pages(sp.X, sp.xi, spec=Q)
    assert pages[0].dims == [1, 4, 1] and pages[0].d_ranks == [1, 1, 0]
    assert pages[1].dims == [0, 2, 0] and pages[1].stabilized


def test_handle_sum_pages_over_f4():
    sp = build("rp3_handle")
    pages = spectral_pages(sp.X, sp.xi, spec=F4)
    assert pages[0].dims == [1, 2, 2, 1] and pages[0].d_ranks == [1, 0, 1, 0]
    assert pages[1].dims == [0, 1, 1, 0] and pages[1].stabilized


def test_max_page_truncation():
    sp = build("circle")
    pages = spectral_pages(sp.X, sp.xi, spec=Q, max_page=1)
    assert len(pages) == 1 and not pages[0].stabilized


# -- structural invariants ----------------------------------------------------


def _check_page_recursion(pages, frees):
    for a, b in zip(pages, pages[1:]):
        for i in range(len(a.dims)):
            lost = a.d_ranks[i] + (a.d_ranks[i - 1] if i else 0)
            assert b.dims[i] == a.dims[i] - lost
    last = pages[-1]
    assert last.stabilized and all(r == 0 for r in last.d_ranks)
    assert last.dims == frees


@pytest.mark.parametrize("name", ["circle", "torus2", "surface2", "rp2"])
def test_page_recursion_and_limit(name):
    sp = build(name)
    C, _ = _laurent_complex(sp.X, sp.xi, spec=Q)
    decs = C.modules()
    pages = pages_from_modules(decs, Q)
    _check_page_recursion(pages, [d.free_rank for d in decs])


@pytest.mark.parametrize("spec", [Q, F5, F4], ids=repr)
@pytest.mark.parametrize("name", ["circle", "torus2", "surface2", "rp2"])
def test_chain_level_oracle_matches_module_formula(name, spec):
    sp = build(name)
    C, _ = _laurent_complex(sp.X, sp.xi, spec=spec)
    pm = pages_from_modules(C.modules(), spec)
    pc = chain_pages(C, len(pm))
    for a, b in zip(pm, pc):
        assert a.dims == b.dims
        assert a.d_ranks == b.d_ranks
    assert pc[-1].stabilized == pm[-1].stabilized


def test_recentered_layers_reassemble_the_differential():
    sp = build("surface2")
    C, _ = _laurent_complex(sp.X, sp.xi, spec=Q)
    layers = recentered_layers(C)
    t = Fraction(3)          # tau = 1 + t = 4
    E = C.evaluate(Fraction(4))
    for q in range(len(C.diffs)):
        got = [dict() for _ in range(C.sizes[q + 1])]
        for k, mat in layers[q].items():
            for i, row in enumerate(mat):
                for j, v in row.items():
                    got[i][j] = got[i].get(j, Fraction(0)) + v * t ** k
        want = [{j: v for j, v in row.items()} for row in E.diffs[q]]
        got = [{j: v for j, v in row.items() if v} for row in got]
        assert got == want


def test_second_page_differential_on_a_synthetic_complex():
    # single map (tau-1)^2: the page-2 differential has rank 1
    tm1 = Poly.from_ints(Q, [-1, 1])
    C = TwistedComplex(Q, "poly", [1, 1], [[{0: tm1 * tm1}]])
    pages = pages_from_modules(C.modules(), Q)
    assert [p.dims for p in pages] == [[1, 1], [1, 1], [0, 0]]
    assert [p.d_ranks for p in pages] == [[0, 0], [1, 0], [0, 0]]
    chain = chain_pages(C, 3)
    assert [p.dims for p in chain] == [[1, 1], [1, 1], [0, 0]]
    assert [p.d_ranks for p in chain] == [[0, 0], [1, 0], [0, 0]]


# -- chain-level d_r ----------------------------------------------------------


def test_d1_of_the_unit_class_on_the_circle():
    sp = build("circle")
    ones = [Fraction(1)] * 3
    res = chain_level_dr(sp.X, sp.xi, ones, 1, spec=Q, degree=0)
    assert res.obstructed_at is None
    assert not res.zero_in_page
    assert any(res.value)
    # the unit cannot be lifted past the obstruction
    res2 = chain_level_dr(sp.X, sp.xi, ones, 2, spec=Q, degree=0)
    assert res2.obstructed_at == 1


def test_dr_vanishes_on_persistent_classes():
    sp = build("surface2")
    v1 = edge_vector(Q, sp.X, sp.cocycles["v1"])
    for r in (1, 2):
        res = chain_level_dr(sp.X, sp.xi, v1, r, spec=Q, degree=1)
        assert res.obstructed_at is None
        assert res.zero_in_page


def test_dr_input_validation():
    sp = build("circle")
    with pytest.raises(ValueError, match="ambiguous"):
        chain_level_dr(sp.X, sp.xi, [Fraction(1)] * 3, 1, spec=Q)
    with pytest.raises(ValueError, match="cocycle"):
        chain_level_dr(sp.X, sp.xi, [Fraction(1), Fraction(0), Fraction(0)],
                       1, spec=Q, degree=0)


# -- survivors ----------------------------------------------------------------


def test_survivor_dimensions():
    sp = build("circle")
    s0 = survivors(sp.X, sp.xi, 0, spec=Q)
    assert s0.dim == 0 and s0.ambient_dim == 1
    s1 = survivors(sp.X, sp.xi, 1, spec=Q)
    assert s1.dim == 1 and s1.ambient_dim == 1

    sp = build("surface2")
    s1 = survivors(sp.X, sp.xi, 1, spec=Q)
    assert s1.dim == 3 and s1.ambient_dim == 4
    assert s1.lift_order == 2


def test_survivors_contain_the_persistent_classes():
    sp = build("surface2")
    s1 = survivors(sp.X, sp.xi, 1, spec=Q)
    C = twisted_complex(sp.X, FlatBundle.trivial(Q, sp.X))
    span = linalg.Subspace(Q, sp.X.count(1))
    prev = C.dense(0)
    for j in range(C.sizes[0]):
        span.add([prev[i][j] for i in range(sp.X.count(1))])
    for vec in s1.vectors:
        span.add(vec)
    for name in ("v1", "v2", "xi"):
        assert span.contains(edge_vector(Q, sp.X, sp.cocycles[name]))


def test_survivors_are_killed_by_the_first_differential():
    # every survivor class has vanishing product with the defining class
    sp = build("surface2")
    triv = FlatBundle.trivial(Q, sp.X)
    xi_vec = edge_vector(Q, sp.X, sp.xi)
    C = twisted_complex(sp.X, triv)
    for q in (0, 1):
        s = survivors(sp.X, sp.xi, q, spec=Q)
        if q + 1 > sp.X.dim:
            continue
        cob = linalg.Subspace(Q, sp.X.count(q + 1))
        dense = C.dense(q)
        for j in range(C.sizes[q]):
            cob.add([dense[i][j] for i in range(sp.X.count(q + 1))])
        for vec in s.vectors:
            prod, _ = cup(sp.X, vec, q, triv, xi_vec, 1, triv)
            assert cob.contains(prod)


def test_certificates_satisfy_the_lifting_equations():
    for name, spec in (("circle", Q), ("surface2", Q), ("torus2", F5)):
        sp = build(name)
        for q in range(sp.X.dim + 1):
            s = survivors(sp.X, sp.xi, q, spec=spec)
            assert len(s.certificates) == s.dim
            for vec, cert in zip(s.vectors, s.certificates):
                assert len(cert) == s.lift_order
                assert cert[0] == vec
                residues = certificate_defects(sp.X, sp.xi, cert, spec=spec,
                                               degree=q)
                for res in residues:
                    assert all(spec.is_zero(x) for x in res)


def test_certificate_degree_mismatch_rejected():
    sp = build("surface2")
    s = survivors(sp.X, sp.xi, 1, spec=Q)
    with pytest.raises(ValueError):
        certificate_defects(sp.X, sp.xi, s.certificates[0], spec=Q, degree=2)


def test_stabilization_detection_matches_generic_dims():
    # outgoing/incoming page differentials all vanish exactly when the
    # untwisted dimensions already equal the generic ones
    sp = build("torus2")
    pages = spectral_pages(sp.X, sp.xi, spec=Q)
    rep_dims = pages[0].dims
    assert any(r for p in pages for r in p.d_ranks)
    assert rep_dims != pages[-1].dims

    z0 = IntegralCocycle({})
    pages0 = spectral_pages(sp.X, z0, spec=Q)
    assert all(r == 0 for p in pages0 for r in p.d_ranks)
    assert pages0[0].dims == pages0[-1].dims == [1, 2, 1]


# -- support criterion --------------------------------------------------------


def test_support_criterion_on_the_surface():
    sp = build("surface2")
    for name in ("v1", "v2", "xi_parallel"):
        cert = support_criterion(sp.cut, sp.cocycles[name], 1, spec=Q)
        assert cert is not None
        assert cert.degree == 1
        assert len(cert.lift) == sp.X.count(1)
    # the seam class itself touches the seam: inconclusive
    assert support_criterion(sp.cut, sp.cocycles["xi"], 1, spec=Q) is None


def test_support_certificate_is_a_polynomial_cocycle():
    sp = build("torus2")
    cert = support_criterion(sp.cut, sp.cocycles["xi_parallel"], 1, spec=Q)
    assert cert is not None
    C, _ = _laurent_complex(sp.X, sp.xi, spec=Q)
    for row in C.diffs[1]:
        acc = Poly.zero(Q)
        for j, p in row.items():
            acc = acc + p * cert.lift[j]
        assert acc.is_zero()
    # certified classes are survivors: at tau = 1 the lift gives back c
    assert [p(Fraction(1)) for p in cert.lift] == cert.vector


def test_support_criterion_input_checks():
    sp = build("surface2")
    with pytest.raises(ValueError, match="degree-1"):
        support_criterion(sp.cut, sp.cocycles["v1"], 2, spec=Q)
    bad = [Fraction(1)] * sp.X.count(1)
    with pytest.raises(ValueError, match="cocycle"):
        support_criterion(sp.cut, bad, 1, spec=Q)
