"""The extensional comparison between the two scheme presentations.

Points of the functor side become validated morphisms of the lattice side
and come back unchanged; distinct points stay extensionally distinct;
compact opens act pointwise; section supports agree with their pointwise
meaning; realizations of compact opens are certified isomorphic to their
gluing data; the whole bundle is wrapped by comparison_check.
"""

import pytest

import oracles as O
from support import product_of_points
from zariski.algebra import (
    AlgebraMorphism,
    PresentedAlgebra,
    enumerate_homs,
    make_localization,
    morphism,
)
from zariski.compare import (
    PointsEvaluator,
    _sample_opens,
    adjunction_flat,
    adjunction_sharp,
    carry_point_in,
    comparison_check,
    functor_of_points,
    morphisms_agree,
    open_of_points,
    point_morphism,
    realization_certificate,
    realization_points_biject,
    realize,
    section_value_at_point,
)
from zariski.fields import GF, QQ
from zariski.funscheme import (
    eval_points,
    functorial,
    map_point,
    membership,
    realization,
)
from zariski.lattice import basic_open, eq, join, meet, top
from zariski.latscheme import (
    CompactOpen,
    GlobalSection,
    embed_basic,
    mk_affine,
    projective_line,
    punctured_plane,
    spec_morphism,
    top_open,
)
from zariski.polynomials import PolyRing


F2 = PresentedAlgebra(PolyRing(GF(2), []))
F3 = PresentedAlgebra(PolyRing(GF(3), []))


@pytest.fixture(scope="module")
def ev_a1():
    A1 = PresentedAlgebra(PolyRing(GF(3), ["x"]))
    return functor_of_points(mk_affine(A1))


@pytest.fixture(scope="module")
def ev_p13():
    return functor_of_points(projective_line(GF(3)))


# -- points become validated morphisms and come back --------------------------------


def test_affine_points_round_trip_through_the_adjunction(ev_a1):
    pts = ev_a1.at(F3)
    assert len(pts) == O.FROZEN_POINT_COUNTS[("affine_line", 3)]
    A1 = ev_a1.fun.algebra
    assert [p.as_hom() for p in pts] == enumerate_homs(A1, F3)
    for p in pts:
        pi = ev_a1.morphism(p)  # validates the locality of the morphism
        assert adjunction_flat(ev_a1.fun, pi) == p


def test_projective_points_round_trip_through_the_adjunction(ev_p13):
    pts = ev_p13.at(F3)
    assert len(pts) == O.FROZEN_POINT_COUNTS[("projective_line", 3)]
    for p in pts:
        pi = ev_p13.morphism(p)
        assert adjunction_flat(ev_p13.fun, pi) == p


def test_the_trivial_test_algebra_has_exactly_one_point(ev_a1):
    TRIV = F3.with_relations([F3.one.poly])
    assert len(ev_a1.at(TRIV)) == 1


def test_distinct_points_carry_extensionally_distinct_morphisms(ev_p13):
    pts = ev_p13.at(F3)
    sharp = [ev_p13.morphism(p) for p in pts]
    opens = _sample_opens(ev_p13.scheme)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            assert not morphisms_agree(sharp[a], sharp[b], opens)


def test_point_morphisms_of_products_round_trip(ev_p13):
    D3 = product_of_points(3, 2)
    pts = ev_p13.at(D3)
    assert len(pts) == O.FROZEN_PRODUCT_COUNTS[("projective_line", 3, 2)]
    for p in pts[:4]:
        pi = ev_p13.morphism(p)
        assert adjunction_flat(ev_p13.fun, pi) == p


# -- compact opens act pointwise ------------------------------------------------------


def test_opens_act_pointwise_preserving_the_lattice(ev_p13):
    X = ev_p13.scheme
    A0, A1 = X.charts
    u_t = embed_basic(X, 0, basic_open(A0, [A0.var(0)]))
    u_inf = embed_basic(X, 1, basic_open(A1, [A1.var(0)]))
    for p in ev_p13.at(F3):
        of = open_of_points
        assert eq(of(u_t.join(u_inf))(p), join(of(u_t)(p), of(u_inf)(p)))
        assert eq(of(u_t.meet(u_inf))(p), meet(of(u_t)(p), of(u_inf)(p)))
        assert eq(of(top_open(X))(p), top(F3))


def test_membership_counts_on_the_projective_line(ev_p13):
    X = ev_p13.scheme
    A0 = X.charts[0]
    u_t = embed_basic(X, 0, basic_open(A0, [A0.var(0)]))
    pts = ev_p13.at(F3)
    assert sum(1 for p in pts if membership(u_t, p)) == 2  # misses 0 and infinity


# -- realizations of compact opens ------------------------------------------------------


def test_realized_points_biject_with_members():
    A2 = PresentedAlgebra(PolyRing(GF(3), ["x", "y"]))
    plane = mk_affine(A2)
    fun_plane = functorial(plane)
    u_punct = CompactOpen(plane, [basic_open(A2, [A2.var(0), A2.var(1)])])
    assert realization_points_biject(fun_plane, u_punct, F3)
    inner = eval_points(realization(fun_plane, u_punct), F3)
    assert len(inner) == O.FROZEN_POINT_COUNTS[("punctured_plane", 3)]
    carried = {carry_point_in(fun_plane, u_punct, rp) for rp in inner}
    assert carried == {
        p for p in eval_points(fun_plane, F3) if membership(u_punct, p)
    }


def test_realization_certificates_hold_for_the_fixtures(ev_a1, ev_p13):
    assert realization_certificate(ev_a1.fun) is None
    assert realization_certificate(ev_p13.fun) is None
    Xu, _, _ = punctured_plane(GF(3))
    assert realization_certificate(functorial(Xu)) is None


# -- sections and supports ----------------------------------------------------------------


def test_section_support_over_the_whole_line(ev_a1):
    rd = realize(ev_a1.fun)
    A1 = ev_a1.fun.algebra
    t_top = top_open(ev_a1.scheme)
    R_top = rd.sections(t_top)
    assert isinstance(R_top, PresentedAlgebra)
    Y_top = realization(ev_a1.fun, t_top)
    C_top = Y_top.lat.charts[0]
    loc_top = make_localization(C_top, C_top.one)
    s_x = GlobalSection(Y_top.lat, top_open(Y_top.lat), [[loc_top.to_loc(C_top.var(0))]])
    supp = rd.support(t_top, s_x)
    assert eq(supp.components[0], basic_open(A1, [A1.var(0)]))


def test_section_support_over_a_smaller_open_multiplies_in(ev_a1):
    rd = realize(ev_a1.fun)
    A1 = ev_a1.fun.algebra
    x = A1.var(0)
    u_shift = embed_basic(ev_a1.scheme, 0, basic_open(A1, [x + A1.one]))
    Y_u = realization(ev_a1.fun, u_shift)
    C_u = Y_u.lat.charts[0]
    loc_u = make_localization(C_u, C_u.one)
    s_xu = GlobalSection(Y_u.lat, top_open(Y_u.lat), [[loc_u.to_loc(C_u.var(0))]])
    supp_u = rd.support(u_shift, s_xu)
    assert eq(supp_u.components[0], basic_open(A1, [(x + A1.one) * x]))
    # pointwise: the support's value at each point is the basic open of the
    # section's value there
    for rp in eval_points(Y_u, F3):
        b = section_value_at_point(s_xu, rp)
        p_amb = carry_point_in(ev_a1.fun, u_shift, rp)
        assert eq(basic_open(F3, [b]), open_of_points(supp_u)(p_amb))


# -- fullness on an independent morphism -----------------------------------------------------


def test_independent_spec_morphisms_land_in_the_image(ev_a1):
    A1 = ev_a1.fun.algebra
    ring_b = PolyRing(GF(3), ["a"])
    B27 = PresentedAlgebra(ring_b, [ring_b.var(0) ** 3 - ring_b.var(0)])
    phi = AlgebraMorphism(A1, B27, [B27.var(0)])
    target = ev_a1.scheme
    pi_ind = spec_morphism(phi, target=target)
    p_back = adjunction_flat(ev_a1.fun, pi_ind)
    assert len(p_back.factors) == 3  # B27 splits into three points
    pi_round = adjunction_sharp(target, p_back)
    assert morphisms_agree(
        pi_round,
        spec_morphism(phi, source=pi_round.source, target=target),
        _sample_opens(target),
    )


# -- the bundled comparison -------------------------------------------------------------------


def test_comparison_check_on_the_projective_line_with_naturality(ev_p13):
    D3 = product_of_points(3, 2)
    diag3 = AlgebraMorphism(F3, D3, [])
    pr0 = AlgebraMorphism(D3, F3, [F3.zero])
    pr1 = AlgebraMorphism(D3, F3, [F3.one])
    ok, report = comparison_check(
        ev_p13.scheme.data,
        [F3, D3],
        morphisms=[diag3, pr0, pr1],
        expected_counts=[
            O.FROZEN_POINT_COUNTS[("projective_line", 3)],
            O.FROZEN_PRODUCT_COUNTS[("projective_line", 3, 2)],
        ],
    )
    assert ok, report
    assert report["natural"]
    assert report["realization"] == "ok"
    assert report["counts"] == [4, 16]
    for entry in report["per_algebra"]:
        assert entry["morphisms_valid"]
        assert entry["roundtrip"]
        assert entry["distinct"]


def test_comparison_check_on_the_punctured_plane():
    Xu, _, _ = punctured_plane(GF(3))
    ok, report = comparison_check(
        Xu.data,
        [F3],
        expected_counts=[O.FROZEN_POINT_COUNTS[("punctured_plane", 3)]],
    )
    assert ok, report


def test_comparison_check_flags_wrong_expectations(ev_p13):
    ok, report = comparison_check(ev_p13.scheme.data, [F3], expected_counts=[5])
    assert not ok
    assert report["counts"] == [4]
    assert report["expected_counts"] == [5]
