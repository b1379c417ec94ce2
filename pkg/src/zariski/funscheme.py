"""Schemes as functors of points on finitely presented algebras.

A functorial scheme is either representable (the hom functor of one
algebra) or glued from chart algebras along the same patch data that
presents a lattice scheme.  Its points over a finite test algebra B are
computed exactly: B splits along its atomic idempotents into connected
factors, and over a connected reduced factor every point lands entirely in
one chart, canonically the lowest one.  Compact opens of the functor are
compact opens of the underlying chart data and evaluate pointwise to basic
opens of B; covers, locality (the equalizer condition along a cover of B),
morphism gluing, and the realization of a compact open as a scheme of its
own are all decidable at this scale.
"""

from __future__ import annotations

from itertools import product as _iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    AlgebraElement,
    AlgebraMorphism,
    PresentedAlgebra,
    enumerate_homs,
    extend_to_localization,
    make_localization,
)
from .lattice import ZarElement, basic_open, bottom, eq, induced_hom, join, leq, top
from .latscheme import (
    CompactOpen,
    GluingData,
    LatticeScheme,
    SchemeMorphism,
    SectionRing,
    bottom_open,
    extend_over,
    global_sections,
    mk_affine,
    restrict_scheme,
    top_open,
)
from .polynomials import PolyRing, poly_sort_key


class NonReducedAlgebraError(ValueError):
    """Point enumeration over a glued scheme needs a reduced test algebra."""


class FunctorialScheme:
    """A scheme presented as a functor of points.

    ``kind`` is "representable" (one algebra, the hom functor) or "glued"
    (chart-and-patch data).  ``lat`` is the chart presentation both kinds
    carry; compact opens of the functor live over it.
    """

    __slots__ = ("kind", "algebra", "lat")

    def __init__(
        self,
        kind: str,
        algebra: Optional[PresentedAlgebra] = None,
        data: Optional[GluingData] = None,
        lat: Optional[LatticeScheme] = None,
    ):
        if kind == "representable":
            if algebra is None:
                raise ValueError("representable schemes need their algebra")
            lat = lat if lat is not None else mk_affine(algebra)
            if lat.ncharts != 1 or lat.charts[0] != algebra:
                raise ValueError("chart presentation does not match the algebra")
        elif kind == "glued":
            if data is None:
                raise ValueError("glued schemes need gluing data")
            lat = lat if lat is not None else LatticeScheme(data)
            algebra = None
        else:
            raise ValueError("kind must be 'representable' or 'glued'")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "lat", lat)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("FunctorialScheme is immutable")

    @property
    def charts(self) -> Tuple[PresentedAlgebra, ...]:
        return self.lat.charts

    def __repr__(self):
        if self.kind == "representable":
            return f"Sp({self.algebra!r})"
        return f"FunctorialScheme(glued, {self.lat.ncharts} charts)"


def representable(A: PresentedAlgebra) -> FunctorialScheme:
    return FunctorialScheme("representable", algebra=A)


def glued(data: GluingData) -> FunctorialScheme:
    return FunctorialScheme("glued", data=data)


def functorial(X: LatticeScheme) -> FunctorialScheme:
    """Wrap a chart presentation as a functor of points."""
    if X.ncharts == 1 and not X.data.patches:
        return FunctorialScheme("representable", algebra=X.charts[0], lat=X)
    return FunctorialScheme("glued", data=X.data, lat=X)


class SchemePoint:
    """A point of a functorial scheme over a test algebra B.

    ``factors`` lists (idempotent e, chart index, morphism chart -> B/(1-e))
    over the atomic idempotent decomposition of B; each factor's chart index
    is the lowest chart containing the factor's image, which makes the
    representation canonical.  Over the trivial algebra the factor list is
    empty.
    """

    __slots__ = ("scheme", "test_algebra", "factors", "_hash")

    def __init__(
        self,
        scheme: FunctorialScheme,
        test_algebra: PresentedAlgebra,
        factors: Sequence[Tuple[AlgebraElement, int, AlgebraMorphism]],
    ):
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "test_algebra", test_algebra)
        object.__setattr__(self, "factors", tuple(factors))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SchemePoint is immutable")

    def __eq__(self, other):
        if not isinstance(other, SchemePoint):
            return NotImplemented
        return (
            self.scheme is other.scheme
            and self.test_algebra == other.test_algebra
            and self.factors == other.factors
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((id(self.scheme), self.test_algebra, self.factors))
            object.__setattr__(self, "_hash", h)
        return h

    def as_hom(self) -> AlgebraMorphism:
        """The underlying morphism, for a representable scheme's point.

        Reassembles the factor morphisms through the idempotent
        decomposition: a(x) is the sum over factors of e * phi_e(x).
        """
        if self.scheme.kind != "representable":
            raise ValueError("not a representable point")
        A = self.scheme.algebra
        B = self.test_algebra
        if len(self.factors) == 1 and self.factors[0][0] == B.one:
            return self.factors[0][2]
        images = []
        for i in range(A.nvars):
            total = B.zero
            for (e, _, phi) in self.factors:
                total = total + B.element(phi.images[i].poly) * e
            images.append(total)
        return AlgebraMorphism(A, B, images)

    def __repr__(self):
        parts = []
        for (e, i, phi) in self.factors:
            imgs = ", ".join(str(v) for v in phi.images)
            parts.append(f"e={e}: chart {i}, ({imgs})")
        return f"<point {'; '.join(parts) or 'trivial'}>"


# -- reducedness and idempotents ------------------------------------------------


_REDUCED_CACHE: Dict[PresentedAlgebra, bool] = {}


def is_reduced(B: PresentedAlgebra) -> bool:
    """No nonzero nilpotents, checked by enumeration."""
    cached = _REDUCED_CACHE.get(B)
    if cached is not None:
        return cached
    out = True
    for b in B.enumerate_elements():
        if not b.is_zero() and B.radical_member(b, []):
            out = False
            break
    _REDUCED_CACHE[B] = out
    return out


def idempotent_atoms(B: PresentedAlgebra) -> List[AlgebraElement]:
    """The minimal nonzero idempotents, sorted canonically."""
    idems = [
        b for b in B.enumerate_elements() if b * b == b and not b.is_zero()
    ]
    atoms = []
    for e in idems:
        minimal = True
        for f in idems:
            if f != e and f * e == f:
                minimal = False
                break
        if minimal:
            atoms.append(e)
    atoms.sort(key=lambda e: poly_sort_key(e.poly))
    total = B.zero
    for e in atoms:
        total = total + e
    if total != B.one:
        raise NonReducedAlgebraError(
            f"atomic idempotents of {B!r} do not decompose the unit"
        )
    return atoms


def connected_factor(B: PresentedAlgebra, e: AlgebraElement) -> PresentedAlgebra:
    """The factor B/(1 - e) of the idempotent decomposition."""
    return B.with_relations([(B.one - e).poly])


# -- point enumeration -----------------------------------------------------------


def _chart_candidates(
    X: FunctorialScheme, j: int, Bt: PresentedAlgebra
) -> List[AlgebraMorphism]:
    """Homs from chart j that do not reduce to a lower chart."""
    out = []
    t_b = top(Bt)
    for beta in enumerate_homs(X.charts[j], Bt):
        reducible = False
        for i in range(j):
            u_ji = X.lat.data.overlap(j, i)
            if eq(induced_hom(beta, u_ji), t_b):
                reducible = True
                break
        if not reducible:
            out.append(beta)
    return out


def _split_along_atoms(
    B: PresentedAlgebra, phi: AlgebraMorphism
) -> List[Tuple[AlgebraElement, int, AlgebraMorphism]]:
    """Canonical factor list of a hom into B: one factor per atom of B."""
    atoms = idempotent_atoms(B)
    if atoms == [B.one]:
        return [(B.one, 0, phi)]
    factors = []
    for e in atoms:
        Bt = connected_factor(B, e)
        proj = AlgebraMorphism(B, Bt, [Bt.var(i) for i in range(B.nvars)])
        factors.append((e, 0, phi.then(proj)))
    return factors


def eval_points(X: FunctorialScheme, B: PresentedAlgebra) -> List[SchemePoint]:
    """All points of X over the test algebra B, canonically represented.

    Representable schemes evaluate to their hom sets exactly, split along
    the atomic idempotents of B.  Glued schemes need B finite and reduced:
    B splits along atomic idempotents into fields, and each factor's
    points are the chart homs kept at their lowest chart.
    """
    if B.is_trivial():
        return [SchemePoint(X, B, ())]
    if X.kind == "representable":
        return [
            SchemePoint(X, B, _split_along_atoms(B, phi))
            for phi in enumerate_homs(X.algebra, B)
        ]
    if not is_reduced(B):
        raise NonReducedAlgebraError(
            f"cannot enumerate glued-scheme points over the non-reduced {B!r}"
        )
    atoms = idempotent_atoms(B)
    per_atom: List[List[Tuple[AlgebraElement, int, AlgebraMorphism]]] = []
    for e in atoms:
        Bt = connected_factor(B, e)
        options = []
        for j in range(X.lat.ncharts):
            for beta in _chart_candidates(X, j, Bt):
                options.append((e, j, beta))
        per_atom.append(options)
    points = []
    for combo in _iproduct(*per_atom):
        points.append(SchemePoint(X, B, list(combo)))
    return points


def open_at_point(U: CompactOpen, p: SchemePoint) -> ZarElement:
    """Evaluate a compact open at a point: a basic open of B."""
    X = p.scheme
    if U.owner is not X.lat:
        raise ValueError("open does not live on the point's scheme")
    B = p.test_algebra
    gens: List[AlgebraElement] = []
    for (e, j, phi) in p.factors:
        w = U.components[j]
        for g in w.generators:
            image = phi(g)
            gens.append(B.element(image.poly) * e)
    return basic_open(B, gens)


def membership(U: CompactOpen, p: SchemePoint) -> bool:
    """Whether the point lies in the compact open."""
    return eq(open_at_point(U, p), top(p.test_algebra))


def is_cover(X: FunctorialScheme, opens: Sequence[CompactOpen]) -> bool:
    total = bottom_open(X.lat)
    for u in opens:
        total = total.join(u)
    return total.eq(top_open(X.lat))


# -- functoriality ----------------------------------------------------------------


def _reduce_factor(
    X: FunctorialScheme, chart: int, hom: AlgebraMorphism
) -> Tuple[int, AlgebraMorphism]:
    """Carry a chart hom to the lowest chart containing its point."""
    Bt = hom.target
    t_b = top(Bt)
    j = chart
    while True:
        moved = False
        for i in range(j):
            u_ji = X.lat.data.overlap(j, i)
            if not eq(induced_hom(hom, u_ji), t_b):
                continue
            for Q in X.lat.data.patches_for(j, i):
                inv = Bt.try_invert(hom(Q.f))
                if inv is None:
                    continue
                hom_ext = extend_to_localization(Q.loc_f, hom, inv, validate=False)
                hom = Q.loc_g.to_loc.then(Q.bwd).then(hom_ext)
                j = i
                moved = True
                break
            if moved:
                break
            raise NonReducedAlgebraError(
                "factor algebra is not connected: no single patch carries "
                "the point"
            )
        if not moved:
            return j, hom


def map_point(
    X: FunctorialScheme, p: SchemePoint, chi: AlgebraMorphism
) -> SchemePoint:
    """Push a point of X(B) forward along chi : B -> B2."""
    B2 = chi.target
    if p.test_algebra != chi.source:
        raise ValueError("point does not live over the morphism's source")
    if B2.is_trivial():
        return SchemePoint(X, B2, ())
    if X.kind == "representable":
        phi = p.as_hom()
        return SchemePoint(X, B2, _split_along_atoms(B2, phi.then(chi)))
    if not is_reduced(B2):
        raise NonReducedAlgebraError(
            f"cannot push points into the non-reduced {B2!r}"
        )
    atoms2 = idempotent_atoms(B2)
    factors2 = []
    for e2 in atoms2:
        B2e = connected_factor(B2, e2)
        to_factor = AlgebraMorphism(B2, B2e, [B2e.var(i) for i in range(B2.nvars)])
        hit = None
        for (e, j, phi) in p.factors:
            if to_factor(chi(p.test_algebra.element(e.poly))) == B2e.one:
                hit = (j, phi)
                break
        if hit is None:
            raise NonReducedAlgebraError(
                "no factor of the source decomposition covers an atom of "
                "the target"
            )
        j, phi = hit
        images = [
            to_factor(chi(p.test_algebra.element(v.poly)))
            for v in phi.images
        ]
        psi = AlgebraMorphism(X.charts[j], B2e, images)
        j2, psi2 = _reduce_factor(X, j, psi)
        factors2.append((e2, j2, psi2))
    return SchemePoint(X, B2, factors2)


# -- the finite lattice of a test algebra -------------------------------------------


def zar_points(B: PresentedAlgebra) -> List[ZarElement]:
    """Representatives of all basic-open classes of a finite algebra."""
    reps: List[ZarElement] = [bottom(B)]
    for b in B.enumerate_elements():
        u = basic_open(B, [b])
        if not any(eq(u, r) for r in reps):
            reps.append(u)
    changed = True
    while changed:
        changed = False
        for a in list(reps):
            for b in list(reps):
                u = join(a, b)
                if not any(eq(u, r) for r in reps):
                    reps.append(u)
                    changed = True
    return reps


# -- realization of a compact open ---------------------------------------------------


_RESTRICT_CACHE: Dict[CompactOpen, Tuple[LatticeScheme, SchemeMorphism]] = {}
_REALIZATION_CACHE: Dict[CompactOpen, "FunctorialScheme"] = {}


def _restrict_pair(U: CompactOpen) -> Tuple[LatticeScheme, SchemeMorphism]:
    pair = _RESTRICT_CACHE.get(U)
    if pair is None:
        pair = restrict_scheme(U.owner, U)
        _RESTRICT_CACHE[U] = pair
    return pair


def realization(X: FunctorialScheme, U: CompactOpen) -> FunctorialScheme:
    """The compact open U as a scheme of its own.

    A single basic piece of a representable scheme realizes to the
    representable scheme of the localization; in general the result is
    glued from one localized chart per basic piece.  Memoized so points
    of the same realized open always compare equal.
    """
    if U.owner is not X.lat:
        raise ValueError("open does not live on the scheme")
    got = _REALIZATION_CACHE.get(U)
    if got is not None:
        return got
    Xu, _ = _restrict_pair(U)
    if Xu.ncharts == 1 and not Xu.data.patches:
        out = FunctorialScheme("representable", algebra=Xu.charts[0], lat=Xu)
    else:
        out = FunctorialScheme("glued", data=Xu.data, lat=Xu)
    _REALIZATION_CACHE[U] = out
    return out


def open_to_realization(
    X: FunctorialScheme, U: CompactOpen, V: CompactOpen
) -> CompactOpen:
    """Carry a compact open V <= U of X to a compact open of the realization."""
    if not V.leq(U):
        raise ValueError("the open is not below the realized one")
    Xu, inc = _restrict_pair(U)
    return inc.pullback(V)


def open_from_realization(
    X: FunctorialScheme, U: CompactOpen, W: CompactOpen, cap: int = 64
) -> CompactOpen:
    """Carry a compact open of the realization back into X (below U)."""
    from .algebra import extract_fraction

    Xu, _ = _restrict_pair(U)
    if W.owner is not Xu:
        raise ValueError("open does not live on the realization")
    pieces: List[Tuple[int, AlgebraElement]] = []
    for i, w in enumerate(U.components):
        for g in w.generators:
            pieces.append((i, g))
    comps: List[List[AlgebraElement]] = [[] for _ in range(X.lat.ncharts)]
    for idx, (i, g) in enumerate(pieces):
        loc = make_localization(X.lat.charts[i], g)
        for h in W.components[idx].generators:
            num, _ = extract_fraction(loc, h, cap)
            comps[i].append(g * num)
    return CompactOpen(
        X.lat,
        [basic_open(X.lat.charts[i], comps[i]) for i in range(X.lat.ncharts)],
    )


# -- locality along a cover of the test algebra ---------------------------------------


def _loc_restriction_data(
    B: PresentedAlgebra, pieces: Sequence[AlgebraElement]
) -> List[Tuple[PresentedAlgebra, AlgebraMorphism]]:
    out = []
    for f in pieces:
        loc = make_localization(B, f)
        out.append((loc.algebra, loc.to_loc))
    return out


def check_locality(
    X: FunctorialScheme, B: PresentedAlgebra, pieces: Sequence[AlgebraElement]
) -> bool:
    """X(B) is exactly the matching families along the cover {D(f)} of B.

    Checks by enumeration that restriction to the cover pieces is injective
    and that every family agreeing on the pairwise overlaps comes from a
    unique global point.
    """
    if not eq(basic_open(B, list(pieces)), top(B)):
        raise ValueError("the given elements do not cover the test algebra")
    locs = _loc_restriction_data(B, pieces)
    global_points = eval_points(X, B)
    restricted = []
    for p in global_points:
        restricted.append(tuple(map_point(X, p, chi) for (_, chi) in locs))
    if len(set(restricted)) != len(global_points):
        return False
    local_points = [eval_points(X, Bi) for (Bi, _) in locs]
    # pairwise-overlap restriction maps into a shared double localization
    n = len(pieces)
    overlap_maps: Dict[Tuple[int, int], AlgebraMorphism] = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            Bi, chi_i = locs[i]
            loc_ij = make_localization(B, pieces[i] * pieces[j])
            carry = extend_over(
                make_localization(B, pieces[i]), loc_ij.to_loc
            )
            overlap_maps[(i, j)] = carry
    matching = 0
    for family in _iproduct(*local_points):
        good = True
        for i in range(n):
            for j in range(i + 1, n):
                left = map_point(X, family[i], overlap_maps[(i, j)])
                right = map_point(X, family[j], overlap_maps[(j, i)])
                if left != right:
                    good = False
                    break
            if not good:
                break
        if good:
            matching += 1
    return matching == len(global_points)


def glue_morphism(
    X: FunctorialScheme,
    B: PresentedAlgebra,
    pieces: Sequence[AlgebraElement],
    local_points: Sequence[SchemePoint],
) -> SchemePoint:
    """The unique point of X(B) restricting to the given local points.

    Raises with a concrete (i, j, point) witness when two local points
    disagree on their overlap, and reports when no or several global
    points match (neither happens for honest local data).
    """
    if len(local_points) != len(pieces):
        raise ValueError("need one local point per cover piece")
    if not eq(basic_open(B, list(pieces)), top(B)):
        raise ValueError("the given elements do not cover the test algebra")
    locs = _loc_restriction_data(B, pieces)
    n = len(pieces)
    for i in range(n):
        for j in range(i + 1, n):
            loc_ij = make_localization(B, pieces[i] * pieces[j])
            carry_i = extend_over(make_localization(B, pieces[i]), loc_ij.to_loc)
            carry_j = extend_over(make_localization(B, pieces[j]), loc_ij.to_loc)
            left = map_point(X, local_points[i], carry_i)
            right = map_point(X, local_points[j], carry_j)
            if left != right:
                raise ValueError(
                    f"local points {i} and {j} disagree on the overlap: "
                    f"{left!r} vs {right!r}"
                )
    hits = []
    for p in eval_points(X, B):
        if all(
            map_point(X, p, chi) == q
            for (q, (_, chi)) in zip(local_points, locs)
        ):
            hits.append(p)
    if len(hits) != 1:
        raise ValueError(
            f"matching family has {len(hits)} global points; locality "
            "demands exactly one"
        )
    return hits[0]


# -- rings of functions ---------------------------------------------------------------


def ring_of_functions(X: FunctorialScheme):
    """The functions on X: the algebra itself when representable, the
    section ring over the top compact open when glued."""
    if X.kind == "representable":
        return X.algebra
    return global_sections(X.lat)


# -- fixtures ---------------------------------------------------------------------------


def affine_line(field) -> FunctorialScheme:
    return representable(PresentedAlgebra(PolyRing(field, ["x"])))


def affine_plane(field) -> FunctorialScheme:
    return representable(PresentedAlgebra(PolyRing(field, ["x", "y"])))


def multiplicative_group(field) -> FunctorialScheme:
    ring = PolyRing(field, ["x", "y"])
    xy_minus_1 = ring.var(0) * ring.var(1) - ring.one
    return representable(PresentedAlgebra(ring, [xy_minus_1]))
