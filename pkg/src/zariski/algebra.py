"""Finitely presented algebras k[x1..xn]/(p1..pm) and their morphisms.

A ``PresentedAlgebra`` eagerly computes the reduced basis of its relation
ideal; elements are stored as normal forms, so equality is plain comparison.
Ideal and radical membership in the quotient come with explicit cofactor
certificates where consumers need them.  Localizations A_f are presented as
A[y]/(f*y - 1) and carry the canonical map A -> A_f; towers of localizations
and their common refinements support comparing maps that land in different
localizations of the same ring.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .fields import Field, Scalar
from .groebner import (
    GroebnerBasis,
    divide,
    ideal_contains_one,
    unit_ideal_certificate,
)
from .polynomials import Monomial, MonomialOrder, Poly, PolyRing, poly_sort_key


class ExtractionCapError(RuntimeError):
    """Raised when clearing a denominator exceeds the exponent cap."""


def _fresh_names(stems: Sequence[str], used: Iterable[str]) -> List[str]:
    """Deterministic collision-free variants of ``stems`` against ``used``."""
    taken = set(used)
    out = []
    for stem in stems:
        candidate = stem
        counter = 2
        while candidate in taken:
            candidate = f"{stem}{counter}"
            counter += 1
        taken.add(candidate)
        out.append(candidate)
    return out


class PresentedAlgebra:
    """A quotient of a polynomial ring by finitely many relations."""

    __slots__ = ("ring", "relations", "gb", "_member_gbs", "_radical_memo", "_hash")

    def __init__(self, ring: PolyRing, relations: Sequence[Poly] = ()):
        rels = tuple(r for r in relations if not r.is_zero())
        for r in rels:
            if r.ring != ring:
                raise ValueError("relation from a different ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "gb", GroebnerBasis(ring, rels))
        object.__setattr__(self, "_member_gbs", {})
        object.__setattr__(self, "_radical_memo", {})
        object.__setattr__(self, "_hash", hash(("PresentedAlgebra", ring, rels)))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("PresentedAlgebra is immutable")

    @classmethod
    def free(
        cls,
        field: Field,
        names: Sequence[str],
        order: MonomialOrder | None = None,
    ) -> "PresentedAlgebra":
        return cls(PolyRing(field, names, order))

    def __eq__(self, other):
        return (
            isinstance(other, PresentedAlgebra)
            and self.ring == other.ring
            and self.relations == other.relations
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.relations:
            return f"{self.ring!r}"
        rels = ", ".join(str(r) for r in self.relations)
        return f"{self.ring!r}/({rels})"

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def names(self) -> Tuple[str, ...]:
        return self.ring.names

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def with_relations(self, extra: Sequence[Poly]) -> "PresentedAlgebra":
        return PresentedAlgebra(self.ring, self.relations + tuple(extra))

    # -- elements -----------------------------------------------------------
    def normal_form(self, p: Poly) -> Poly:
        return self.gb.normal_form(p)

    def element(self, value: Union[Poly, int, "AlgebraElement"]) -> "AlgebraElement":
        if isinstance(value, AlgebraElement):
            if value.algebra != self:
                raise ValueError("element of a different algebra")
            return value
        if isinstance(value, int):
            value = self.ring.const(self.field.of_int(value))
        if value.ring != self.ring:
            raise ValueError("polynomial from a different ring")
        return AlgebraElement(self, self.normal_form(value))

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self.ring.zero)

    @property
    def one(self) -> "AlgebraElement":
        return self.element(self.ring.one)

    def const(self, c: Scalar) -> "AlgebraElement":
        return self.element(self.ring.const(c))

    def var(self, i: int) -> "AlgebraElement":
        return self.element(self.ring.var(i))

    def var_named(self, name: str) -> "AlgebraElement":
        return self.element(self.ring.var_named(name))

    def gens(self) -> Tuple["AlgebraElement", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def is_trivial(self) -> bool:
        return self.gb.contains_one()

    # -- ideal and radical membership in the quotient ------------------------
    def _member_gb(self, gens: Tuple[Poly, ...]) -> GroebnerBasis:
        gb = self._member_gbs.get(gens)
        if gb is None:
            gb = GroebnerBasis(self.ring, gens + self.relations)
            self._member_gbs[gens] = gb
        return gb

    def ideal_member(
        self, f: "AlgebraElement", gens: Sequence["AlgebraElement"]
    ) -> Optional[List["AlgebraElement"]]:
        """Cofactors ``c`` with ``f == sum(c[i]*gens[i])`` in this algebra."""
        polys = tuple(g.poly for g in gens)
        row = self._member_gb(polys).member(f.poly)
        if row is None:
            return None
        return [self.element(c) for c in row[: len(gens)]]

    def unit_certificate(
        self, gens: Sequence["AlgebraElement"]
    ) -> Optional[List["AlgebraElement"]]:
        """Cofactors ``e`` with ``1 == sum(e[i]*gens[i])``, or None."""
        polys = tuple(g.poly for g in gens) + self.relations
        row = unit_ideal_certificate(polys, self.ring)
        if row is None:
            return None
        return [self.element(c) for c in row[: len(gens)]]

    def radical_member(
        self, f: "AlgebraElement", gens: Sequence["AlgebraElement"]
    ) -> bool:
        """Whether some power of ``f`` lies in the ideal the ``gens`` span."""
        if f.poly.is_zero():
            return True
        key = (f.poly, tuple(sorted((g.poly for g in gens), key=poly_sort_key)))
        hit = self._radical_memo.get(key)
        if hit is not None:
            return hit
        if f.poly.is_constant():
            # a nonzero constant is in the radical iff the ideal is all of A
            result = ideal_contains_one(key[1] + self.relations, self.ring)
            self._radical_memo[key] = result
            return result
        wname = _fresh_names(["w"], self.ring.names)[0]
        ext = self.ring.with_vars([wname])
        w = ext.var(ext.nvars - 1)
        polys = [self.ring.lift(g, ext) for g in key[1]]
        polys.extend(self.ring.lift(r, ext) for r in self.relations)
        polys.append(ext.one - w * self.ring.lift(f.poly, ext))
        result = ideal_contains_one(polys, ext)
        self._radical_memo[key] = result
        return result

    def try_invert(self, c: "AlgebraElement") -> Optional["AlgebraElement"]:
        """The inverse of ``c`` with certificate, or None if not a unit."""
        row = self.unit_certificate([c])
        if row is None:
            return None
        return row[0]

    # -- enumeration (finite algebras over prime fields) ----------------------
    def staircase(self) -> List[Monomial]:
        """Monomials below the basis' leading terms; must be finite."""
        lms = [b.lead_monomial() for b in self.gb.basis]
        bounds = []
        for i in range(self.nvars):
            pure = [
                m[i]
                for m in lms
                if m[i] > 0 and all(e == 0 for j, e in enumerate(m) if j != i)
            ]
            if not pure:
                raise ValueError(
                    f"algebra is not finite over its field: no power of "
                    f"{self.names[i]!r} reduces"
                )
            bounds.append(min(pure))
        out = []
        for m in itertools.product(*(range(b) for b in bounds)):
            if any(all(x >= y for x, y in zip(m, lm)) for lm in lms):
                continue
            out.append(m)
        out.sort(key=self.ring.monomial_key)
        return out

    def enumerate_elements(self) -> List["AlgebraElement"]:
        """All elements, in a deterministic order; finite cases only."""
        if not self.field.is_finite:
            raise ValueError("cannot enumerate an algebra over QQ")
        if self.is_trivial():
            return [self.zero]
        stairs = self.staircase()
        scalars = list(self.field.elements())
        out = []
        for coeffs in itertools.product(scalars, repeat=len(stairs)):
            terms = {m: c for m, c in zip(stairs, coeffs) if c}
            out.append(AlgebraElement(self, Poly(self.ring, terms)))
        return out


class AlgebraElement:
    """An element of a presented algebra, stored as its normal form."""

    __slots__ = ("algebra", "poly", "_hash")

    def __init__(self, algebra: PresentedAlgebra, poly: Poly):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("AlgebraElement is immutable")

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.algebra != self.algebra:
                raise ValueError("elements of different algebras")
            return other
        if isinstance(other, int):
            return self.algebra.const(self.algebra.field.of_int(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.element(self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.poly)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.element(self.poly - other.poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.element(self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of an algebra element")
        result = self.algebra.one
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.const(self.algebra.field.of_int(other))
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and self.poly == other.poly

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.algebra, self.poly))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"<{self.poly} in {self.algebra!r}>"


class AlgebraMorphism:
    """An algebra map determined by where the source variables go."""

    __slots__ = ("source", "target", "images", "_hash")

    def __init__(
        self,
        source: PresentedAlgebra,
        target: PresentedAlgebra,
        images: Sequence[AlgebraElement],
    ):
        if len(images) != source.nvars:
            raise ValueError("need exactly one image per source variable")
        if source.field != target.field:
            raise ValueError("field mismatch")
        images = tuple(target.element(im) for im in images)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("AlgebraMorphism is immutable")

    @classmethod
    def identity(cls, algebra: PresentedAlgebra) -> "AlgebraMorphism":
        return cls(algebra, algebra, algebra.gens())

    def __call__(self, elt: AlgebraElement) -> AlgebraElement:
        if elt.algebra != self.source:
            raise ValueError("argument is not an element of the source")
        image_polys = [im.poly for im in self.images]
        return self.target.element(
            elt.poly.substitute(image_polys, self.target.ring)
        )

    def apply_poly(self, p: Poly) -> AlgebraElement:
        return self(self.source.element(p))

    def _relation_image(self, r: Poly) -> AlgebraElement:
        # substitute into the raw relation polynomial: normalizing it in the
        # source first would fold every defining relation to zero and make
        # the check vacuous
        image_polys = [im.poly for im in self.images]
        return self.target.element(r.substitute(image_polys, self.target.ring))

    def is_valid(self) -> bool:
        """Whether every relation of the source maps to zero."""
        return all(
            self._relation_image(r).is_zero() for r in self.source.relations
        )

    def check_valid(self) -> "AlgebraMorphism":
        for r in self.source.relations:
            img = self._relation_image(r)
            if not img.is_zero():
                raise ValueError(
                    f"not an algebra morphism: relation {r} maps to {img}"
                )
        return self

    def then(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        """The composite ``self`` followed by ``other``."""
        if other.source != self.target:
            raise ValueError("morphisms do not compose")
        return AlgebraMorphism(
            self.source, other.target, [other(im) for im in self.images]
        )

    def __eq__(self, other):
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.source, self.target, self.images))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        arrows = ", ".join(
            f"{nm} -> {im}" for nm, im in zip(self.source.names, self.images)
        )
        return f"AlgebraMorphism({arrows or 'constants only'})"


def morphism(
    source: PresentedAlgebra,
    target: PresentedAlgebra,
    images: Sequence[Union[AlgebraElement, Poly, int]],
    validate: bool = True,
) -> AlgebraMorphism:
    phi = AlgebraMorphism(source, target, [target.element(im) for im in images])
    if validate:
        phi.check_valid()
    return phi


def check_morphism(phi: AlgebraMorphism) -> bool:
    return phi.is_valid()


def compose(phi: AlgebraMorphism, psi: AlgebraMorphism) -> AlgebraMorphism:
    """Apply ``phi`` first, then ``psi``."""
    return phi.then(psi)


def morphism_equal(phi: AlgebraMorphism, psi: AlgebraMorphism) -> bool:
    return phi == psi


def enumerate_homs(
    source: PresentedAlgebra, target: PresentedAlgebra
) -> List[AlgebraMorphism]:
    """All algebra maps source -> target, by exhaustive assignment search."""
    if source.field != target.field:
        raise ValueError("field mismatch")
    candidates = target.enumerate_elements()
    out = []
    for images in itertools.product(candidates, repeat=source.nvars):
        image_polys = [im.poly for im in images]
        ok = all(
            target.element(r.substitute(image_polys, target.ring)).is_zero()
            for r in source.relations
        )
        if ok:
            out.append(AlgebraMorphism(source, target, images))
    return out


# -- localization -------------------------------------------------------------


class Localization:
    """The presentation A_f = A[y]/(f*y - 1) plus the canonical map into it."""

    __slots__ = ("base", "denominator", "algebra", "to_loc", "inv_index", "inv_name")

    def __init__(self, base: PresentedAlgebra, denominator: AlgebraElement):
        if denominator.algebra != base:
            raise ValueError("denominator is not an element of the base")
        inv_name = _fresh_names(["y"], base.ring.names)[0]
        ring = base.ring.with_vars([inv_name])
        rels = [base.ring.lift(r, ring) for r in base.relations]
        f_lift = base.ring.lift(denominator.poly, ring)
        rels.append(f_lift * ring.var(ring.nvars - 1) - ring.one)
        algebra = PresentedAlgebra(ring, rels)
        to_loc = AlgebraMorphism(
            base, algebra, [algebra.var(i) for i in range(base.nvars)]
        )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "denominator", denominator)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "to_loc", to_loc)
        object.__setattr__(self, "inv_index", ring.nvars - 1)
        object.__setattr__(self, "inv_name", inv_name)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Localization is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Localization)
            and self.base == other.base
            and self.denominator == other.denominator
        )

    def __hash__(self):
        return hash(("Localization", self.base, self.denominator))

    def __repr__(self):
        return f"Localization({self.base!r} at {self.denominator})"

    @property
    def inverse(self) -> AlgebraElement:
        return self.algebra.var(self.inv_index)

    def fraction(self, numerator: AlgebraElement, power: int = 0) -> AlgebraElement:
        """The element numerator / denominator**power of the localization."""
        return self.to_loc(numerator) * self.inverse ** power


_LOC_CACHE: Dict[Tuple[PresentedAlgebra, AlgebraElement], Localization] = {}


def make_localization(base: PresentedAlgebra, f: AlgebraElement) -> Localization:
    f = base.element(f)
    loc = _LOC_CACHE.get((base, f))
    if loc is None:
        loc = Localization(base, f)
        _LOC_CACHE[(base, f)] = loc
    return loc


def extract_fraction(
    loc: Localization, s: AlgebraElement, cap: int = 64
) -> Tuple[AlgebraElement, int]:
    """Write ``s = r / f**k`` with ``r`` from the base ring; least such k.

    Multiplies by the denominator until the normal form no longer involves
    the inverse variable.  The cap guards against defects; compatibility of
    the inputs guarantees termination well below it in practice.
    """
    if s.algebra != loc.algebra:
        raise ValueError("section does not live in this localization")
    f_img = loc.to_loc(loc.denominator)
    candidate = s
    for k in range(cap + 1):
        if not candidate.poly.involves(loc.inv_index):
            numerator = loc.base.element(
                loc.algebra.ring.project(candidate.poly, loc.base.ring)
            )
            return numerator, k
        candidate = candidate * f_img
    raise ExtractionCapError(
        f"could not clear {loc.inv_name!r} from {s} within {cap} powers of "
        f"{loc.denominator}"
    )


def extend_to_localization(
    loc: Localization,
    alpha: AlgebraMorphism,
    f_inverse: AlgebraElement,
    validate: bool = True,
) -> AlgebraMorphism:
    """Extend ``alpha : base -> C`` to ``A_f -> C`` sending 1/f to f_inverse."""
    if alpha.source != loc.base:
        raise ValueError("morphism does not start at the localization's base")
    images = list(alpha.images) + [f_inverse]
    phi = AlgebraMorphism(loc.algebra, alpha.target, images)
    if validate:
        phi.check_valid()
    return phi


class LocTower:
    """A chain of localizations of one base at images of base elements."""

    __slots__ = ("base", "denominators", "stages")

    def __init__(
        self,
        base: PresentedAlgebra,
        denominators: Tuple[AlgebraElement, ...] = (),
        stages: Tuple[Localization, ...] = (),
    ):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "denominators", denominators)
        object.__setattr__(self, "stages", stages)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("LocTower is immutable")

    @property
    def top(self) -> PresentedAlgebra:
        return self.stages[-1].algebra if self.stages else self.base

    @property
    def from_base(self) -> AlgebraMorphism:
        phi = AlgebraMorphism.identity(self.base)
        for stage in self.stages:
            phi = phi.then(stage.to_loc)
        return phi

    def extend(self, d: AlgebraElement) -> "LocTower":
        if d.algebra != self.base:
            raise ValueError("denominator must be a base element")
        stage = Localization(self.top, self.from_base(d))
        return LocTower(
            self.base, self.denominators + (d,), self.stages + (stage,)
        )

    def inverse_in_top(self, i: int) -> AlgebraElement:
        """The inverse of the i-th denominator's image, in the top algebra."""
        return self.top.var_named(self.stages[i].inv_name)


def tower(base: PresentedAlgebra) -> LocTower:
    return LocTower(base)


def common_refinement(
    t1: LocTower, t2: LocTower
) -> Tuple[LocTower, AlgebraMorphism, AlgebraMorphism]:
    """A tower refining both, with the two maps from their tops into it."""
    if t1.base != t2.base:
        raise ValueError("towers over different bases")
    t = t1
    for d in t2.denominators:
        t = t.extend(d)
    top = t.top
    m1 = AlgebraMorphism(
        t1.top, top, [top.var_named(nm) for nm in t1.top.ring.names]
    ).check_valid()
    images2 = [top.var_named(nm) for nm in t2.base.ring.names]
    images2 += [
        t.inverse_in_top(len(t1.denominators) + j)
        for j in range(len(t2.denominators))
    ]
    m2 = AlgebraMorphism(t2.top, top, images2).check_valid()
    return t, m1, m2


# -- tensor products ------------------------------------------------------------


def make_tensor(
    A: PresentedAlgebra, B: PresentedAlgebra
) -> Tuple[PresentedAlgebra, AlgebraMorphism, AlgebraMorphism]:
    """Coproduct A (x) B over the field, with the two inclusion maps."""
    if A.field != B.field:
        raise ValueError("field mismatch")
    b_names = _fresh_names(B.names, A.names)
    ring = PolyRing(A.field, A.names + tuple(b_names))
    rels = [A.ring.lift(r, ring) for r in A.relations]
    b_images = [ring.var(A.nvars + j) for j in range(B.nvars)]
    rels.extend(r.substitute(b_images, ring) for r in B.relations)
    T = PresentedAlgebra(ring, rels)
    inA = AlgebraMorphism(A, T, [T.var(i) for i in range(A.nvars)])
    inB = AlgebraMorphism(B, T, [T.element(p) for p in b_images])
    return T, inA, inB


def tensor_over_base(
    phi: AlgebraMorphism, psi: AlgebraMorphism
) -> Tuple[PresentedAlgebra, AlgebraMorphism, AlgebraMorphism]:
    """Pushout of B <- A -> C: tensor with the images of A identified."""
    if phi.source != psi.source:
        raise ValueError("pushout legs must share their source")
    T0, inB, inC = make_tensor(phi.target, psi.target)
    extra = []
    for i in range(phi.source.nvars):
        diff = inB(phi.images[i]) - inC(psi.images[i])
        if not diff.is_zero():
            extra.append(diff.poly)
    T = T0.with_relations(extra)
    inB2 = AlgebraMorphism(phi.target, T, [T.element(im.poly) for im in inB.images])
    inC2 = AlgebraMorphism(psi.target, T, [T.element(im.poly) for im in inC.images])
    return T, inB2, inC2
