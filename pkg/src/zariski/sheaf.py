"""Sections of the structure sheaf on basic opens, restriction, and gluing.

A section over the basic open of ``f`` is an element of the localization
A_f; restriction to a smaller basic open D(g) <= D(f) is the canonical map
A_f -> A_g, computed from an explicit identity g**k = c*f in A.  A cover is
a generator list with a unit-ideal certificate; ``glue`` reassembles a
global element from a compatible family of local sections and verifies the
result, realizing the equalizer property of the structure sheaf
constructively.  ``invertibility_support_basic`` computes, inside the part
of the lattice below D(f), the largest open on which a section becomes
invertible.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .algebra import (
    AlgebraElement,
    AlgebraMorphism,
    ExtractionCapError,
    Localization,
    PresentedAlgebra,
    extract_fraction,
    make_localization,
)
from .lattice import ZarElement, basic_open, eq, leq


class BasicOpenSection:
    """An element of A_f, tagged with its localization presentation."""

    __slots__ = ("loc", "value")

    def __init__(self, loc: Localization, value: AlgebraElement):
        if value.algebra != loc.algebra:
            raise ValueError("value does not live in the localization")
        object.__setattr__(self, "loc", loc)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("BasicOpenSection is immutable")

    @property
    def base(self) -> PresentedAlgebra:
        return self.loc.base

    @property
    def denominator(self) -> AlgebraElement:
        return self.loc.denominator

    def _coerce(self, other) -> "BasicOpenSection":
        if isinstance(other, BasicOpenSection):
            if other.loc != self.loc:
                raise ValueError("sections over different basic opens")
            return other
        if isinstance(other, int):
            return BasicOpenSection(self.loc, self.loc.algebra.element(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return BasicOpenSection(self.loc, self.value + other.value)

    __radd__ = __add__

    def __neg__(self):
        return BasicOpenSection(self.loc, -self.value)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return BasicOpenSection(self.loc, self.value - other.value)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return BasicOpenSection(self.loc, self.value * other.value)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return BasicOpenSection(self.loc, self.value ** n)

    def __eq__(self, other):
        if not isinstance(other, BasicOpenSection):
            return NotImplemented
        return self.loc == other.loc and self.value == other.value

    def __hash__(self):
        return hash((self.loc, self.value))

    def __str__(self):
        return f"{self.value} over D({self.denominator})"

    def __repr__(self):
        return f"<section {self}>"


def section(loc: Localization, numerator: AlgebraElement, power: int = 0) -> BasicOpenSection:
    """The section numerator / f**power over D(f)."""
    return BasicOpenSection(loc, loc.fraction(loc.base.element(numerator), power))


def global_section(loc: Localization, a: AlgebraElement) -> BasicOpenSection:
    """The restriction a/1 of a global element to D(f)."""
    return BasicOpenSection(loc, loc.to_loc(loc.base.element(a)))


def section_equal(s: BasicOpenSection, t: BasicOpenSection) -> bool:
    """Equality of fractions, decided by normal forms in A[y]/(fy-1)."""
    if s.loc != t.loc:
        raise ValueError("sections over different basic opens")
    return s.value == t.value


def denominator_power_identity(
    base: PresentedAlgebra,
    f: AlgebraElement,
    g: AlgebraElement,
    cap: int = 64,
) -> Tuple[int, AlgebraElement]:
    """The least k with g**k = c*f in ``base``, together with the cofactor c.

    Exists exactly when D(g) <= D(f); raises ValueError otherwise.
    """
    gk = base.one
    for k in range(cap + 1):
        cofs = base.ideal_member(gk, [f])
        if cofs is not None:
            return k, cofs[0]
        gk = gk * g
    if not base.radical_member(g, [f]):
        raise ValueError(
            f"D({g}) is not below D({f}); no restriction map exists"
        )
    raise ExtractionCapError(
        f"no power of {g} reached the ideal of {f} within cap {cap}"
    )


def restriction_map(
    loc_f: Localization, loc_g: Localization, cap: int = 64
) -> AlgebraMorphism:
    """The canonical map A_f -> A_g for D(g) <= D(f).

    Sends base variables to themselves and the inverse of f to c * (1/g)**k,
    where g**k = c*f in the base.
    """
    if loc_f.base != loc_g.base:
        raise ValueError("localizations of different algebras")
    base = loc_f.base
    k, c = denominator_power_identity(base, loc_f.denominator, loc_g.denominator, cap)
    images = [loc_g.to_loc(base.var(i)) for i in range(base.nvars)]
    images.append(loc_g.to_loc(c) * loc_g.inverse ** k)
    return AlgebraMorphism(loc_f.algebra, loc_g.algebra, images)


def restrict(
    s: BasicOpenSection, g: AlgebraElement, cap: int = 64
) -> BasicOpenSection:
    """Restrict a section over D(f) to D(g) <= D(f)."""
    base = s.base
    g = base.element(g)
    loc_g = make_localization(base, g)
    phi = restriction_map(s.loc, loc_g, cap)
    return BasicOpenSection(loc_g, phi(s.value))


class CoverData:
    """A basic-open cover of the full spectrum, with its unit certificate.

    Construction fails unless 1 = sum(certificate[i] * pieces[i]) can be
    produced; the stored certificate re-evaluates exactly.
    """

    __slots__ = ("base", "pieces", "certificate")

    def __init__(self, base: PresentedAlgebra, pieces: Sequence[AlgebraElement]):
        pieces = tuple(base.element(p) for p in pieces)
        cert = base.unit_certificate(pieces)
        if cert is None:
            raise ValueError(
                f"D({', '.join(str(p) for p in pieces)}) does not cover: "
                "the pieces do not generate the unit ideal"
            )
        combo = base.zero
        for e, p in zip(cert, pieces):
            combo = combo + e * p
        if combo != base.one:
            raise AssertionError("unit certificate failed to re-evaluate to 1")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "certificate", tuple(cert))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("CoverData is immutable")

    def __len__(self):
        return len(self.pieces)

    def __repr__(self):
        return f"CoverData({', '.join(str(p) for p in self.pieces)})"


class SectionFamily:
    """One section per cover piece, the raw material for gluing."""

    __slots__ = ("cover", "sections")

    def __init__(self, cover: CoverData, sections: Sequence[BasicOpenSection]):
        if len(sections) != len(cover.pieces):
            raise ValueError("need exactly one section per cover piece")
        for s, p in zip(sections, cover.pieces):
            if s.base != cover.base or s.denominator != p:
                raise ValueError(
                    f"section over D({s.denominator}) does not match piece D({p})"
                )
        object.__setattr__(self, "cover", cover)
        object.__setattr__(self, "sections", tuple(sections))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SectionFamily is immutable")


def incompatibility_witness(
    fam: SectionFamily, cap: int = 64
) -> Optional[Tuple[int, int, BasicOpenSection, BasicOpenSection]]:
    """The first (i, j, restricted values) where the family disagrees."""
    pieces = fam.cover.pieces
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            overlap = pieces[i] * pieces[j]
            ri = restrict(fam.sections[i], overlap, cap)
            rj = restrict(fam.sections[j], overlap, cap)
            if not section_equal(ri, rj):
                return (i, j, ri, rj)
    return None


def is_compatible(fam: SectionFamily, cap: int = 64) -> bool:
    return incompatibility_witness(fam, cap) is None


def glue(fam: SectionFamily, cap: int = 64) -> AlgebraElement:
    """The unique global element restricting to the family's sections.

    Clears every section to a shared denominator exponent N, combines with
    the unit-ideal cofactors of the pieces' N-th powers, and verifies all
    restrictions; N grows (within the cap) until verification passes, which
    compatibility guarantees.
    """
    witness = incompatibility_witness(fam, cap)
    if witness is not None:
        i, j, ri, rj = witness
        raise ValueError(
            f"family is not compatible: pieces {i} and {j} restrict to "
            f"{ri.value} vs {rj.value} on the overlap"
        )
    base = fam.cover.base
    pieces = fam.cover.pieces
    extracted = [extract_fraction(s.loc, s.value, cap) for s in fam.sections]
    start = max((k for _, k in extracted), default=0)
    for n in range(start, cap + 1):
        numerators = [r * p ** (n - k) for (r, k), p in zip(extracted, pieces)]
        powered = [p ** n for p in pieces]
        cert = base.unit_certificate(powered)
        if cert is None:
            raise AssertionError(
                "cover pieces' powers failed the unit-ideal test; "
                "CoverData invariant violated"
            )
        candidate = base.zero
        for e, a in zip(cert, numerators):
            candidate = candidate + e * a
        ok = all(
            s.loc.to_loc(candidate) == s.value for s in fam.sections
        )
        if ok:
            return candidate
    raise ExtractionCapError(
        f"gluing did not stabilize within denominator exponent cap {cap}"
    )


def invertibility_support_basic(
    s: BasicOpenSection, cap: int = 64
) -> ZarElement:
    """The largest open below D(f) on which the section is invertible.

    For s = r/f**n this is D(f*r); its defining property — restricting s
    there is invertible, and it dominates every basic open below D(f) on
    which s restricts invertibly — is what the tests check.
    """
    numerator, _ = extract_fraction(s.loc, s.value, cap)
    return basic_open(s.base, [s.denominator * numerator])


def is_invertible(s: BasicOpenSection, cap: int = 64) -> bool:
    """Whether the section is a unit of A_f."""
    numerator, _ = extract_fraction(s.loc, s.value, cap)
    return s.base.radical_member(
        s.denominator, [s.denominator * numerator]
    )
