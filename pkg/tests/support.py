"""Shared helpers for the test suite: small random objects, common algebras.

Randomness is always driven by a caller-supplied ``random.Random`` so every
test run is reproducible from its seed.
"""

from zariski.algebra import PresentedAlgebra
from zariski.fields import GF, QQ
from zariski.polynomials import MonomialOrder, PolyRing


def qq_x() -> PresentedAlgebra:
    return PresentedAlgebra.free(QQ, ["x"])


def qq_xy() -> PresentedAlgebra:
    return PresentedAlgebra.free(QQ, ["x", "y"])


def gf5_circle() -> PresentedAlgebra:
    """GF(5)[x,y] / (x^2 + y^2 - 1)."""
    ring = PolyRing(GF(5), ["x", "y"])
    x, y = ring.gens()
    return PresentedAlgebra(ring, [x * x + y * y - ring.one])


def gf5_hyperbola() -> PresentedAlgebra:
    """GF(5)[x,y] / (x*y - 1)."""
    ring = PolyRing(GF(5), ["x", "y"])
    x, y = ring.gens()
    return PresentedAlgebra(ring, [x * y - ring.one])


def qq_triple_point() -> PresentedAlgebra:
    """QQ[x] / (x^3 - x)."""
    ring = PolyRing(QQ, ["x"])
    (x,) = ring.gens()
    return PresentedAlgebra(ring, [x**3 - x])


def gf3_split() -> PresentedAlgebra:
    """GF(3)[e] / (e^2 - e): two disjoint points, idempotent coordinates."""
    ring = PolyRing(GF(3), ["e"])
    (e,) = ring.gens()
    return PresentedAlgebra(ring, [e * e - e])


def product_of_points(p: int, k: int) -> PresentedAlgebra:
    """GF(p) x ... x GF(p) (k factors) presented with orthogonal idempotents.

    Variables e1..e_{k-1} with relations ei^2 = ei, ei*ej = 0; the last
    idempotent is 1 - e1 - ... - e_{k-1}.
    """
    if k == 1:
        return PresentedAlgebra.free(GF(p), [])
    names = [f"e{i}" for i in range(1, k)]
    ring = PolyRing(GF(p), names)
    gens = ring.gens()
    rels = [e * e - e for e in gens]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            rels.append(gens[i] * gens[j])
    return PresentedAlgebra(ring, rels)


def random_poly(rng, ring, max_degree=2, max_terms=3, coeff_bound=3):
    """A random polynomial: up to ``max_terms`` monomials of total degree
    <= ``max_degree`` with integer coefficients in [-coeff_bound, coeff_bound].
    """
    p = ring.zero
    for _ in range(rng.randint(1, max_terms)):
        mono = ring.one
        for _ in range(rng.randint(0, max_degree)):
            mono = mono * ring.var(rng.randrange(ring.nvars))
        p = p + mono.scale(ring.field.of_int(rng.randint(-coeff_bound, coeff_bound)))
    return p


def random_element(rng, algebra, max_degree=2, max_terms=3, coeff_bound=3):
    return algebra.element(
        random_poly(rng, algebra.ring, max_degree, max_terms, coeff_bound)
    )


def random_nonzero_element(rng, algebra, max_degree=2, max_terms=3, coeff_bound=3):
    while True:
        a = random_element(rng, algebra, max_degree, max_terms, coeff_bound)
        if not a.is_zero():
            return a


def random_open(rng, algebra, max_gens=3, max_degree=2, max_terms=3):
    from zariski.lattice import basic_open

    gens = [
        random_poly(rng, algebra.ring, max_degree, max_terms)
        for _ in range(rng.randint(0, max_gens))
    ]
    return basic_open(algebra, [algebra.element(g) for g in gens])
