"""Sparse multivariate polynomials over an exact field.

A monomial is a tuple of exponents, one per ring variable; a ``Poly`` is an
immutable sparse map from monomials to nonzero coefficients, tagged with its
``PolyRing``.  Monomial orders (graded reverse lexicographic by default,
lexicographic on request, both with an optional variable priority
permutation) live in ``MonomialOrder`` and drive leading-term selection for
the division and basis-completion algorithms built on top.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, Sequence, Tuple

from .fields import Field, Scalar

Monomial = Tuple[int, ...]


class MonomialOrder:
    """A monomial order: ``grevlex`` or ``lex`` plus a variable priority.

    ``perm`` lists variable indices from highest to lowest priority; the
    default is the declaration order of the ring's variables.
    """

    __slots__ = ("kind", "perm")

    def __init__(self, kind: str = "grevlex", perm: Tuple[int, ...] | None = None):
        if kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "perm", tuple(perm) if perm is not None else None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("MonomialOrder is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.perm == other.perm
        )

    def __hash__(self):
        return hash(("MonomialOrder", self.kind, self.perm))

    def __repr__(self):
        if self.perm is None:
            return f"MonomialOrder({self.kind!r})"
        return f"MonomialOrder({self.kind!r}, perm={self.perm})"

    def key_function(self, nvars: int) -> Callable[[Monomial], tuple]:
        """Key under which Python's ``max``/``sorted`` realize this order."""
        perm = self.perm if self.perm is not None else tuple(range(nvars))
        if len(perm) != nvars or sorted(perm) != list(range(nvars)):
            raise ValueError(f"permutation {perm} does not cover {nvars} variables")
        if self.kind == "lex":
            return lambda m: tuple(m[i] for i in perm)
        rev = tuple(reversed(perm))
        return lambda m: (sum(m), tuple(-m[i] for i in rev))


class PolyRing:
    """A polynomial ring ``field[names]`` with a fixed monomial order."""

    __slots__ = ("field", "names", "order", "_key", "_hash")

    def __init__(
        self,
        field: Field,
        names: Sequence[str],
        order: MonomialOrder | None = None,
    ):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for nm in names:
            if not nm.isidentifier():
                raise ValueError(f"variable name {nm!r} is not an identifier")
        order = order if order is not None else MonomialOrder()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_key", order.key_function(len(names)))
        object.__setattr__(self, "_hash", hash(("PolyRing", field, names, order)))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("PolyRing is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}]"

    @property
    def nvars(self) -> int:
        return len(self.names)

    def monomial_key(self, m: Monomial) -> tuple:
        return self._key(m)

    # -- constructors ---------------------------------------------------
    def from_terms(self, terms: Dict[Monomial, Scalar]) -> "Poly":
        clean = {m: c for m, c in terms.items() if c}
        for m in clean:
            if len(m) != self.nvars:
                raise ValueError(f"monomial {m} has wrong arity for {self!r}")
        return Poly(self, clean)

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.one})

    def const(self, c: Scalar) -> "Poly":
        c = self.field.add(c, self.field.zero)
        if not c:
            return self.zero
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self!r}")
        m = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {m: self.field.one})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def var_named(self, name: str) -> "Poly":
        return self.var(self.names.index(name))

    # -- derived rings ----------------------------------------------------
    def with_vars(self, extra: Sequence[str], order: MonomialOrder | None = None) -> "PolyRing":
        """Same field, the old variables followed by ``extra`` new ones."""
        return PolyRing(self.field, self.names + tuple(extra), order)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.names, order)

    def lift(self, p: "Poly", target: "PolyRing") -> "Poly":
        """Reinterpret ``p`` in ``target``, matching variables by name."""
        if p.ring is not self and p.ring != self:
            raise ValueError("polynomial does not belong to this ring")
        where = [target.names.index(nm) for nm in self.names]
        terms: Dict[Monomial, Scalar] = {}
        for m, c in p.terms.items():
            big = [0] * target.nvars
            for i, e in enumerate(m):
                big[where[i]] = e
            terms[tuple(big)] = c
        return target.from_terms(terms)

    def project(self, p: "Poly", target: "PolyRing") -> "Poly":
        """Map ``p`` into the smaller ring ``target`` (matching names).

        Raises ``ValueError`` if ``p`` involves a variable absent from
        ``target``.
        """
        where = []
        for i, nm in enumerate(self.names):
            where.append(target.names.index(nm) if nm in target.names else -1)
        terms: Dict[Monomial, Scalar] = {}
        for m, c in p.terms.items():
            small = [0] * target.nvars
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if where[i] < 0:
                    raise ValueError(
                        f"polynomial involves {self.names[i]!r}, absent from target ring"
                    )
                small[where[i]] = e
            key = tuple(small)
            if key in terms:
                terms[key] = self.field.add(terms[key], c)
            else:
                terms[key] = c
        return target.from_terms(terms)


class Poly:
    """Immutable sparse polynomial; construct through ``PolyRing`` methods."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, Scalar]):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Poly is immutable")

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Scalar:
        if not self.terms:
            return self.ring.field.zero
        ((m, c),) = self.terms.items()
        if sum(m) != 0:
            raise ValueError("polynomial is not constant")
        return c

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def involves(self, i: int) -> bool:
        return any(m[i] for m in self.terms)

    # -- leading data ------------------------------------------------------
    def lead_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.monomial_key)

    def lead_coeff(self) -> Scalar:
        return self.terms[self.lead_monomial()]

    def sorted_terms(self) -> Iterable[Tuple[Monomial, Scalar]]:
        """Terms in decreasing monomial order."""
        key = self.ring.monomial_key
        for m in sorted(self.terms, key=key, reverse=True):
            yield m, self.terms[m]

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(self.ring.field.of_int(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld = self.ring.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = fld.add(terms.get(m, fld.zero), c)
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        fld = self.ring.field
        return Poly(self.ring, {m: fld.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld = self.ring.field
        terms: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = fld.add(terms.get(m, fld.zero), fld.mul(c1, c2))
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "Poly":
        fld = self.ring.field
        if not c:
            return self.ring.zero
        return Poly(self.ring, {m: fld.mul(v, c) for m, v in self.terms.items()})

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff()))

    # -- substitution -------------------------------------------------------
    def substitute(self, images: Sequence["Poly"], target: PolyRing) -> "Poly":
        """Evaluate at ``names[i] -> images[i]``, landing in ``target``."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        result = target.zero
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * images[i] ** e
            result = result + term
        return result

    def evaluate(self, values: Sequence[Scalar]) -> Scalar:
        """Evaluate at a point with coordinates in the coefficient field."""
        fld = self.ring.field
        total = fld.zero
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                for _ in range(e):
                    v = fld.mul(v, values[i])
            total = fld.add(total, v)
        return total

    # -- equality / hashing ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, int):
                return self == self.ring.const(self.ring.field.of_int(other))
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, tuple(sorted(self.terms.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    # -- display ---------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        names = self.ring.names
        chunks: list[str] = []
        for m, c in self.sorted_terms():
            vars_part = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(m)
                if e
            )
            negative = (c < 0) if field.char == 0 else False
            mag = -c if negative else c
            coeff_part = field.scalar_str(mag)
            if vars_part and coeff_part == "1":
                body = vars_part
            elif vars_part:
                body = f"{coeff_part}*{vars_part}"
            else:
                body = coeff_part
            if not chunks:
                chunks.append(f"-{body}" if negative else body)
            else:
                chunks.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"


def poly_sort_key(p: Poly) -> tuple:
    """Total order on polynomials of one ring, for canonical generator lists."""
    key = p.ring.monomial_key
    return (p.total_degree(), tuple((key(m), c) for m, c in p.sorted_terms()))
