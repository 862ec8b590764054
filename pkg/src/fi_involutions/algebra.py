"""The incidence algebra FI(X, K) of a finite poset.

Elements are sparse maps from comparable index pairs ``(i, j)`` (``i <= j``)
to nonzero field elements.  For finite ``X`` the finitary condition is
vacuous, so FI(X, K) is the full incidence algebra.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import InvalidCocycle, MismatchedCarrier, NotInvertible
from .field import FieldElement, InvolutiveField
from .poset import FinitePoset, PosetMap


class IncidenceAlgebra:
    """FI(X, K): a poset paired with a field."""

    __slots__ = ("poset", "field", "_hash")

    def __init__(self, poset: FinitePoset, field: InvolutiveField):
        self.poset = poset
        self.field = field
        self._hash = hash((poset, repr(field)))

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceAlgebra)
            and self.field is other.field
            and (self.poset is other.poset or self.poset == other.poset)
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FI({self.poset!r}, {self.field!r})"

    # -- constructors -------------------------------------------------------
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def delta(self) -> "AlgebraElement":
        one = self.field.one
        return AlgebraElement(self, {(a, a): one for a in range(self.poset.n)})

    one = delta

    def scalar(self, c) -> "AlgebraElement":
        c = self.field.one * c
        if not c:
            return self.zero()
        return AlgebraElement(self, {(a, a): c for a in range(self.poset.n)})

    def e(self, x, y=None) -> "AlgebraElement":
        """``e_xy`` (``e_x`` when ``y`` is omitted)."""
        a = self.poset.idx(x)
        b = a if y is None else self.poset.idx(y)
        if not self.poset.le[a][b]:
            raise ValueError(f"{x!r} is not below {y!r}")
        return AlgebraElement(self, {(a, b): self.field.one})

    def e_set(self, labels: Iterable) -> "AlgebraElement":
        one = self.field.one
        return AlgebraElement(self, {(a, a): one for a in map(self.poset.idx, labels)})

    def basis_element(self, pair: tuple[int, int], c=None) -> "AlgebraElement":
        c = self.field.one if c is None else c
        return AlgebraElement(self, {pair: c} if c else {})

    def element(self, entries: Mapping) -> "AlgebraElement":
        """From ``{(x, y): value}`` with labels; values may be text."""
        P, F = self.poset, self.field
        coeffs = {}
        for (x, y), v in entries.items():
            a, b = P.idx(x), P.idx(y)
            if not P.le[a][b]:
                raise ValueError(f"entry at incomparable pair ({x!r}, {y!r})")
            if isinstance(v, str):
                v = F.parse(v)
            else:
                v = F.one * v
            if v:
                coeffs[(a, b)] = v
        return AlgebraElement(self, coeffs)

    def diagonal(self, values: Mapping[int, FieldElement]) -> "AlgebraElement":
        """Diagonal element from index-keyed values (absent indices get 1)."""
        one = self.field.one
        return AlgebraElement(self, {(a, a): values.get(a, one) for a in range(self.poset.n)})

    def spanning_set(self) -> list["AlgebraElement"]:
        """A K0-basis: every ``e_xy`` and every ``i * e_xy``."""
        i = self.field.i
        out = [self.basis_element(p) for p in self.poset.pairs]
        out += [self.basis_element(p, i) for p in self.poset.pairs]
        return out

    # -- sampling -----------------------------------------------------------
    def random_element(self, rng: random.Random, density: float = 1.0) -> "AlgebraElement":
        F = self.field
        coeffs = {}
        for p in self.poset.pairs:
            if rng.random() < density:
                v = F.random_element(rng)
                if v:
                    coeffs[p] = v
        return AlgebraElement(self, coeffs)

    def random_unit(self, rng: random.Random, density: float = 1.0) -> "AlgebraElement":
        F = self.field
        f = self.random_element(rng, density)
        coeffs = dict(f.c)
        for a in range(self.poset.n):
            coeffs[(a, a)] = F.random_element(rng, nonzero=True)
        return AlgebraElement(self, coeffs)


class AlgebraElement:
    """An element of FI(X, K); ``c`` holds only the nonzero entries."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: IncidenceAlgebra, coeffs: dict):
        self.alg = alg
        self.c = coeffs

    # -- access -------------------------------------------------------------
    def at(self, a: int, b: int) -> FieldElement:
        v = self.c.get((a, b))
        return self.alg.field.zero if v is None else v

    def __getitem__(self, key) -> FieldElement:
        x, y = key
        P = self.alg.poset
        return self.at(P.idx(x), P.idx(y))

    def entries(self) -> Iterator[tuple[object, object, FieldElement]]:
        els = self.alg.poset.elements
        for a, b in self.alg.poset.pairs:
            v = self.c.get((a, b))
            if v is not None:
                yield els[a], els[b], v

    def is_diagonal(self) -> bool:
        return all(a == b for a, b in self.c)

    def is_scalar(self) -> FieldElement | None:
        """The scalar ``k`` when the element equals ``k * delta``, else ``None``."""
        if not self.is_diagonal():
            return None
        vals = {self.c.get((a, a)) for a in range(self.alg.poset.n)}
        if len(vals) != 1:
            return None
        v = vals.pop()
        return self.alg.field.zero if v is None else v

    def is_unit(self) -> bool:
        return all((a, a) in self.c for a in range(self.alg.poset.n))

    def key(self) -> tuple:
        return tuple(sorted((p, v.a, v.b, getattr(v, "d", 1)) for p, v in self.c.items()))

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "AlgebraElement") -> None:
        if other.alg is not self.alg and other.alg != self.alg:
            raise MismatchedCarrier(f"{self.alg!r} vs {other.alg!r}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = dict(self.c)
        for p, v in other.c.items():
            w = out.get(p)
            if w is None:
                out[p] = v
            else:
                s = w + v
                if s:
                    out[p] = s
                else:
                    del out[p]
        return AlgebraElement(self.alg, out)

    def __neg__(self):
        return AlgebraElement(self.alg, {p: -v for p, v in self.c.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "AlgebraElement":
        k = self.alg.field.one * k
        if not k:
            return self.alg.zero()
        return AlgebraElement(self.alg, {p: k * v for p, v in self.c.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        return NotImplemented

    def inverse(self) -> "AlgebraElement":
        return _invert(self)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (other.alg is self.alg or other.alg == self.alg) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __repr__(self):
        F = self.alg.field
        body = ", ".join(f"({x},{y}): {F.format(v)}" for x, y, v in self.entries())
        return f"AlgebraElement({{{body}}})"


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """``(fg)(x, y) = sum over x <= z <= y of f(x, z) g(z, y)``."""
    f._check(g)
    rows: dict[int, list] = {}
    for (z, j), v in g.c.items():
        rows.setdefault(z, []).append((j, v))
    terms: dict = {}
    for (i, z), a in f.c.items():
        r = rows.get(z)
        if r is None:
            continue
        for j, b in r:
            key = (i, j)
            t = terms.get(key)
            if t is None:
                terms[key] = [(a, b)]
            else:
                t.append((a, b))
    dot = f.alg.field.sum_of_products
    out = {}
    for key, t in terms.items():
        v = dot(t)
        if v:
            out[key] = v
    return AlgebraElement(f.alg, out)


def _invert(f: AlgebraElement) -> AlgebraElement:
    P = f.alg.poset
    c = f.c
    for a in range(P.n):
        if (a, a) not in c:
            raise NotInvertible(P.elements[a])
    diag_inv = {a: c[(a, a)].inverse() for a in range(P.n)}
    g: dict = {}
    order = P.linear_extension
    for x in range(P.n):
        g[(x, x)] = diag_inv[x]
        for y in order:
            if y == x or not P.le[x][y]:
                continue
            s = None
            for z in P.intervals[(x, y)]:
                if z == y:
                    continue
                gxz = g.get((x, z))
                fzy = c.get((z, y))
                if gxz is not None and fzy is not None:
                    t = gxz * fzy
                    s = t if s is None else s + t
            if s is not None and s:
                g[(x, y)] = -(s * diag_inv[y])
    return AlgebraElement(f.alg, g)


def invert(f: AlgebraElement) -> AlgebraElement:
    """Two-sided inverse by interval recursion, checked against ``delta``."""
    g = _invert(f)
    one = f.alg.delta()
    if convolve(f, g) != one or convolve(g, f) != one:
        raise AssertionError("inverse failed its defining identity")
    return g


# -- automorphisms ------------------------------------------------------------

class AlgebraAutomorphism:
    """Base for the automorphism families; instances are callable."""

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        raise NotImplementedError

    def inverse(self) -> "AlgebraAutomorphism":
        raise NotImplementedError

    def then(self, other: "AlgebraAutomorphism") -> "CompositeAutomorphism":
        """``other o self``."""
        return CompositeAutomorphism([other, self])


class InnerAutomorphism(AlgebraAutomorphism):
    """``f -> u f u^-1``."""

    def __init__(self, u: AlgebraElement, u_inv: AlgebraElement | None = None):
        self.u = u
        self.u_inv = _invert(u) if u_inv is None else u_inv
        # (u f u^-1)(a, b) = sum of u(a, x) f(x, y) u^-1(y, b)
        self._cols: dict = {}
        for (a, x), v in u.c.items():
            self._cols.setdefault(x, []).append((a, v))
        self._rows: dict = {}
        for (y, b), v in self.u_inv.c.items():
            self._rows.setdefault(y, []).append((b, v))

    def __call__(self, f):
        if f.alg is not self.u.alg:
            self.u._check(f)
        cols, rows = self._cols, self._rows
        terms: dict = {}
        for (x, y), c in f.c.items():
            right = [(b, c * v) for b, v in rows[y]]
            for a, w in cols[x]:
                for b, cv in right:
                    key = (a, b)
                    t = terms.get(key)
                    if t is None:
                        terms[key] = [(w, cv)]
                    else:
                        t.append((w, cv))
        dot = f.alg.field.sum_of_products
        out = {}
        for key, t in terms.items():
            v = dot(t)
            if v:
                out[key] = v
        return AlgebraElement(f.alg, out)

    def inverse(self):
        return InnerAutomorphism(self.u_inv, self.u)

    def __repr__(self):
        return f"Inner({self.u!r})"


@dataclass(frozen=True)
class Cocycle:
    """Nonzero ``sigma`` on comparable pairs with ``sigma(x,y) sigma(y,z) = sigma(x,z)``.

    ``values`` is keyed by strict index pairs; the diagonal is implicitly 1.
    """

    alg: IncidenceAlgebra
    values: Mapping[tuple[int, int], FieldElement]

    def __post_init__(self):
        P, F = self.alg.poset, self.alg.field
        one = F.one
        vals = dict(self.values)
        for p in P.strict_pairs:
            v = vals.get(p)
            if v is None or not v:
                raise InvalidCocycle(f"sigma vanishes at {P.elements[p[0]]}<{P.elements[p[1]]}")
        for (a, b), v in list(vals.items()):
            if a == b:
                if v != one:
                    raise InvalidCocycle(f"sigma({P.elements[a]},{P.elements[a]}) != 1")
                del vals[(a, b)]
            elif not P.le[a][b]:
                raise InvalidCocycle("sigma given at an incomparable pair")
        for (a, b) in P.strict_pairs:
            for c in range(P.n):
                if c != b and P.le[b][c] and vals[(a, b)] * vals[(b, c)] != vals[(a, c)]:
                    els = P.elements
                    raise InvalidCocycle(
                        f"cocycle identity fails on {els[a]}<{els[b]}<{els[c]}",
                        triple=(els[a], els[b], els[c]),
                    )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_labels(cls, alg: IncidenceAlgebra, entries: Mapping) -> "Cocycle":
        P, F = alg.poset, alg.field
        vals = {}
        for (x, y), v in entries.items():
            vals[(P.idx(x), P.idx(y))] = F.parse(v) if isinstance(v, str) else F.one * v
        return cls(alg, vals)

    @classmethod
    def trivial(cls, alg: IncidenceAlgebra) -> "Cocycle":
        return cls(alg, {p: alg.field.one for p in alg.poset.strict_pairs})

    def at(self, a: int, b: int) -> FieldElement:
        return self.alg.field.one if a == b else self.values[(a, b)]

    def __getitem__(self, key):
        x, y = key
        P = self.alg.poset
        return self.at(P.idx(x), P.idx(y))

    def is_trivial(self) -> bool:
        one = self.alg.field.one
        return all(v == one for v in self.values.values())

    def as_element(self) -> AlgebraElement:
        one = self.alg.field.one
        c = {(a, a): one for a in range(self.alg.poset.n)}
        c.update(self.values)
        return AlgebraElement(self.alg, c)

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    def __eq__(self, other):
        return isinstance(other, Cocycle) and self.alg == other.alg and dict(self.values) == dict(other.values)


class MultiplicativeAutomorphism(AlgebraAutomorphism):
    """``M_sigma(f)(x, y) = sigma(x, y) f(x, y)``."""

    def __init__(self, sigma: Cocycle):
        self.sigma = sigma

    def __call__(self, f):
        s = self.sigma.values
        return AlgebraElement(f.alg, {p: (v if p[0] == p[1] else s[p] * v) for p, v in f.c.items()})

    def inverse(self):
        return MultiplicativeAutomorphism(
            Cocycle(self.sigma.alg, {p: v.inverse() for p, v in self.sigma.values.items()})
        )

    def __repr__(self):
        return f"Multiplicative({dict(self.sigma.values)!r})"


class InducedAutomorphism(AlgebraAutomorphism):
    """``alpha_hat(f)(x, y) = f(alpha^-1 x, alpha^-1 y)``."""

    def __init__(self, alpha: PosetMap):
        if alpha.kind != "automorphism":
            raise ValueError("induced automorphisms need a poset automorphism")
        self.alpha = alpha

    def __call__(self, f):
        img = self.alpha.images
        return AlgebraElement(f.alg, {(img[a], img[b]): v for (a, b), v in f.c.items()})

    def inverse(self):
        return InducedAutomorphism(self.alpha.inverse())

    def __repr__(self):
        return f"Induced({self.alpha!r})"


class CompositeAutomorphism(AlgebraAutomorphism):
    """``factors[0] o factors[1] o ...`` (the last factor is applied first)."""

    def __init__(self, factors: list[AlgebraAutomorphism]):
        self.factors = list(factors)

    def __call__(self, f):
        for phi in reversed(self.factors):
            f = phi(f)
        return f

    def inverse(self):
        return CompositeAutomorphism([phi.inverse() for phi in reversed(self.factors)])

    def __repr__(self):
        return " o ".join(map(repr, self.factors))


def inner_auto(u: AlgebraElement) -> InnerAutomorphism:
    return InnerAutomorphism(u)


def multiplicative_auto(sigma: Cocycle) -> MultiplicativeAutomorphism:
    return MultiplicativeAutomorphism(sigma)


def induced_auto(alpha: PosetMap) -> InducedAutomorphism:
    return InducedAutomorphism(alpha)


# -- center --------------------------------------------------------------------

def nullspace(rows: list[list[FieldElement]], ncols: int, field: InvolutiveField) -> list[list[FieldElement]]:
    """Basis of ``{v : rows . v = 0}`` by Gauss-Jordan elimination over ``field``."""
    zero, one = field.zero, field.one
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col].inverse()
        m[r] = [v * inv for v in m[r]]
        for k in range(len(m)):
            if k != r and m[k][col]:
                factor = m[k][col]
                m[k] = [a - factor * b for a, b in zip(m[k], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [zero] * ncols
        v[fcol] = one
        for k, pcol in enumerate(pivots):
            v[pcol] = -m[k][fcol]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class CenterResult:
    dimension: int
    basis: list


def center(poset: FinitePoset, field: InvolutiveField) -> CenterResult:
    """Solve ``fg = gf`` for ``g`` ranging over every ``e_xy`` (including ``e_x``)."""
    alg = IncidenceAlgebra(poset, field)
    pairs = poset.pairs
    unknowns = [alg.basis_element(p) for p in pairs]
    rows = []
    for g in unknowns:
        images = [convolve(b, g) - convolve(g, b) for b in unknowns]
        for p in pairs:
            rows.append([img.at(*p) for img in images])
    vectors = nullspace(rows, len(pairs), field)
    basis = [AlgebraElement(alg, {p: v for p, v in zip(pairs, vec) if v}) for vec in vectors]
    return CenterResult(len(basis), basis)
