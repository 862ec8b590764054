"""Coboundary tests and the first multiplicative cohomology group of a poset.

A cocycle ``sigma`` is a coboundary when ``sigma(x, y) = c(x) / c(y)`` for
some ``c: X -> K^x``.  Both the witness search and the group computation
work over a BFS spanning tree of the comparability graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm

import sympy
from sympy.matrices.normalforms import invariant_factors

from .algebra import Cocycle, IncidenceAlgebra
from .errors import Disconnected
from .field import FieldElement, InvolutiveField, QuadraticFiniteField
from .poset import FinitePoset, is_connected


def spanning_forest(poset: FinitePoset, roots: list[int] | None = None):
    """BFS forest of the comparability graph.

    Returns ``(parent, order)`` where ``parent[v]`` is ``None`` for roots.
    Roots listed first are used before falling back to index order.
    """
    n = poset.n
    parent: list = [None] * n
    seen = [False] * n
    order = []
    starts = list(roots or []) + list(range(n))
    for r in starts:
        if seen[r]:
            continue
        seen[r] = True
        order.append(r)
        queue = deque([r])
        while queue:
            a = queue.popleft()
            for b in range(n):
                if not seen[b] and b != a and poset.comparable(a, b):
                    seen[b] = True
                    parent[b] = a
                    order.append(b)
                    queue.append(b)
    return parent, order


def tree_edges(parent) -> set[frozenset]:
    return {frozenset((v, p)) for v, p in enumerate(parent) if p is not None}


def _step(sigma: Cocycle, a: int, b: int) -> FieldElement:
    """``sigma`` read along the step ``a -> b`` in either direction."""
    if sigma.alg.poset.le[a][b]:
        return sigma.at(a, b)
    return sigma.at(b, a).inverse()


@dataclass
class CoboundaryResult:
    is_coboundary: bool
    witness: dict | None = None  # label -> c(label)
    obstruction: list | None = None  # closed walk of labels
    defect: FieldElement | None = None  # product of sigma along the walk

    def __bool__(self):
        return self.is_coboundary


def is_coboundary(sigma: Cocycle, root=None) -> CoboundaryResult:
    """Find ``c`` with ``sigma(x, y) = c(x)/c(y)`` normalised by ``c(root) = 1``."""
    P, F = sigma.alg.poset, sigma.alg.field
    roots = [P.idx(root)] if root is not None else None
    parent, order = spanning_forest(P, roots)
    c: dict[int, FieldElement] = {}
    for v in order:
        p = parent[v]
        if p is None:
            c[v] = F.one
        else:
            # c(p) / c(v) = sigma(p -> v)
            c[v] = c[p] * _step(sigma, p, v).inverse()
    for a, b in P.strict_pairs:
        if sigma.at(a, b) * c[b] != c[a]:
            walk = _path_to_root(parent, a)[::-1] + _path_to_root(parent, b)
            defect = F.one
            for u, w in zip(walk, walk[1:]):
                defect = defect * _step(sigma, u, w)
            els = P.elements
            return CoboundaryResult(False, obstruction=[els[k] for k in walk], defect=defect)
    return CoboundaryResult(True, witness={P.elements[v]: c[v] for v in range(P.n)})


def _path_to_root(parent, v) -> list[int]:
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def coboundary_unit(alg: IncidenceAlgebra, witness: dict):
    """The diagonal unit carrying ``c`` (so that ``M_sigma`` is conjugation by it)."""
    P = alg.poset
    return alg.diagonal({P.idx(x): v for x, v in witness.items()})


# -- H^1 -------------------------------------------------------------------------

@dataclass
class H1Report:
    trivial: bool
    free_rank: int
    torsion: list[int]
    nontree_pairs: list = dc_field(default_factory=list)
    relations: list = dc_field(default_factory=list)

    def summary(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def _presentation(poset: FinitePoset):
    """Generators: strict pairs off the spanning tree.  Relations: one per chain x<y<z."""
    parent, _ = spanning_forest(poset)
    tree = tree_edges(parent)
    cols = [p for p in poset.strict_pairs if frozenset(p) not in tree]
    col_of = {p: k for k, p in enumerate(cols)}
    rows = []
    for a, b in poset.strict_pairs:
        for c in range(poset.n):
            if c != b and poset.le[b][c]:
                row = [0] * len(cols)
                for pair, sign in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
                    k = col_of.get(pair)
                    if k is not None:
                        row[k] += sign
                if any(row):
                    rows.append(row)
    return cols, rows


def h1_group(poset: FinitePoset) -> H1Report:
    """The abelian group whose character group is H^1 (field-independent part)."""
    if not is_connected(poset):
        raise Disconnected("H^1 is computed for connected posets")
    cols, rows = _presentation(poset)
    if not cols:
        return H1Report(True, 0, [], [], [])
    if rows:
        M = sympy.Matrix(rows)
        rank = M.rank()
        factors = [int(abs(d)) for d in invariant_factors(M, domain=sympy.ZZ) if d != 0]
    else:
        rank, factors = 0, []
    torsion = [d for d in factors if d > 1]
    free = len(cols) - rank
    return H1Report(free == 0 and not torsion, free, torsion, cols, rows)


def h1_trivial(poset: FinitePoset, field: InvolutiveField) -> H1Report:
    """Whether every cocycle on ``poset`` over ``field`` is a coboundary.

    ``trivial`` is set on the returned report; it accounts for the roots of
    unity of ``field`` meeting the torsion of the presenting group.
    """
    rep = h1_group(poset)
    rep.trivial = rep.free_rank == 0 and all(field.roots_of_unity_count(d) == 1 for d in rep.torsion)
    return rep


def _multiplicative_generator(field: InvolutiveField) -> FieldElement:
    if isinstance(field, QuadraticFiniteField):
        q1 = field.p ** 2 - 1
        primes = sympy.primefactors(q1)
        for x in field.nonzero_elements():
            if all(x ** (q1 // r) != field.one for r in primes):
                return x
    return field.one * 2


def _roots_of_unity(field: InvolutiveField, m: int) -> list[FieldElement]:
    if isinstance(field, QuadraticFiniteField):
        return [x for x in field.nonzero_elements() if x ** m == field.one]
    cands = [field.one, -field.one, field.i, -field.i]
    return [x for x in cands if x ** m == field.one]


def nontrivial_cocycle(poset: FinitePoset, field: InvolutiveField) -> Cocycle | None:
    """A cocycle that is not a coboundary, or ``None`` when H^1 is trivial."""
    rep = h1_trivial(poset, field)
    if rep.trivial:
        return None
    alg = IncidenceAlgebra(poset, field)
    cols, rows = rep.nontree_pairs, rep.relations
    if rep.free_rank:
        M = sympy.Matrix(rows) if rows else sympy.zeros(1, len(cols))
        v = M.nullspace()[0]
        den = lcm(*[Fraction(str(x)).denominator for x in v])
        w = [int(x * den) for x in v]
        g = gcd(*w)
        w = [x // g for x in w]
        gen = _multiplicative_generator(field)
        ys = [gen ** k if k >= 0 else (gen ** -k).inverse() for k in w]
    else:
        m = lcm(*rep.torsion)
        mu = _roots_of_unity(field, m)
        ys = None
        for cand in itertools.product(mu, repeat=len(cols)):
            if all(y == field.one for y in cand):
                continue
            ok = True
            for row in rows:
                acc = field.one
                for y, e in zip(cand, row):
                    if e:
                        acc = acc * (y ** e if e > 0 else (y ** -e).inverse())
                if acc != field.one:
                    ok = False
                    break
            if ok:
                ys = list(cand)
                break
        assert ys is not None, "torsion character search came up empty"
    on_cols = dict(zip(cols, ys))
    # tree edges carry 1; every other strict pair is forced by the generators
    values = {p: on_cols.get(p, field.one) for p in poset.strict_pairs}
    parent, _ = spanning_forest(poset)
    tree = tree_edges(parent)
    for p in poset.strict_pairs:
        if frozenset(p) in tree:
            values[p] = field.one
    sigma = Cocycle(alg, values)
    assert not is_coboundary(sigma)
    return sigma
