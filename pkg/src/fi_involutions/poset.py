"""Finite posets, their automorphisms and order-reversing involutions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Hashable, Iterable, Sequence

from .errors import CycleError, DecompositionError, ParseError, UnknownLabel

Label = Hashable


class FinitePoset:
    """A finite poset with the order materialised as a dense boolean table.

    Elements keep the order in which they were declared; every enumeration in
    the package iterates in that order, so witnesses are reproducible.
    """

    __slots__ = ("elements", "index", "n", "le", "pairs", "strict_pairs", "intervals",
                 "linear_extension", "_covers", "_hash")

    def __init__(self, elements: Sequence[Label], le: Sequence[Sequence[bool]]):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ParseError("element labels must be unique")
        self.n = n = len(self.elements)
        self.index = {x: k for k, x in enumerate(self.elements)}
        self.le = tuple(tuple(bool(v) for v in row) for row in le)
        for a in range(n):
            if not self.le[a][a]:
                raise ParseError("order must be reflexive")
            for b in range(n):
                if a != b and self.le[a][b] and self.le[b][a]:
                    raise CycleError(self.elements[a], self.elements[b])
                if self.le[a][b]:
                    for c in range(n):
                        if self.le[b][c] and not self.le[a][c]:
                            raise ParseError("order must be transitive")
        self.pairs = tuple((a, b) for a in range(n) for b in range(n) if self.le[a][b])
        self.strict_pairs = tuple((a, b) for a, b in self.pairs if a != b)
        self.intervals = {
            (a, b): tuple(z for z in range(n) if self.le[a][z] and self.le[z][b])
            for a, b in self.pairs
        }
        self.linear_extension = tuple(sorted(range(n), key=lambda z: (sum(r[z] for r in self.le), z)))
        self._covers = None
        self._hash = hash((self.elements, self.le))

    # -- label helpers ------------------------------------------------------
    def idx(self, x: Label) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownLabel(f"unknown element {x!r}") from None

    def leq(self, x: Label, y: Label) -> bool:
        return self.le[self.idx(x)][self.idx(y)]

    def interval(self, x: Label, y: Label) -> list[Label]:
        """``[x, y]`` as labels (empty when ``x`` is not below ``y``)."""
        a, b = self.idx(x), self.idx(y)
        return [self.elements[z] for z in self.intervals.get((a, b), ())]

    def covers(self) -> list[tuple[int, int]]:
        if self._covers is None:
            self._covers = [
                (a, b) for a, b in self.strict_pairs
                if not any(z not in (a, b) for z in self.intervals[(a, b)])
            ]
        return self._covers

    def cover_labels(self) -> list[tuple[Label, Label]]:
        return [(self.elements[a], self.elements[b]) for a, b in self.covers()]

    def down_size(self, a: int) -> int:
        return sum(self.le[z][a] for z in range(self.n))

    def up_size(self, a: int) -> int:
        return sum(self.le[a])

    def comparable(self, a: int, b: int) -> bool:
        return self.le[a][b] or self.le[b][a]

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.elements == other.elements and self.le == other.le

    def __hash__(self):
        return self._hash

    def __len__(self):
        return self.n

    def __repr__(self):
        covers = ", ".join(f"{x}<{y}" for x, y in self.cover_labels())
        return f"FinitePoset([{', '.join(map(str, self.elements))}]; {covers})"


def build_poset(elements: Iterable[Label], cover_pairs: Iterable[tuple[Label, Label]]) -> FinitePoset:
    """Poset generated by the declared covers (reflexive-transitive closure)."""
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise ParseError("element labels must be unique")
    index = {x: k for k, x in enumerate(elements)}
    n = len(elements)
    le = [[a == b for b in range(n)] for a in range(n)]
    for x, y in cover_pairs:
        for lab in (x, y):
            if lab not in index:
                raise UnknownLabel(f"cover references unknown element {lab!r}")
        if x == y:
            raise ParseError(f"cover ({x!r}, {y!r}) is not strict")
        le[index[x]][index[y]] = True
    for k in range(n):
        for a in range(n):
            if le[a][k]:
                row_k = le[k]
                row_a = le[a]
                for b in range(n):
                    if row_k[b]:
                        row_a[b] = True
    for a, b in combinations(range(n), 2):
        if le[a][b] and le[b][a]:
            raise CycleError(elements[a], elements[b])
    return FinitePoset(elements, le)


def is_connected(poset: FinitePoset) -> bool:
    """Connectedness of the comparability graph."""
    if poset.n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in range(poset.n):
            if b not in seen and poset.comparable(a, b):
                seen.add(b)
                stack.append(b)
    return len(seen) == poset.n


def components(poset: FinitePoset) -> list[list[int]]:
    left = set(range(poset.n))
    out = []
    while left:
        start = min(left)
        comp, stack = {start}, [start]
        while stack:
            a = stack.pop()
            for b in range(poset.n):
                if b not in comp and poset.comparable(a, b):
                    comp.add(b)
                    stack.append(b)
        left -= comp
        out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class PosetMap:
    """A bijection of a poset, either an automorphism or an involution."""

    poset: FinitePoset
    images: tuple[int, ...]
    kind: str  # "automorphism" | "involution"

    def __post_init__(self):
        P, img = self.poset, self.images
        if len(img) != P.n or sorted(img) != list(range(P.n)):
            raise ValueError("poset map must be a bijection")
        if self.kind == "automorphism":
            ok = all(P.le[a][b] == P.le[img[a]][img[b]] for a in range(P.n) for b in range(P.n))
        elif self.kind == "involution":
            ok = all(img[img[a]] == a for a in range(P.n)) and all(
                P.le[a][b] == P.le[img[b]][img[a]] for a in range(P.n) for b in range(P.n)
            )
        else:
            raise ValueError(f"unknown poset map kind {self.kind!r}")
        if not ok:
            raise ValueError(f"map is not a valid {self.kind}")

    @classmethod
    def from_labels(cls, poset: FinitePoset, mapping: dict, kind: str) -> "PosetMap":
        if set(mapping) != set(poset.elements):
            missing = set(poset.elements) ^ set(mapping)
            raise UnknownLabel(f"map domain mismatch on {sorted(map(str, missing))}")
        return cls(poset, tuple(poset.idx(mapping[x]) for x in poset.elements), kind)

    def __call__(self, x: Label) -> Label:
        return self.poset.elements[self.images[self.poset.idx(x)]]

    def as_dict(self) -> dict:
        els = self.poset.elements
        return {els[a]: els[self.images[a]] for a in range(self.poset.n)}

    def inverse_images(self) -> tuple[int, ...]:
        inv = [0] * len(self.images)
        for a, b in enumerate(self.images):
            inv[b] = a
        return tuple(inv)

    def inverse(self) -> "PosetMap":
        return PosetMap(self.poset, self.inverse_images(), self.kind)

    def fixed_points(self) -> list[int]:
        return [a for a, b in enumerate(self.images) if a == b]

    def is_identity(self) -> bool:
        return all(a == b for a, b in enumerate(self.images))

    def __repr__(self):
        moved = {x: y for x, y in self.as_dict().items() if x != y}
        return f"PosetMap({self.kind}, {moved or 'id'})"


def compose(f: PosetMap, g: PosetMap, kind: str = "automorphism") -> PosetMap:
    """``f o g`` (apply ``g`` first)."""
    return PosetMap(f.poset, tuple(f.images[g.images[a]] for a in range(f.poset.n)), kind)


def identity_map(poset: FinitePoset) -> PosetMap:
    return PosetMap(poset, tuple(range(poset.n)), "automorphism")


def _signature(poset: FinitePoset, a: int) -> tuple[int, int]:
    return poset.down_size(a), poset.up_size(a)


def enumerate_automorphisms(poset: FinitePoset) -> list[PosetMap]:
    """All order automorphisms, by backtracking; identity comes first."""
    n = poset.n
    le = poset.le
    sig = [_signature(poset, a) for a in range(n)]
    images = [-1] * n
    used = [False] * n
    found: list[tuple[int, ...]] = []

    def extend(a: int) -> None:
        if a == n:
            found.append(tuple(images))
            return
        for c in range(n):
            if used[c] or sig[c] != sig[a]:
                continue
            if all(le[a][b] == le[c][images[b]] and le[b][a] == le[images[b]][c] for b in range(a)):
                images[a] = c
                used[c] = True
                extend(a + 1)
                used[c] = False
        images[a] = -1

    extend(0)
    return [PosetMap(poset, img, "automorphism") for img in found]


def enumerate_involutions(poset: FinitePoset) -> list[PosetMap]:
    """All order-reversing involutions (empty when the poset is not self-dual)."""
    n = poset.n
    le = poset.le
    sig = [_signature(poset, a) for a in range(n)]
    lam = [-1] * n
    found: list[tuple[int, ...]] = []

    def consistent(a: int) -> bool:
        for b in range(n):
            if lam[b] < 0:
                continue
            if le[a][b] != le[lam[b]][lam[a]] or le[b][a] != le[lam[a]][lam[b]]:
                return False
        return True

    def extend(a: int) -> None:
        while a < n and lam[a] >= 0:
            a += 1
        if a == n:
            found.append(tuple(lam))
            return
        for c in range(a, n):
            if lam[c] >= 0 or sig[c] != (sig[a][1], sig[a][0]):
                continue
            lam[a], lam[c] = c, a
            if consistent(a) and consistent(c):
                extend(a + 1)
            lam[a] = lam[c] = -1

    extend(0)
    return [PosetMap(poset, img, "involution") for img in found]


@dataclass(frozen=True)
class LambdaDecomposition:
    """Partition ``(x1, x2, x3)`` of the element indices for an involution."""

    poset: FinitePoset
    lam: PosetMap
    x1: frozenset
    x2: frozenset
    x3: frozenset

    def part(self, a: int) -> int:
        return 1 if a in self.x1 else 2 if a in self.x2 else 3

    def labels(self) -> tuple[list, list, list]:
        els = self.poset.elements
        return tuple([els[a] for a in sorted(s)] for s in (self.x1, self.x2, self.x3))


def _check_decomposition(poset: FinitePoset, lam: tuple[int, ...], x1: set, x2: set, x3: set) -> str | None:
    n = poset.n
    if x1 & x2 or x1 & x3 or x2 & x3 or (x1 | x2 | x3) != set(range(n)):
        return "not a partition"
    if x3 != {a for a in range(n) if lam[a] == a}:
        return "x3 is not the fixed-point set"
    if {lam[a] for a in x1} != x2:
        return "lambda does not swap x1 and x2"
    for a in x1:
        if any(poset.le[b][a] and b not in x1 for b in range(n)):
            return "x1 is not downward closed"
    for a in x2:
        if any(poset.le[a][b] and b not in x2 for b in range(n)):
            return "x2 is not upward closed"
    return None


def lambda_decomposition(poset: FinitePoset, lam: PosetMap) -> LambdaDecomposition:
    """A canonical decomposition; verified against the closure conditions.

    An element strictly below its image is forced into ``x1``.  Incomparable
    orbits ``{x, lam(x)}`` are decided by backtracking in element order,
    trying the earlier element first; the down-closure of the chosen set must
    avoid fixed points and never contain both members of an orbit.
    """
    img = lam.images
    n = poset.n
    le = poset.le
    x3 = {a for a in range(n) if img[a] == a}
    forced = {a for a in range(n) if img[a] != a and le[a][img[a]]}
    free = sorted({min(a, img[a]) for a in range(n) if img[a] != a and not poset.comparable(a, img[a])})

    def closure(seed: set) -> set | None:
        down = {b for a in seed for b in range(n) if le[b][a]}
        if down & x3 or any(img[b] in down for b in down):
            return None
        return down

    def search(k: int, chosen: set) -> set | None:
        base = closure(chosen)
        if base is None:
            return None
        if k == len(free):
            return base
        a = free[k]
        if a in base or img[a] in base:
            return search(k + 1, chosen)
        for pick in (a, img[a]):
            res = search(k + 1, chosen | {pick})
            if res is not None:
                return res
        return None

    x1 = search(0, set(forced))
    if x1 is None:
        raise DecompositionError(f"no lambda-decomposition found for {lam!r}")
    x2 = {img[a] for a in x1}
    problem = _check_decomposition(poset, img, x1, x2, x3)
    if problem:
        raise DecompositionError(problem)
    return LambdaDecomposition(poset, lam, frozenset(x1), frozenset(x2), frozenset(x3))


def poset_involutions_equivalent(lam1: PosetMap, lam2: PosetMap) -> PosetMap | None:
    """First automorphism ``alpha`` with ``alpha o lam2 == lam1 o alpha``, else ``None``."""
    if lam1.poset != lam2.poset:
        raise ValueError("involutions live on different posets")
    for alpha in enumerate_automorphisms(lam1.poset):
        a = alpha.images
        if all(a[lam2.images[x]] == lam1.images[a[x]] for x in range(len(a))):
            return alpha
    return None


# -- stock posets and exhaustive generation ---------------------------------

def chain(n: int) -> FinitePoset:
    labels = [str(k) for k in range(1, n + 1)]
    return build_poset(labels, zip(labels, labels[1:]))


def antichain(n: int) -> FinitePoset:
    return build_poset([str(k) for k in range(1, n + 1)], [])


def diamond() -> FinitePoset:
    return build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


def crown() -> FinitePoset:
    """The 4-element crown ``{x, y} < {a, b}`` (every minimal below every maximal)."""
    return build_poset(["x", "y", "a", "b"], [("x", "a"), ("x", "b"), ("y", "a"), ("y", "b")])


def vee() -> FinitePoset:
    return build_poset(["1", "2", "3"], [("1", "2"), ("1", "3")])


def disjoint_union(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    if set(p.elements) & set(q.elements):
        raise ParseError("labels of a disjoint union must be distinct")
    return build_poset(list(p.elements) + list(q.elements), p.cover_labels() + q.cover_labels())


def all_posets(n: int, connected_only: bool = False) -> list[FinitePoset]:
    """Every poset on ``n`` points up to isomorphism, generated from cover sets.

    Each poset has a linear extension, so it is enough to close the subsets of
    ``{(i, j) : i < j}``; isomorphic copies are removed through a canonical
    form (lexicographically least relation over all relabellings).
    """
    labels = [str(k) for k in range(n)]
    candidate_pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    seen: set = set()
    labelled: set = set()
    out = []
    for mask in range(1 << len(candidate_pairs)):
        chosen = [candidate_pairs[k] for k in range(len(candidate_pairs)) if mask >> k & 1]
        rel = [[a == b for b in range(n)] for a in range(n)]
        for a, b in chosen:
            rel[a][b] = True
        for k in range(n):
            for a in range(n):
                if rel[a][k]:
                    for b in range(n):
                        if rel[k][b]:
                            rel[a][b] = True
        edges = tuple((a, b) for a in range(n) for b in range(n) if a != b and rel[a][b])
        if edges in labelled:
            continue
        labelled.add(edges)
        canon = min(tuple(sorted((s[a], s[b]) for a, b in edges)) for s in perms)
        if canon in seen:
            continue
        seen.add(canon)
        le = [[a == b for b in range(n)] for a in range(n)]
        for a, b in canon:
            le[a][b] = True
        P = FinitePoset(labels, le)
        if connected_only and not is_connected(P):
            continue
        out.append(P)
    return out
