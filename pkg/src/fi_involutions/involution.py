"""Involutions of FI(X, K): construction, validation and decomposition.

An involution is stored by finite data: the image of every ``e_xy`` and the
image of ``i * delta``.  Since K0 is a prime field in both supported fields,
an additive map is automatically K0-linear, and the rule

    rho(c e_xy) = a rho(e_xy) + b rho(i delta) rho(e_xy),   c = a + b i,

extends the data to the whole algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import (
    AlgebraElement,
    Cocycle,
    IncidenceAlgebra,
    InnerAutomorphism,
    MultiplicativeAutomorphism,
    _invert,
    convolve,
)
from .cohomology import coboundary_unit, is_coboundary
from .errors import (
    DecompositionFailure,
    Disconnected,
    DomainMismatch,
    H1Obstruction,
    InvalidCocycle,
    InvalidInvolution,
    KindMismatch,
    MalformedIdempotent,
    NotInK0,
    NotInK1OnX3,
    NotInvertible,
    NotScalar,
    NotScalarStable,
    NotSymmetric,
    NotTwistable,
    ZeroElement,
)
from .field import FieldElement, InvolutiveField
from .poset import (
    FinitePoset,
    LambdaDecomposition,
    PosetMap,
    enumerate_involutions,
    is_connected,
    lambda_decomposition,
)


class InvolutionMap:
    """An additive self-map of FI(X, K) given by basis images.

    ``twist_unit`` and ``lam`` are optional provenance: when present the map
    equals ``Psi_twist_unit o rho_lam^*``.  ``epsilon`` marks the epsilon form.
    """

    def __init__(self, alg: IncidenceAlgebra, images: Mapping, i_image: AlgebraElement,
                 lam: PosetMap | None = None, twist_unit: AlgebraElement | None = None,
                 epsilon: "EpsilonMap | None" = None):
        self.alg = alg
        self.images = dict(images)
        if set(self.images) != set(alg.poset.pairs):
            raise InvalidInvolution("basis images must cover every comparable pair")
        self.i_image = i_image
        self.lam = lam
        self.twist_unit = twist_unit
        self.epsilon = epsilon
        F = alg.field
        s = i_image.is_scalar()
        if s is not None and s == -F.i:
            self._mode = "star"
        elif s is not None and s == F.i:
            self._mode = "linear"
        else:
            self._mode = "general"

    @property
    def poset(self) -> FinitePoset:
        return self.alg.poset

    @property
    def field(self) -> InvolutiveField:
        return self.alg.field

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        if self._mode == "general":
            return self._apply_general(f)
        star = self._mode == "star"
        terms: dict = {}
        images = self.images
        for p, c in f.c.items():
            k = c.star() if star else c
            for q, v in images[p].c.items():
                t = terms.get(q)
                if t is None:
                    terms[q] = [(k, v)]
                else:
                    t.append((k, v))
        dot = self.field.sum_of_products
        out = {}
        for q, t in terms.items():
            v = dot(t)
            if v:
                out[q] = v
        return AlgebraElement(f.alg, out)

    def _apply_general(self, f):
        F = self.field
        out = f.alg.zero()
        for p, c in f.c.items():
            a, b = F.components(c)
            img = self.images[p]
            out = out + img.scale(a)
            if b:
                out = out + convolve(self.i_image, img).scale(b)
        return out

    def kind(self) -> str:
        """``"second"``, ``"first"`` or ``"unknown"`` from the action on ``i delta``."""
        return {"star": "second", "linear": "first"}.get(self._mode, "unknown")

    def key(self) -> tuple:
        return tuple(self.images[p].key() for p in self.poset.pairs) + (self.i_image.key(),)

    def __eq__(self, other):
        if not isinstance(other, InvolutionMap):
            return NotImplemented
        return self.alg == other.alg and self.images == other.images and self.i_image == other.i_image

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        tag = "rho_eps" if self.epsilon is not None else "rho"
        return f"<{tag} on {self.poset!r} over {self.field!r}>"


@dataclass
class InvolutionCheck:
    ok: bool
    failure: str | None = None

    def __bool__(self):
        return self.ok


def is_involution(rho: InvolutionMap) -> InvolutionCheck:
    """Anti-multiplicativity and order two on the K0-spanning set, plus ``rho(delta) = delta``."""
    alg = rho.alg
    one = alg.delta()
    if rho(one) != one:
        return InvolutionCheck(False, "rho(delta) != delta")
    span = alg.spanning_set()
    span.append(alg.scalar(alg.field.i))
    images = [rho(s) for s in span]
    for s, r in zip(span, images):
        if rho(r) != s:
            return InvolutionCheck(False, f"rho(rho(s)) != s for s = {s!r}")
    for s, rs in zip(span, images):
        for t, rt in zip(span, images):
            if rho(convolve(s, t)) != convolve(rt, rs):
                return InvolutionCheck(False, f"rho(st) != rho(t)rho(s) for s = {s!r}, t = {t!r}")
    return InvolutionCheck(True)


def rho_lambda_star(poset: FinitePoset, field: InvolutiveField, lam: PosetMap) -> InvolutionMap:
    """The canonical involution ``f -> [f(lam y, lam x)]*``."""
    if lam.kind != "involution" or lam.poset != poset:
        raise InvalidInvolution("lambda must be an involution of the given poset")
    alg = IncidenceAlgebra(poset, field)
    img = lam.images
    one = field.one
    images = {(a, b): AlgebraElement(alg, {(img[b], img[a]): one}) for a, b in poset.pairs}
    return InvolutionMap(alg, images, alg.scalar(-field.i), lam=lam, twist_unit=alg.delta())


@dataclass
class Twist:
    rho: InvolutionMap
    k: FieldElement


def twist(rho: InvolutionMap, u: AlgebraElement) -> Twist:
    """``Psi_u o rho`` together with the unitary scalar ``k`` for which ``rho(u) = k u``."""
    try:
        u_inv = _invert(u)
    except NotInvertible:
        raise
    ratio = convolve(rho(u), u_inv)
    k = ratio.is_scalar()
    if k is None or not k:
        raise NotTwistable("rho(u) u^-1 is not a scalar")
    psi = InnerAutomorphism(u, u_inv)
    images = {p: psi(v) for p, v in rho.images.items()}
    i_image = psi(rho.i_image)
    unit = None
    if rho.twist_unit is not None:
        unit = convolve(u, rho.twist_unit)
    return Twist(InvolutionMap(rho.alg, images, i_image, lam=rho.lam, twist_unit=unit), k)


def psi_rho_star(poset: FinitePoset, field: InvolutiveField, lam: PosetMap, u: AlgebraElement) -> InvolutionMap:
    """Shorthand for ``twist(rho_lam^*, u).rho``."""
    return twist(rho_lambda_star(poset, field, lam), u).rho


# -- epsilon form -------------------------------------------------------------

class EpsilonMap:
    """Values in K0^x on the fixed-point set of a poset involution."""

    def __init__(self, decomposition: LambdaDecomposition, values: Mapping):
        P = decomposition.poset
        dom = {P.elements[a] for a in decomposition.x3}
        if set(values) != dom:
            raise DomainMismatch(f"epsilon must be defined exactly on {sorted(map(str, dom))}")
        self.decomposition = decomposition
        self.values = {}
        for x in sorted(dom, key=P.idx):
            v = values[x]
            if not v:
                raise ZeroElement(f"epsilon({x}) = 0")
            if v != v.star():
                raise NotInK0(f"epsilon({x}) is not fixed by the field involution")
            self.values[x] = v

    def __getitem__(self, x):
        return self.values[x]

    def items(self):
        return self.values.items()

    def __repr__(self):
        return f"EpsilonMap({ {x: str(v) for x, v in self.values.items()} })"


def u_epsilon(alg: IncidenceAlgebra, eps: EpsilonMap) -> AlgebraElement:
    """The diagonal unit: ``eps(x)`` on the fixed points, 1 elsewhere."""
    P = alg.poset
    return alg.diagonal({P.idx(x): v for x, v in eps.items()})


def build_rho_epsilon(poset: FinitePoset, field: InvolutiveField, lam: PosetMap,
                      epsilon: Mapping) -> InvolutionMap:
    """``Psi_{u_eps} o rho_lam^*``; ``epsilon`` maps fixed-point labels to K0^x values (or text)."""
    dec = lambda_decomposition(poset, lam)
    vals = {x: field.parse(v) if isinstance(v, str) else field.one * v for x, v in epsilon.items()}
    eps = EpsilonMap(dec, vals)
    base = rho_lambda_star(poset, field, lam)
    t = twist(base, u_epsilon(base.alg, eps))
    assert t.k == field.one
    t.rho.epsilon = eps
    return t.rho


# -- structure recovery --------------------------------------------------------

def induced_poset_involution(rho: InvolutionMap) -> PosetMap:
    """``lam(x)`` is the unique ``z`` with ``rho(e_x)(z, z) = 1``."""
    alg, P = rho.alg, rho.poset
    one = alg.field.one
    img = []
    for a in range(P.n):
        e = rho.images[(a, a)]
        if convolve(e, e) != e:
            raise MalformedIdempotent(f"image of e_{P.elements[a]} is not idempotent")
        diag = [z for z in range(P.n) if (z, z) in e.c]
        if len(diag) != 1 or e.c[(diag[0], diag[0])] != one:
            raise MalformedIdempotent(f"image of e_{P.elements[a]} does not have exactly one diagonal 1")
        img.append(diag[0])
    try:
        return PosetMap(P, tuple(img), "involution")
    except ValueError as exc:
        raise MalformedIdempotent(str(exc)) from None


def restrict_to_scalars(rho: InvolutionMap) -> str:
    """``"star"`` for the field involution, ``"identity"`` for a first-kind map."""
    if not is_connected(rho.poset):
        raise Disconnected("the scalar action is read off the center of a connected poset")
    s = rho.i_image.is_scalar()
    F = rho.field
    if s is not None and s == -F.i:
        return "star"
    if s is not None and s == F.i:
        return "identity"
    raise NotScalarStable("rho(i delta) is not +-i delta")


@dataclass
class Decomposition:
    """``rho = Psi_{f^-1} o M_sigma o rho_lam^*``."""

    f: AlgebraElement
    sigma: Cocycle
    lam: PosetMap
    scalar_action: str

    def reassemble(self) -> InvolutionMap:
        base = rho_lambda_star(self.f.alg.poset, self.f.alg.field, self.lam)
        m = MultiplicativeAutomorphism(self.sigma)
        psi = InnerAutomorphism(_invert(self.f), self.f)
        images = {p: psi(m(v)) for p, v in base.images.items()}
        return InvolutionMap(base.alg, images, psi(m(base.i_image)), lam=self.lam)


def _require_second_kind(rho: InvolutionMap) -> None:
    if restrict_to_scalars(rho) != "star":
        raise KindMismatch("expected an involution of the second kind")


def decompose(rho: InvolutionMap) -> Decomposition:
    alg, P = rho.alg, rho.poset
    try:
        _require_second_kind(rho)
        lam = induced_poset_involution(rho)
    except (KindMismatch, NotScalarStable, MalformedIdempotent) as exc:
        raise DecompositionFailure(str(exc)) from None
    img = lam.images
    one = alg.field.one
    f = AlgebraElement(alg, {})
    coeffs = {}
    for u, v in P.pairs:
        val = rho.images[(img[u], img[u])].at(u, v)
        if val:
            coeffs[(u, v)] = val
    f = AlgebraElement(alg, coeffs)
    if any(f.at(a, a) != one for a in range(P.n)):
        raise DecompositionFailure("recovered unit does not have unit diagonal")
    f_inv = _invert(f)
    sig = {}
    for x, y in P.strict_pairs:
        val = convolve(convolve(f, rho.images[(img[y], img[x])]), f_inv).at(x, y)
        sig[(x, y)] = val
    try:
        sigma = Cocycle(alg, sig)
    except InvalidCocycle as exc:
        raise DecompositionFailure(f"recovered sigma is not a cocycle: {exc}") from None
    dec = Decomposition(f, sigma, lam, "star")
    back = dec.reassemble()
    if back != rho:
        bad = next(p for p in P.pairs if back.images[p] != rho.images[p]) if back.images != rho.images else None
        where = f"e_{P.elements[bad[0]]}{P.elements[bad[1]]}" if bad else "i delta"
        raise DecompositionFailure(f"factorisation does not reproduce rho at {where}")
    return dec


def _twisting_unit(rho: InvolutionMap) -> tuple[AlgebraElement, PosetMap]:
    """A unit ``u`` with ``rho = Psi_u o rho_lam^*`` (requires a coboundary sigma)."""
    dec = decompose(rho)
    dx = lambda_decomposition(rho.poset, dec.lam)
    root = rho.poset.elements[min(dx.x1)] if dx.x1 else None
    cb = is_coboundary(dec.sigma, root=root)
    if not cb:
        raise H1Obstruction("multiplicative factor is not inner", cocycle=dec.sigma)
    d = coboundary_unit(rho.alg, cb.witness)
    return convolve(_invert(dec.f), d), dec.lam


def symmetric_normal_form(rho: InvolutionMap) -> AlgebraElement:
    """A ``rho_lam^*``-symmetric unit ``v`` with ``rho = Psi_v o rho_lam^*``."""
    u, lam = _twisting_unit(rho)
    F = rho.field
    base = rho_lambda_star(rho.poset, F, lam)
    k = convolve(base(u), _invert(u)).is_scalar()
    if k is None or not k:
        raise NotScalar("rho_lam^*(u) is not a scalar multiple of u")
    a = F.unitary_to_ratio(k)
    v = u.scale(a.inverse())
    if base(v) != v:
        raise AssertionError("normal form is not symmetric")
    if twist(base, v).rho != rho:
        raise AssertionError("normal form does not reproduce rho")
    return v


def split_symmetric_unit(u: AlgebraElement, rho_eps: InvolutionMap) -> AlgebraElement:
    """A unit ``v`` with ``u = v rho_eps(v)``."""
    if rho_eps.lam is None:
        raise InvalidInvolution("splitting needs an involution of epsilon form")
    alg, P, F = rho_eps.alg, rho_eps.poset, rho_eps.field
    if rho_eps(u) != u:
        raise NotSymmetric("u is not fixed by the involution")
    dx = lambda_decomposition(P, rho_eps.lam)
    for x in sorted(dx.x3):
        val = u.at(x, x)
        if not F.is_in_K1(val):
            raise NotInK1OnX3(P.elements[x], val)
    half = F.one * 2
    half = half.inverse()
    coeffs = {}
    for x, y in P.pairs:
        px, py = dx.part(x), dx.part(y)
        if px == 1 and py == 1:
            val = F.one if x == y else F.zero
        elif px == 2 and py == 2:
            val = u.at(x, y)
        elif px == 1 and py == 2:
            val = u.at(x, y) * half
        elif px == 1 and py == 3:
            val = F.zero
        elif px == 3 and py == 2:
            val = u.at(x, y)
        elif x == y:
            val = F.norm_preimage(u.at(x, x))
        else:
            raise AssertionError("pair outside the case table")
        if val:
            coeffs[(x, y)] = val
    v = AlgebraElement(alg, coeffs)
    if convolve(v, rho_eps(v)) != u:
        raise AssertionError("split does not reproduce u")
    return v


def exists_second_kind_involution(poset: FinitePoset, field: InvolutiveField | None = None) -> bool:
    if not is_connected(poset):
        raise Disconnected("existence criterion is stated for connected posets")
    return bool(enumerate_involutions(poset))


def random_symmetric_unit(base: InvolutionMap, rng, density: float = 1.0) -> AlgebraElement:
    """``w + base(w)`` for random ``w``, resampled until it is a unit.

    Every ``base``-symmetric unit ``v`` arises this way (take ``w = v / 2``).
    """
    alg = base.alg
    while True:
        w = alg.random_element(rng, density)
        v = w + base(w)
        if v.is_unit():
            return v
