"""Equivalence of second-kind involutions, with witnesses or obstructions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .algebra import (
    AlgebraElement,
    InducedAutomorphism,
    InnerAutomorphism,
    _invert,
    convolve,
)
from .errors import KindMismatch, MismatchedCarrier, NotScalarStable
from .field import FieldElement, InvolutiveField
from .involution import (
    EpsilonMap,
    InvolutionMap,
    induced_poset_involution,
    lambda_decomposition,
    restrict_to_scalars,
    rho_lambda_star,
    split_symmetric_unit,
    symmetric_normal_form,
    twist,
)
from .poset import (
    FinitePoset,
    PosetMap,
    enumerate_automorphisms,
    poset_involutions_equivalent,
)

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"


@dataclass
class CosetVector:
    """Normalised ratios ``r(x) / r(x0)`` with ``r = eps1 / eps2`` on the fixed points."""

    base: object
    ratios: dict

    def first_non_norm(self, field: InvolutiveField):
        for x, r in self.ratios.items():
            if not field.is_in_K1(r):
                return x, r
        return None


@dataclass
class Obstruction:
    kind: str  # different_lambda_class | different_scalar_action | coset_mismatch
    at: object = None
    ratio: FieldElement | None = None

    def as_dict(self, field: InvolutiveField | None = None) -> dict:
        out = {"kind": self.kind}
        if self.at is not None:
            out["at"] = self.at
        if self.ratio is not None:
            out["ratio"] = field.format(self.ratio) if field else str(self.ratio)
        return out


@dataclass
class EquivalenceReport:
    verdict: str
    alpha: PosetMap | None = None
    u: AlgebraElement | None = None
    obstruction: Obstruction | None = None
    checked: bool = False
    notes: list = dc_field(default_factory=list)

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT

    def __bool__(self):
        return self.equivalent


def _second_kind(rho: InvolutionMap) -> None:
    try:
        action = restrict_to_scalars(rho)
    except NotScalarStable as exc:
        raise KindMismatch(str(exc)) from None
    if action != "star":
        raise KindMismatch("first-kind involutions are not classified here")


def _same_carrier(rho1: InvolutionMap, rho2: InvolutionMap) -> None:
    if rho1.alg != rho2.alg:
        raise MismatchedCarrier("involutions live on different algebras")


def check_witness(rho1: InvolutionMap, rho2: InvolutionMap, alpha: PosetMap | None,
                  u: AlgebraElement) -> bool:
    """``Phi o rho2 == rho1 o Phi`` for ``Phi = Psi_u o alpha_hat`` on the K0-spanning set."""
    psi = InnerAutomorphism(u)
    hat = InducedAutomorphism(alpha) if alpha is not None and not alpha.is_identity() else None

    def phi(f):
        return psi(hat(f) if hat else f)

    for s in rho1.alg.spanning_set():
        if phi(rho2(s)) != rho1(phi(s)):
            return False
    return True


def coset_vector(eps1: dict, eps2: dict, order: Iterable) -> CosetVector | None:
    order = list(order)
    if not order:
        return None
    r = {x: eps1[x] * eps2[x].inverse() for x in order}
    x0 = order[0]
    r0 = r[x0].inverse()
    return CosetVector(x0, {x: r[x] * r0 for x in order})


def _epsilon_from_normal_form(v: AlgebraElement, fixed: list[int]) -> dict:
    return {a: v.at(a, a) for a in fixed}


def _split_against(rho: InvolutionMap, v: AlgebraElement, eps_idx: dict, lam: PosetMap):
    """``w`` with ``Psi_w o rho_eps = rho o Psi_w`` where ``rho = Psi_v o rho_lam^*``."""
    P, F = rho.poset, rho.field
    alg = rho.alg
    base = rho_lambda_star(P, F, lam)
    ue = alg.diagonal(eps_idx)
    rho_eps = twist(base, ue).rho
    s = convolve(v, _invert(ue))
    return split_symmetric_unit(s, rho_eps), rho_eps, ue


def inner_equivalent(rho1: InvolutionMap, rho2: InvolutionMap) -> EquivalenceReport:
    """Decide equivalence through inner automorphisms only."""
    _same_carrier(rho1, rho2)
    _second_kind(rho1)
    _second_kind(rho2)
    lam1 = induced_poset_involution(rho1)
    lam2 = induced_poset_involution(rho2)
    if lam1.images != lam2.images:
        return EquivalenceReport(NOT_EQUIVALENT, obstruction=Obstruction("different_lambda_class"))
    P, F = rho1.poset, rho1.field
    dx = lambda_decomposition(P, lam1)
    fixed = sorted(dx.x3)

    v1 = symmetric_normal_form(rho1)
    v2 = symmetric_normal_form(rho2)
    e1 = _epsilon_from_normal_form(v1, fixed)
    e2 = _epsilon_from_normal_form(v2, fixed)

    if fixed:
        cv = coset_vector(e1, e2, fixed)
        bad = cv.first_non_norm(F)
        if bad is not None:
            x, ratio = bad
            # reported as eps2/eps1 normalised; it is a norm iff its inverse is
            return EquivalenceReport(
                NOT_EQUIVALENT,
                obstruction=Obstruction("coset_mismatch", P.elements[x], ratio.inverse()),
            )
        k = e1[fixed[0]] * e2[fixed[0]].inverse()
    else:
        k = F.one

    w1, _, ue1 = _split_against(rho1, v1, e1, lam1)
    w2, rho_e2, ue2 = _split_against(rho2, v2, e2, lam1)
    s = convolve(ue1, _invert(ue2)).scale(k.inverse())
    w = split_symmetric_unit(s, rho_e2)
    u = convolve(convolve(w1, w), _invert(w2))
    ok = check_witness(rho1, rho2, None, u)
    if not ok:
        raise AssertionError("assembled witness failed its check")
    return EquivalenceReport(EQUIVALENT, alpha=None, u=u, checked=True)


def conjugate_by_poset_auto(rho: InvolutionMap, alpha: PosetMap) -> InvolutionMap:
    """``alpha_hat o rho o alpha_hat^-1``."""
    if alpha.is_identity():
        return rho
    hat = InducedAutomorphism(alpha)
    img = alpha.images
    images = {(img[a], img[b]): hat(v) for (a, b), v in rho.images.items()}
    lam = None
    if rho.lam is not None:
        inv = alpha.inverse_images()
        lam = PosetMap(rho.poset, tuple(img[rho.lam.images[inv[x]]] for x in range(rho.poset.n)), "involution")
    unit = hat(rho.twist_unit) if rho.twist_unit is not None else None
    out = InvolutionMap(rho.alg, images, hat(rho.i_image), lam=lam, twist_unit=unit)
    if rho.epsilon is not None and lam is not None:
        dec = lambda_decomposition(rho.poset, lam)
        P = rho.poset
        moved = {P.elements[img[P.idx(x)]]: v for x, v in rho.epsilon.items()}
        out.epsilon = EpsilonMap(dec, moved)
    return out


def intertwining_automorphisms(lam1: PosetMap, lam2: PosetMap) -> list[PosetMap]:
    """Every automorphism ``alpha`` with ``alpha o lam2 == lam1 o alpha``."""
    out = []
    for alpha in enumerate_automorphisms(lam1.poset):
        a = alpha.images
        if all(a[lam2.images[x]] == lam1.images[a[x]] for x in range(len(a))):
            out.append(alpha)
    return out


def _with_alpha(rho1, rho2, alpha) -> EquivalenceReport:
    conj = conjugate_by_poset_auto(rho2, alpha)
    rep = inner_equivalent(rho1, conj)
    if rep.equivalent:
        if not check_witness(rho1, rho2, alpha, rep.u):
            raise AssertionError("composed witness failed its check")
        rep = EquivalenceReport(EQUIVALENT, alpha=alpha, u=rep.u, checked=True)
    return rep


def equivalent(rho1: InvolutionMap, rho2: InvolutionMap) -> EquivalenceReport:
    """Decide equivalence through arbitrary algebra automorphisms."""
    _same_carrier(rho1, rho2)
    _second_kind(rho1)
    _second_kind(rho2)
    lam1 = induced_poset_involution(rho1)
    lam2 = induced_poset_involution(rho2)
    small = len(lam1.fixed_points()) <= 1 and len(lam2.fixed_points()) <= 1
    if small:
        alpha = poset_involutions_equivalent(lam1, lam2)
        if alpha is None:
            return EquivalenceReport(NOT_EQUIVALENT, obstruction=Obstruction("different_lambda_class"))
        rep = _with_alpha(rho1, rho2, alpha)
        if not rep.equivalent:
            raise AssertionError("small fixed set but inner test failed")
        return rep
    first_bad = None
    for alpha in intertwining_automorphisms(lam1, lam2):
        rep = _with_alpha(rho1, rho2, alpha)
        if rep.equivalent:
            return rep
        if first_bad is None:
            first_bad = rep
    if first_bad is None:
        return EquivalenceReport(NOT_EQUIVALENT, obstruction=Obstruction("different_lambda_class"))
    return EquivalenceReport(NOT_EQUIVALENT, obstruction=first_bad.obstruction)


@dataclass
class ClassCount:
    count: int | None
    tag: str  # "formula" | "empty fixed set" | "infinite with criterion"
    criterion: str | None = None


def class_count(poset: FinitePoset, field: InvolutiveField, lam: PosetMap) -> ClassCount:
    """Number of inner-equivalence classes inducing ``lam`` and the field involution."""
    dec = lambda_decomposition(poset, lam)
    m = len(dec.x3)
    if m == 0:
        return ClassCount(1, "empty fixed set")
    if m == 1:
        return ClassCount(1, "formula")
    order = field.k0_mod_k1_order()
    if order is None:
        return ClassCount(
            None,
            "infinite with criterion",
            "eps1 ~ eps2 iff (eps1(x)/eps2(x)) / (eps1(x0)/eps2(x0)) is a norm for every fixed x",
        )
    return ClassCount(order ** (m - 1), "formula")
