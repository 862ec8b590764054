"""JSON readers and writers for posets, elements, involutions and reports."""

from __future__ import annotations

import json
import os
from typing import Any

from .algebra import AlgebraElement, Cocycle, IncidenceAlgebra
from .classify import EquivalenceReport
from .errors import ParseError
from .field import InvolutiveField, field_from_descriptor
from .involution import (
    Decomposition,
    InvolutionMap,
    build_rho_epsilon,
    psi_rho_star,
    rho_lambda_star,
)
from .poset import FinitePoset, PosetMap, build_poset


def _load_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def _loads(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _nth_item_line(text: str, key: str, n: int) -> int | None:
    """Line of the ``n``-th item of the array stored under ``key`` (best effort)."""
    start = text.find(f'"{key}"')
    if start < 0:
        return None
    pos = text.find("[", start)
    depth, count = 0, -1
    in_str = in_tok = False
    for i in range(pos, len(text)):
        ch = text[i]
        if in_str:
            if ch == '"' and text[i - 1] != "\\":
                in_str = False
            continue
        begins = False
        if ch == '"':
            in_str = True
            begins = depth == 1
        elif ch in "[{":
            depth += 1
            begins = depth == 2
        elif ch in "]}":
            depth -= 1
            if depth == 0:
                return None
        elif depth == 1:
            if ch in ", \t\r\n":
                in_tok = False
            elif not in_tok:
                in_tok = begins = True
        if begins:
            count += 1
            if count == n:
                return text.count("\n", 0, i) + 1
    return None


# -- posets ---------------------------------------------------------------------

def poset_from_json(data: dict, text: str = "", source: str = "<poset>") -> FinitePoset:
    if not isinstance(data, dict) or "elements" not in data:
        raise ParseError(f"{source}: a poset needs an 'elements' list")
    elements = data["elements"]
    if not isinstance(elements, list):
        raise ParseError(f"{source}: 'elements' must be a list")
    elements = [str(x) for x in elements]
    covers = data.get("covers", [])
    if not isinstance(covers, list):
        raise ParseError(f"{source}: 'covers' must be a list")
    pairs = []
    for k, c in enumerate(covers):
        if not (isinstance(c, list) and len(c) == 2):
            line = _nth_item_line(text, "covers", k) if text else None
            where = f"{source}:{line}" if line else source
            raise ParseError(f"{where}: cover #{k} must be a two-element list, got {c!r}")
        pairs.append((str(c[0]), str(c[1])))
    return build_poset(elements, pairs)


def load_poset(path: str) -> FinitePoset:
    text = _load_text(path)
    return poset_from_json(_loads(text, path), text, path)


def poset_to_json(poset: FinitePoset) -> dict:
    return {"elements": list(poset.elements), "covers": [list(c) for c in poset.cover_labels()]}


# -- elements ---------------------------------------------------------------------

def element_to_json(f: AlgebraElement) -> dict:
    F = f.alg.field
    return {"entries": [{"from": x, "to": y, "value": F.format(v)} for x, y, v in f.entries()]}


def element_from_json(data: dict, alg: IncidenceAlgebra) -> AlgebraElement:
    if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
        raise ParseError("an element needs an 'entries' list")
    entries = {}
    for item in data["entries"]:
        try:
            key = (str(item["from"]), str(item["to"]))
            entries[key] = str(item["value"])
        except (KeyError, TypeError):
            raise ParseError(f"bad element entry {item!r}") from None
    try:
        return alg.element(entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def cocycle_to_json(sigma: Cocycle) -> dict:
    P, F = sigma.alg.poset, sigma.alg.field
    return {
        "entries": [
            {"from": P.elements[a], "to": P.elements[b], "value": F.format(sigma.at(a, b))}
            for a, b in P.strict_pairs
        ]
    }


def map_to_json(m: PosetMap) -> dict:
    return m.as_dict()


# -- involutions -------------------------------------------------------------------

def _resolve_poset(data: dict, poset: FinitePoset | None, base_dir: str) -> FinitePoset:
    ref = data.get("poset")
    if ref is None:
        if poset is None:
            raise ParseError("involution file names no poset and none was supplied")
        return poset
    if isinstance(ref, str):
        return load_poset(os.path.join(base_dir, ref))
    return poset_from_json(ref)


def _resolve_field(data: dict, field: InvolutiveField | None) -> InvolutiveField:
    if "field" in data:
        return field_from_descriptor(data["field"])
    if field is None:
        raise ParseError("no field given")
    return field


def involution_from_json(data: dict, poset: FinitePoset | None = None, field: InvolutiveField | None = None,
                         base_dir: str = ".") -> InvolutionMap:
    """Read either the epsilon form or the basis-image form.

    Optional keys: ``poset`` (inline object or path relative to the file),
    ``field`` (descriptor) and ``twist`` (an element ``u`` giving
    ``Psi_u o rho_lam^*``).
    """
    if not isinstance(data, dict):
        raise ParseError("an involution file holds a JSON object")
    P = _resolve_poset(data, poset, base_dir)
    F = _resolve_field(data, field)
    alg = IncidenceAlgebra(P, F)
    if "lambda" in data:
        try:
            lam = PosetMap.from_labels(P, {str(k): str(v) for k, v in data["lambda"].items()}, "involution")
        except ValueError as exc:
            raise ParseError(f"lambda: {exc}") from None
        if "twist" in data:
            return psi_rho_star(P, F, lam, element_from_json(data["twist"], alg))
        eps = data.get("epsilon")
        if eps:
            return build_rho_epsilon(P, F, lam, {str(k): str(v) for k, v in eps.items()})
        return rho_lambda_star(P, F, lam)
    if "basis_images" in data:
        images = {}
        for item in data["basis_images"]:
            try:
                a, b = P.idx(str(item["from"])), P.idx(str(item["to"]))
                images[(a, b)] = element_from_json(item["image"], alg)
            except (KeyError, TypeError):
                raise ParseError(f"bad basis image {item!r}") from None
        i_img = data.get("i_image", "-1" + F.symbol)
        if isinstance(i_img, str):
            i_elem = alg.scalar(F.parse(i_img))
        else:
            i_elem = element_from_json(i_img, alg)
        missing = set(P.pairs) - set(images)
        if missing:
            a, b = sorted(missing)[0]
            raise ParseError(f"basis image missing for ({P.elements[a]}, {P.elements[b]})")
        return InvolutionMap(alg, images, i_elem)
    raise ParseError("involution file needs 'lambda' or 'basis_images'")


def load_involution(path: str, poset: FinitePoset | None = None, field: InvolutiveField | None = None) -> InvolutionMap:
    text = _load_text(path)
    return involution_from_json(_loads(text, path), poset, field, os.path.dirname(os.path.abspath(path)))


def involution_to_json(rho: InvolutionMap) -> dict:
    P, F = rho.poset, rho.field
    out = {"poset": poset_to_json(P), "field": F.descriptor()}
    out["basis_images"] = [
        {"from": P.elements[a], "to": P.elements[b], "image": element_to_json(rho.images[(a, b)])}
        for a, b in P.pairs
    ]
    s = rho.i_image.is_scalar()
    out["i_image"] = F.format(s) if s is not None else element_to_json(rho.i_image)
    return out


# -- reports ------------------------------------------------------------------------

def decomposition_to_json(dec: Decomposition) -> dict:
    return {
        "lambda": map_to_json(dec.lam),
        "scalar_action": dec.scalar_action,
        "f": element_to_json(dec.f),
        "sigma": cocycle_to_json(dec.sigma),
    }


def report_to_json(rep: EquivalenceReport, field: InvolutiveField) -> dict:
    if rep.equivalent:
        alpha = rep.alpha.as_dict() if rep.alpha is not None else {x: x for x in rep.u.alg.poset.elements}
        return {"verdict": rep.verdict, "witness": {"alpha": alpha, "u": element_to_json(rep.u)},
                "checked": rep.checked}
    return {"verdict": rep.verdict, "obstruction": rep.obstruction.as_dict(field)}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)
