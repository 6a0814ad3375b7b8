"""JSON readers for groups, subgroups, maps, presentations and generator pairs."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .abelian import FgAb
from .errors import CapExceeded, InvalidInput, ParseError
from .groups import (ORDER_CAP, PERM_DEGREE_CAP, FiniteGroup, Subgroup, builtin, center, direct_product,
                     group_from_permutations)
from .quadmaps import GroupFunction
from .universal_q import FreeWord, GenPair, Presentation


def load_json(source: str | Path | dict | list) -> Any:
    """Accepts a path, a JSON string or an already-parsed object."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source)
    if not text.lstrip().startswith(("{", "[")):
        try:
            text = Path(text).read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read {source}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {source}: {e}") from None


def _int_list(x, what: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ParseError(f"{what} must be a list of integers")
    return list(x)


def parse_group(spec) -> FiniteGroup:
    d = load_json(spec)
    if not isinstance(d, dict) or "kind" not in d:
        raise ParseError('group description needs a "kind" field')
    kind = d["kind"]
    if kind == "table":
        table = d.get("table")
        if not isinstance(table, list) or not table:
            raise ParseError('"table" must be a non-empty list of rows')
        rows = [_int_list(r, "table row") for r in table]
        n = len(rows)
        if "size" in d and d["size"] != n:
            raise ParseError(f'"size" is {d["size"]} but the table has {n} rows')
        if any(len(r) != n for r in rows):
            raise ParseError("table is not square")
        if n > ORDER_CAP:
            raise CapExceeded(f"group order {n} exceeds cap {ORDER_CAP}")
        return FiniteGroup(np.array(rows, dtype=np.int64), name=d.get("name"))
    if kind == "perm":
        gens = d.get("generators")
        if not isinstance(gens, list):
            raise ParseError('"generators" must be a list of permutations')
        gens = [_int_list(g, "permutation") for g in gens]
        deg = d.get("degree")
        if deg is not None and deg > PERM_DEGREE_CAP:
            raise CapExceeded(f"permutation degree {deg} exceeds cap {PERM_DEGREE_CAP}")
        return group_from_permutations(gens, deg, name=d.get("name"))
    if kind == "builtin":
        family = d.get("family")
        params = d.get("params", {}) or {}
        if family == "product":
            factors = params.get("factors")
            if not isinstance(factors, list) or not factors:
                raise ParseError('product needs params.factors, a list of group descriptions')
            G = parse_group(factors[0])
            for f in factors[1:]:
                G = direct_product(G, parse_group(f))
            return G
        try:
            return builtin(family, params)
        except KeyError as e:
            raise ParseError(f"unknown builtin family or missing parameter: {e}") from None
        except (TypeError, ValueError) as e:
            raise ParseError(f"bad builtin parameters: {e}") from None
    raise ParseError(f"unknown group kind {kind!r}")


def parse_subgroup(G: FiniteGroup, spec) -> Subgroup:
    """Named selection (``trivial``, ``all``, ``center``) or a JSON subgroup description."""
    if spec is None or spec == "trivial":
        return Subgroup.trivial(G)
    if spec in ("all", "whole"):
        return Subgroup.whole(G)
    if spec == "center":
        return center(G)
    d = load_json(spec)
    if not isinstance(d, dict):
        raise ParseError('subgroup must be {"elements": [...]} or {"generators": [...]}')
    if "elements" in d:
        els = _int_list(d["elements"], "elements")
        _check_range(G, els)
        return Subgroup.from_elements(G, els)
    if "generators" in d:
        gens = _int_list(d["generators"], "generators")
        _check_range(G, gens)
        return Subgroup.generated(G, gens)
    raise ParseError('subgroup must have "elements" or "generators"')


def _check_range(G: FiniteGroup, xs) -> None:
    bad = [x for x in xs if not 0 <= x < len(G)]
    if bad:
        raise InvalidInput("element index out of range", {"index": bad[0], "order": len(G)})


def parse_fgab(spec) -> FgAb:
    d = load_json(spec)
    if not isinstance(d, dict) or "factors" not in d:
        raise ParseError('abelian group description must be {"factors": [...]}')
    fs = _int_list(d["factors"], "factors")
    if any(f < 0 for f in fs):
        raise ParseError("factors must be non-negative")
    A = FgAb(tuple(fs))
    if not A.is_finite:
        raise ParseError("only finite abelian codomains are supported")
    return A


def is_fgab_spec(spec) -> bool:
    d = load_json(spec)
    return isinstance(d, dict) and "factors" in d and "kind" not in d


def parse_map(spec, domain: FiniteGroup, codomain: FiniteGroup) -> GroupFunction:
    d = load_json(spec)
    if not isinstance(d, dict) or "values" not in d:
        raise ParseError('map file needs "values"')
    vals = _int_list(d["values"], "values")
    if len(vals) != len(domain):
        raise ParseError(f"map has {len(vals)} values but the domain has order {len(domain)}")
    _check_range(codomain, vals)
    return GroupFunction(domain, codomain, np.array(vals, dtype=np.int64), d.get("name", "f"))


def parse_poly_values(spec, domain: FiniteGroup, A: FgAb) -> list[tuple[int, ...]]:
    """Values as enumeration indices of ``A`` or as coordinate vectors."""
    d = load_json(spec)
    if not isinstance(d, dict) or "values" not in d:
        raise ParseError('map file needs "values"')
    raw = d["values"]
    if not isinstance(raw, list) or len(raw) != len(domain):
        raise ParseError(f"map needs {len(domain)} values")
    out = []
    for v in raw:
        if isinstance(v, int):
            if not 0 <= v < A.order:
                raise ParseError(f"value index {v} out of range for {A}")
            out.append(A.element(v))
        else:
            vec = _int_list(v, "value vector")
            if len(vec) != A.ngens:
                raise ParseError(f"value vector {vec} has wrong length for {A}")
            out.append(A.reduce(vec))
    return out


def _parse_word(raw) -> FreeWord:
    letters = []
    if not isinstance(raw, list):
        raise ParseError("relator must be a list of [generator, exponent] pairs")
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2):
            raise ParseError("relator letters are [generator, exponent] pairs")
        g, e = item
        if isinstance(g, str):
            if not (g.startswith("x") and g[1:].isdigit()):
                raise ParseError(f"generator names are x0, x1, ...; got {g!r}")
            g = int(g[1:])
        if not isinstance(g, int) or e not in (1, -1):
            raise ParseError(f"bad letter {item!r}")
        letters.append((g, e))
    return FreeWord(tuple(letters))


def parse_presentation(spec) -> Presentation:
    d = load_json(spec)
    if not isinstance(d, dict) or "generators" not in d:
        raise ParseError('presentation needs "generators"')
    k = d["generators"]
    if not isinstance(k, int) or k < 0:
        raise ParseError('"generators" must be a non-negative integer')
    rels = [_parse_word(r) for r in d.get("relators", [])]
    pi = d.get("pi")
    if pi is None:
        return Presentation(k, rels)
    G = parse_group(pi["group"])
    imgs = _int_list(pi.get("images"), "pi images")
    _check_range(G, imgs)
    return Presentation(k, rels, G, imgs)


def parse_genpair(spec) -> GenPair:
    d = load_json(spec)
    if not isinstance(d, dict) or "chi" not in d or "psi" not in d:
        raise ParseError('generator pair needs "chi" and "psi"')
    chi = _int_list(d["chi"], "chi")
    if not isinstance(d["psi"], list):
        raise ParseError('"psi" must be a matrix')
    psi = [_int_list(r, "psi row") for r in d["psi"]]
    return GenPair(chi, psi)
