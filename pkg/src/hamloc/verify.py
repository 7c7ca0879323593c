"""Desk-scale verification pipelines.

Each checker builds the relevant localizations and certificates and
returns a deterministic ExperimentReport.  Verdicts:

* ``pass``         - every check succeeded on fully stable primary data;
* ``fail``         - a certificate or equivalence search refuted the claim;
* ``inapplicable`` - a stated precondition (e.g. neglectability) fails;
* ``undetermined`` - bounds or budgets were insufficient to decide.

Doubly approximate stages (re-localizing a flattening, whose composition
is only partially representable inside any width bound) carry their own
stability verdicts in the outcomes as approximation caveats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CompositionUnavailable, ConsistencyError, InputError
from .fincat import (
    CatFunctor,
    FiniteCategory,
    find_equivalence,
    subcategory_span,
    validate_category,
    wide_subcategory_violations,
)
from .flatten import flatten, relativization_unit
from .hammock import (
    embed,
    embed_morphism,
    embed_relscat,
    hammock_localization,
    hammock_localization_relscat,
    homotopy_category_of_localization,
)
from .jsonio import canonical_dumps, content_key
from .relcat import RelativeCategory, RelativeFunctor, validate_relative, validate_relative_functor
from .scat import (
    RelativeSimplicialCategory,
    SimplicialFunctor,
    check_dk,
    is_neglectable,
    validate_relscat,
    validate_simplicial_functor,
)


@dataclass
class Bounds:
    truncation: int = 1
    width: int = 4
    equiv_budget: int = 2_000_000
    dk_budget: int = 2_000_000
    zigzag_bound: int = 3

    def to_json(self):
        return {
            "truncation": self.truncation,
            "width": self.width,
            "equiv_budget": self.equiv_budget,
            "dk_budget": self.dk_budget,
            "zigzag_bound": self.zigzag_bound,
        }


SCOPE_NOTE = (
    "component-level verification at the stated truncation and width; "
    "mapping-space equivalence is certified by necessary conditions only "
    "(components and homology through the truncation)"
)


@dataclass
class ExperimentReport:
    claim: str
    inputs: dict
    bounds: dict
    outcomes: list
    verdict: str
    witness: object = None

    def to_json(self):
        return {
            "claim": self.claim,
            "scope": SCOPE_NOTE,
            "inputs": self.inputs,
            "bounds": self.bounds,
            "outcomes": self.outcomes,
            "verdict": self.verdict,
            "witness": self.witness,
        }

    def render(self) -> str:
        lines = [f"claim {self.claim}: {self.verdict}"]
        for outcome in self.outcomes:
            lines.append(f"  - {outcome['check']}: {outcome['result']}")
        if self.witness is not None:
            lines.append(f"  witness: {self.witness}")
        return "\n".join(lines)


def _describe(payload, kind):
    return {"kind": kind, "hash": content_key(kind, payload)}


def _embedded_sub(rel: RelativeCategory, loc_scat, morphisms):
    """Subobject of a localization spanned by embedded morphisms."""
    sub = {}
    for x in rel.cat.objects:
        for y in rel.cat.objects:
            chosen = [m for m in rel.cat.hom(x, y) if m in set(morphisms)]
            levels = []
            for level in range(loc_scat.truncation + 1):
                levels.append(frozenset(
                    embed_morphism(rel, m, level).name for m in chosen
                ))
            sub[(x, y)] = tuple(levels)
    return sub


def check_24i(a: FiniteCategory, u, v, bounds: Bounds) -> ExperimentReport:
    """Localizing at a span of marked subcategories: when the second
    subcategory is neglectable in the localization at the first, the
    induced comparison functor must be a DK-equivalence."""
    bad = validate_category(a)
    if bad:
        raise InputError(f"invalid category: {bad[0]}")
    for name, part in (("u", u), ("v", v)):
        violations = wide_subcategory_violations(a, part)
        if violations:
            raise InputError(f"{name} is not a wide subcategory: {violations[0]}")

    inputs = _describe({"category": a.to_json(), "u": sorted(u), "v": sorted(v)}, "claim-24i-input")
    outcomes = []
    ru = RelativeCategory(a, u)
    loc_u = hammock_localization(ru, bounds.truncation, bounds.width)
    outcomes.append({"check": "localization(u) stability", "result": loc_u.verdict})

    rs = RelativeSimplicialCategory(loc_u.scat(), _embedded_sub(ru, loc_u.scat(), v))
    try:
        neglectable, witness = is_neglectable(rs)
    except (CompositionUnavailable, ConsistencyError) as exc:
        return ExperimentReport("2.4i", inputs, bounds.to_json(),
                                outcomes + [{"check": "neglectability", "result": "undetermined"}],
                                "undetermined", str(exc))
    outcomes.append({"check": "v neglectable in localization(u)",
                     "result": "yes" if neglectable else "no"})
    if not neglectable:
        return ExperimentReport("2.4i", inputs, bounds.to_json(), outcomes,
                                "inapplicable", list(witness))

    span = subcategory_span(a, u, v)
    ruv = RelativeCategory(a, span.morphisms)
    loc_uv = hammock_localization(ruv, bounds.truncation, bounds.width)
    outcomes.append({"check": "localization(u+v) stability", "result": loc_uv.verdict})

    smap = {}
    for x in a.objects:
        for y in a.objects:
            source_hom = loc_u.pair(x, y).sset
            target_hom = loc_uv.pair(x, y).sset
            for level in range(bounds.truncation + 1):
                for name in source_hom.level(level):
                    if not target_hom.has_simplex(level, name):
                        raise ConsistencyError("hammock lost when weq grows")
                    smap[(x, y, level, name)] = name
    induced = SimplicialFunctor(loc_u.scat(), loc_uv.scat(),
                                {x: x for x in a.objects}, smap)
    cert = check_dk(induced, bounds.dk_budget)
    outcomes.append({"check": "DK certificate", "result": cert.verdict})

    if cert.verdict == "fail":
        verdict = "fail"
    elif cert.verdict == "undetermined":
        verdict = "undetermined"
    elif loc_u.verdict != "stable" or loc_uv.verdict != "stable":
        verdict = "undetermined"
    else:
        verdict = "pass"
    witness = cert.to_json() if cert.verdict == "fail" else None
    return ExperimentReport("2.4i", inputs, bounds.to_json(), outcomes, verdict, witness)


def check_24ii(rs: RelativeSimplicialCategory, bounds: Bounds) -> ExperimentReport:
    """The comparison map into the dimensionwise localization at a
    neglectable subobject must be a DK-equivalence."""
    bad = validate_relscat(rs)
    if bad:
        raise InputError(f"invalid relative simplicial category: {bad[0]}")
    inputs = _describe({"objects": list(rs.ambient.objects),
                        "truncation": rs.ambient.truncation},
                       "claim-24ii-input")
    outcomes = []
    try:
        neglectable, witness = is_neglectable(rs)
    except (CompositionUnavailable, ConsistencyError) as exc:
        return ExperimentReport("2.4ii", inputs, bounds.to_json(),
                                [{"check": "neglectability", "result": "undetermined"}],
                                "undetermined", str(exc))
    outcomes.append({"check": "sub neglectable", "result": "yes" if neglectable else "no"})
    if not neglectable:
        return ExperimentReport("2.4ii", inputs, bounds.to_json(), outcomes,
                                "inapplicable", list(witness))

    rsloc = hammock_localization_relscat(rs, bounds.truncation, bounds.width)
    outcomes.append({"check": "localization stability", "result": rsloc.verdict})
    fun = embed_relscat(rs, rsloc)
    bad = validate_simplicial_functor(fun)
    if bad:
        raise ConsistencyError(f"comparison map invalid: {bad[0]}")
    cert = check_dk(fun, bounds.dk_budget)
    outcomes.append({"check": "DK certificate", "result": cert.verdict})

    if cert.verdict == "fail":
        verdict = "fail"
    elif cert.verdict == "undetermined" or rsloc.verdict != "stable":
        verdict = "undetermined"
    else:
        verdict = "pass"
    witness = cert.to_json() if cert.verdict == "fail" else None
    return ExperimentReport("2.4ii", inputs, bounds.to_json(), outcomes, verdict, witness)


def check_roundtrip(r: RelativeCategory, bounds: Bounds) -> ExperimentReport:
    """Compare the homotopy categories of a relative category, of its
    flattened localization with the image of the weak equivalences
    adjoined, and of the flattened localization itself.

    The comparison is at component level by design: the flattening of a
    width-bounded localization cannot represent all composites (the exact
    flattening is infinite), so the re-localized stages are approximations
    whose stability verdicts are recorded as caveats rather than gates."""
    bad = validate_relative(r)
    if bad:
        raise InputError(f"invalid relative category: {bad[0]}")
    inputs = _describe(r.to_json(), "relcat")
    outcomes = []

    loc = hammock_localization(r, bounds.truncation, bounds.width)
    outcomes.append({"check": "localization stability", "result": loc.verdict})

    fl = flatten(loc.scat())
    outcomes.append({"check": "flattening overflows", "result": str(fl.overflows)})
    unit = relativization_unit(r, loc, fl)
    bad = validate_relative_functor(unit)
    outcomes.append({"check": "unit functor valid", "result": "no" if bad else "yes"})
    middle = unit.target

    try:
        loc_mid = hammock_localization(middle, bounds.truncation, bounds.width, detail="pi0")
        loc_flat = hammock_localization(fl.rel, bounds.truncation, bounds.width, detail="pi0")
        outcomes.append({"check": "relocalization(middle) stability (approximation caveat)",
                         "result": loc_mid.verdict})
        outcomes.append({"check": "relocalization(flattening) stability (approximation caveat)",
                         "result": loc_flat.verdict})
        ho_input, _ = homotopy_category_of_localization(loc)
        ho_middle, _ = homotopy_category_of_localization(loc_mid)
        ho_flat, _ = homotopy_category_of_localization(loc_flat)
    except (CompositionUnavailable, ConsistencyError) as exc:
        return ExperimentReport("3.1", inputs, bounds.to_json(),
                                outcomes + [{"check": "component categories", "result": "undetermined"}],
                                "undetermined", str(exc))

    first = find_equivalence(ho_input, ho_middle, bounds.equiv_budget)
    outcomes.append({"check": "Ho(input) ~ Ho(middle)", "result": first.status})
    second = find_equivalence(ho_flat, ho_middle, bounds.equiv_budget)
    outcomes.append({"check": "Ho(flattening) ~ Ho(middle)", "result": second.status})

    if first.status == "none" or second.status == "none":
        verdict = "fail"
        witness = "no equivalence of component categories exists"
    elif first.status == "undetermined" or second.status == "undetermined":
        verdict = "undetermined"
        witness = "equivalence search budget exhausted"
    elif loc.verdict != "stable":
        verdict = "undetermined"
        witness = "input localization is width-limited"
    else:
        verdict = "pass"
        witness = None
    return ExperimentReport("3.1", inputs, bounds.to_json(), outcomes, verdict, witness)


def check_32(r: RelativeCategory, bounds: Bounds) -> ExperimentReport:
    """The localization comparison map from a localization into the
    dimensionwise localization of itself at the image of the weak
    equivalences must be a DK-equivalence."""
    bad = validate_relative(r)
    if bad:
        raise InputError(f"invalid relative category: {bad[0]}")
    inputs = _describe(r.to_json(), "relcat")
    outcomes = []

    loc = hammock_localization(r, bounds.truncation, bounds.width)
    outcomes.append({"check": "localization stability", "result": loc.verdict})
    rs = RelativeSimplicialCategory(loc.scat(), _embedded_sub(r, loc.scat(), r.weq))
    try:
        neglectable, witness = is_neglectable(rs)
    except (CompositionUnavailable, ConsistencyError) as exc:
        return ExperimentReport("3.2", inputs, bounds.to_json(),
                                outcomes + [{"check": "neglectability", "result": "undetermined"}],
                                "undetermined", str(exc))
    outcomes.append({"check": "image of weq neglectable", "result": "yes" if neglectable else "no"})
    if not neglectable:
        # inverting the weak equivalences must make them neglectable; a
        # failure here is a width artifact, not a refutation
        return ExperimentReport("3.2", inputs, bounds.to_json(), outcomes,
                                "undetermined", list(witness))

    rsloc = hammock_localization_relscat(rs, bounds.truncation, bounds.width)
    outcomes.append({"check": "relocalization stability (approximation caveat)",
                     "result": rsloc.verdict})
    fun = embed_relscat(rs, rsloc)
    bad = validate_simplicial_functor(fun)
    if bad:
        raise ConsistencyError(f"comparison map invalid: {bad[0]}")
    cert = check_dk(fun, bounds.dk_budget)
    outcomes.append({"check": "DK certificate", "result": cert.verdict})

    # the relocalized stage is doubly approximate (it localizes data that
    # is itself width-bounded); its verdict is reported above but the gate
    # is the certificate over the stable primary localization
    if cert.verdict == "fail":
        verdict = "fail"
    elif cert.verdict == "undetermined" or loc.verdict != "stable":
        verdict = "undetermined"
    else:
        verdict = "pass"
    witness = cert.to_json() if cert.verdict == "fail" else None
    return ExperimentReport("3.2", inputs, bounds.to_json(), outcomes, verdict, witness)


# --- natural weak equivalence search -----------------------------------------


def _all_relative_functors(source: RelativeCategory, target: RelativeCategory, budget):
    """Every weak-equivalence-preserving functor source -> target, by
    backtracking; stops raising _Exhausted when the budget runs out."""
    src, tgt = source.cat, target.cat
    found = []
    spent = [0]

    def spend():
        spent[0] += 1
        if spent[0] > budget:
            raise _SearchBudget

    def object_maps(k, omap):
        if k == len(src.objects):
            yield dict(omap)
            return
        x = src.objects[k]
        for y in tgt.objects:
            spend()
            omap[x] = y
            yield from object_maps(k + 1, omap)
            del omap[x]

    for omap in object_maps(0, {}):
        mmap = {}
        for x in src.objects:
            mmap[src.identity[x]] = tgt.identity[omap[x]]
        order = [m for m in src.morphisms if m not in mmap]

        def assign(k):
            if k == len(order):
                fun = CatFunctor(src, tgt, dict(omap), dict(mmap))
                rf = RelativeFunctor(fun, source, target)
                if not validate_relative_functor(rf):
                    found.append(rf)
                return
            m = order[k]
            for t in tgt.hom(omap[src.dom[m]], omap[src.cod[m]]):
                spend()
                if m in source.weq and t not in target.weq:
                    continue
                mmap[m] = t
                ok = True
                for n, nv in list(mmap.items()):
                    for a, b, av, bv in ((m, n, t, nv), (n, m, nv, t)):
                        if src.cod[b] == src.dom[a]:
                            comp = src.table[(a, b)]
                            if comp in mmap and mmap[comp] != tgt.table[(av, bv)]:
                                ok = False
                if ok:
                    assign(k + 1)
                del mmap[m]

        assign(0)
    return found


class _SearchBudget(Exception):
    pass


def _weq_transformation_exists(source, target, f: RelativeFunctor, g: RelativeFunctor, budget_cell):
    """Is there a natural transformation f => g with every component a
    weak equivalence?"""
    src, tgt = source.cat, target.cat
    objs = src.objects

    def candidates(x):
        return [
            w for w in tgt.hom(f.underlying.object_map[x], g.underlying.object_map[x])
            if w in target.weq
        ]

    def assign(k, eta):
        if k == len(objs):
            return True
        x = objs[k]
        for w in candidates(x):
            budget_cell[0] += 1
            if budget_cell[0] > budget_cell[1]:
                raise _SearchBudget
            eta[x] = w
            ok = True
            for m in src.morphisms:
                a, b = src.dom[m], src.cod[m]
                if a in eta and b in eta:
                    lhs = tgt.table[(eta[b], f.underlying.morphism_map[m])]
                    rhs = tgt.table[(g.underlying.morphism_map[m], eta[a])]
                    if lhs != rhs:
                        ok = False
                        break
            if ok and assign(k + 1, eta):
                return True
            del eta[x]
        return False

    return assign(0, {})


def naturally_weakly_equivalent(f: RelativeFunctor, g: RelativeFunctor,
                                zigzag_bound: int = 3, budget: int = 200_000):
    """Breadth-first search for a finite zigzag of natural weak
    equivalences connecting two relative functors."""
    if f.source != g.source or f.target != g.target:
        raise InputError("functors must share source and target")
    for name, fun in (("f", f), ("g", g)):
        bad = validate_relative_functor(fun)
        if bad:
            raise InputError(f"{name} is not a relative functor: {bad[0]}")

    def key(rf):
        return (tuple(sorted(rf.underlying.object_map.items())),
                tuple(sorted(rf.underlying.morphism_map.items())))

    if key(f) == key(g):
        return {"status": "found", "length": 0, "chain": [key(f)]}

    try:
        functors = _all_relative_functors(f.source, f.target, budget)
    except _SearchBudget:
        return {"status": "not-found-within-bounds", "reason": "functor enumeration budget"}
    by_key = {key(rf): rf for rf in functors}
    by_key.setdefault(key(f), f)
    by_key.setdefault(key(g), g)

    budget_cell = [0, budget]
    frontier = [key(f)]
    seen = {key(f): [key(f)]}
    try:
        for _ in range(zigzag_bound):
            fresh = []
            for current in frontier:
                for other in by_key:
                    if other in seen:
                        continue
                    cf, co = by_key[current], by_key[other]
                    linked = (
                        _weq_transformation_exists(f.source, f.target, cf, co, budget_cell)
                        or _weq_transformation_exists(f.source, f.target, co, cf, budget_cell)
                    )
                    if linked:
                        seen[other] = seen[current] + [other]
                        if other == key(g):
                            return {"status": "found",
                                    "length": len(seen[other]) - 1,
                                    "chain": list(seen[other])}
                        fresh.append(other)
            frontier = fresh
            if not frontier:
                break
    except _SearchBudget:
        return {"status": "not-found-within-bounds", "reason": "transformation budget"}
    return {"status": "not-found-within-bounds", "reason": "no zigzag within bounds"}
