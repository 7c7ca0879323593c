"""Command-line front door.

Exit codes: 0 success/pass, 1 fail (claim violated or certificate
failed), 2 invalid input, 3 undetermined or width-limited.  Machine
output is canonical JSON on stdout (or --out), deterministically
byte-identical for identical inputs and bounds; --verbose sends per-pair
progress to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import CompositionUnavailable, ConsistencyError, InputError
from .fincat import FiniteCategory, validate_category
from .flatten import flatten
from .hammock import hammock_localization, homotopy_category_of_localization
from .jsonio import DiskCache, canonical_dumps, content_key, load_json
from .relcat import RelativeCategory, oracle_ho_category, validate_relative
from .scat import (
    RelativeSimplicialCategory,
    TruncatedSimplicialCategory,
    check_dk,
    is_neglectable,
    relscat_from_json,
    simplicial_functor_from_json,
    validate_relscat,
    validate_scat,
)
from .simplicial import TruncatedSimplicialSet, homology, pi0, validate_sset
from .verify import Bounds, check_24i, check_24ii, check_32, check_roundtrip

PASS, FAIL, INVALID, UNDETERMINED = 0, 1, 2, 3


def _sniff_kind(data) -> str:
    if not isinstance(data, dict):
        raise InputError("top-level JSON must be an object")
    if "homs" in data:
        return "relscat" if "sub" in data else "scat"
    if "levels" in data and "truncation" in data:
        return "sset"
    if "weq" in data:
        return "relcat"
    return "fincat"


def _emit(args, output, human=None):
    text = canonical_dumps(output)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
        if human:
            print(human)
    else:
        sys.stdout.write(text)


def _progress(args):
    if not args.verbose:
        return None

    def report(x, y, ms):
        print(f"pair ({x},{y}): {len(ms.vertices)} vertices, "
              f"{len(ms.partition.classes)} components, {ms.verdict}", file=sys.stderr)

    return report


def _cache(args):
    root = args.cache_dir or os.environ.get("HAMLOC_CACHE_DIR")
    return DiskCache(root) if root else None


def _cached(args, operation, payload, bounds, compute):
    """Run ``compute`` through the content-addressed cache; the envelope
    stores the exit code so hits reproduce byte-identical output."""
    cache = _cache(args)
    key = content_key(operation, payload, bounds, __version__)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            _emit(args, hit["output"], hit.get("human"))
            return hit["exit"]
    code, output, human = compute()
    if cache is not None:
        cache.put(key, {"exit": code, "output": output, "human": human},
                  operation, __version__)
    _emit(args, output, human)
    return code


def _load_relcat(path) -> RelativeCategory:
    data = load_json(path)
    r = RelativeCategory.from_json(data)
    bad = validate_category(r.cat) + validate_relative(r)
    if bad:
        raise InputError(f"invalid relative category: {bad[0]}")
    return r


def _cmd_validate(args):
    data = load_json(args.file)
    kind = _sniff_kind(data)
    if kind == "fincat":
        report = validate_category(FiniteCategory.from_json(data))
    elif kind == "relcat":
        r = RelativeCategory.from_json(data)
        report = validate_category(r.cat) + validate_relative(r)
    elif kind == "sset":
        report = validate_sset(TruncatedSimplicialSet.from_json(data))
    elif kind == "scat":
        report = validate_scat(TruncatedSimplicialCategory.from_json(data))
    else:
        rs = relscat_from_json(data)
        report = validate_scat(rs.ambient) + validate_relscat(rs)
    _emit(args, {"kind": kind, "violations": report},
          f"{kind}: {'ok' if not report else f'{len(report)} violation(s)'}")
    return PASS if not report else INVALID


def _cmd_localize(args):
    r = _load_relcat(args.file)
    pair_filter = None
    if args.pairs:
        pair_filter = set()
        for spec_pair in args.pairs:
            x, _, y = spec_pair.partition(",")
            if not y:
                raise InputError("--pairs takes X,Y")
            pair_filter.add((x, y))
    payload = {"input": load_json(args.file), "pairs": sorted(map(list, pair_filter)) if pair_filter else None}
    bounds = {"truncation": args.truncation, "width": args.width}

    def compute():
        loc = hammock_localization(r, args.truncation, args.width,
                                   pair_filter=pair_filter, progress=_progress(args))
        output = loc.to_json(include_compose=pair_filter is None)
        code = PASS if loc.verdict == "stable" else UNDETERMINED
        return code, output, f"localization: {loc.verdict}"

    return _cached(args, "localize", payload, bounds, compute)


def _cmd_ho(args):
    r = _load_relcat(args.file)
    payload = load_json(args.file)
    bounds = {"truncation": args.truncation, "width": args.width}

    def compute():
        loc = hammock_localization(r, args.truncation, args.width, progress=_progress(args))
        try:
            cat, _ = homotopy_category_of_localization(loc)
        except (CompositionUnavailable, ConsistencyError) as exc:
            return UNDETERMINED, {"error": str(exc), "bounds": loc.bounds_json()}, str(exc)
        output = cat.to_json()
        output["bounds"] = loc.bounds_json()
        code = PASS if loc.verdict == "stable" else UNDETERMINED
        return code, output, f"homotopy category: {len(cat.morphisms)} morphisms, {loc.verdict}"

    return _cached(args, "ho", payload, bounds, compute)


def _cmd_oracle_ho(args):
    r = _load_relcat(args.file)
    payload = load_json(args.file)
    bounds = {"max_len": args.max_len}

    def compute():
        result = oracle_ho_category(r, args.max_len)
        classes = {
            f"{x}|{y}": [
                [".".join(f"{d}:{m}" for (d, m) in w) for w in sorted(cls)]
                for cls in hs.classes
            ]
            for (x, y), hs in sorted(result.pair_homsets.items())
        }
        output = {
            "max_len": args.max_len,
            "determined": result.status == "ok",
            "classes": classes,
        }
        if result.status == "ok":
            output["category"] = result.category.to_json()
            return PASS, output, "oracle: determined"
        return UNDETERMINED, output, "oracle: undetermined"

    return _cached(args, "oracle-ho", payload, bounds, compute)


def _cmd_nerve(args):
    data = load_json(args.file)
    c = FiniteCategory.from_json(data)
    bad = validate_category(c)
    if bad:
        raise InputError(f"invalid category: {bad[0]}")
    from .simplicial import nerve

    _emit(args, nerve(c, args.truncation).to_json())
    return PASS


def _cmd_pi0(args):
    x = TruncatedSimplicialSet.from_json(load_json(args.file))
    bad = validate_sset(x)
    if bad:
        raise InputError(f"invalid simplicial set: {bad[0]}")
    part = pi0(x)
    _emit(args, {"classes": [sorted(cls) for cls in part.classes]},
          f"{len(part.classes)} component(s)")
    return PASS


def _cmd_homology(args):
    x = TruncatedSimplicialSet.from_json(load_json(args.file))
    bad = validate_sset(x)
    if bad:
        raise InputError(f"invalid simplicial set: {bad[0]}")
    _emit(args, homology(x).to_json())
    return PASS


def _cmd_flatten(args):
    data = load_json(args.file)
    a = TruncatedSimplicialCategory.from_json(data)
    bad = validate_scat(a)
    if bad:
        raise InputError(f"invalid simplicial category: {bad[0]}")
    result = flatten(a)
    output = result.rel.to_json()
    output["provenance"] = {
        "source_hash": content_key("scat", data),
        "truncation": result.source_truncation,
        "overflows": result.overflows,
    }
    _emit(args, output, f"flattening: {len(result.rel.cat.morphisms)} morphisms")
    return PASS


def _cmd_dk_check(args):
    data = load_json(args.file)
    base = Path(args.file).parent

    def resolve(ref):
        if isinstance(ref, str):
            return load_json(base / ref)
        return ref

    source = TruncatedSimplicialCategory.from_json(resolve(data["source"]))
    target = TruncatedSimplicialCategory.from_json(resolve(data["target"]))
    fun = simplicial_functor_from_json(data, source, target)
    cert = check_dk(fun, args.budget)
    _emit(args, cert.to_json(), f"certificate: {cert.verdict}")
    if cert.verdict == "pass_partial":
        return PASS
    if cert.verdict == "fail":
        return FAIL
    return UNDETERMINED


def _cmd_neglectable(args):
    rs = relscat_from_json(load_json(args.file))
    bad = validate_scat(rs.ambient) + validate_relscat(rs)
    if bad:
        raise InputError(f"invalid relative simplicial category: {bad[0]}")
    ok, witness = is_neglectable(rs)
    _emit(args, {"neglectable": ok, "witness": list(witness) if witness else None},
          f"neglectable: {ok}")
    return PASS if ok else FAIL


_VERDICT_EXIT = {"pass": PASS, "fail": FAIL, "inapplicable": INVALID, "undetermined": UNDETERMINED}


def _cmd_verify(args):
    data = load_json(args.file)
    bounds = Bounds(truncation=args.truncation, width=args.width,
                    equiv_budget=args.equiv_budget, dk_budget=args.dk_budget)

    def compute():
        if args.claim == "2.4i":
            c = FiniteCategory.from_json(data["category"])
            report = check_24i(c, data["u"], data["v"], bounds)
        elif args.claim == "2.4ii":
            report = check_24ii(relscat_from_json(data), bounds)
        elif args.claim == "3.1":
            r = RelativeCategory.from_json(data)
            report = check_roundtrip(r, bounds)
        else:
            r = RelativeCategory.from_json(data)
            report = check_32(r, bounds)
        return _VERDICT_EXIT[report.verdict], report.to_json(), report.render()

    return _cached(args, f"verify-{args.claim}", data, bounds.to_json(), compute)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamloc",
        description="Hammock localization, flattening and DK-equivalence "
                    "certificates for finite relative categories.",
    )
    parser.add_argument("--cache-dir", default=None,
                        help="content-addressed cache directory "
                             "(default: $HAMLOC_CACHE_DIR)")
    parser.add_argument("--verbose", action="store_true",
                        help="per-pair progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="write machine JSON here")

    p = sub.add_parser("validate", help="validate a JSON artifact")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("localize", help="hammock localization of a relative category")
    p.add_argument("file")
    p.add_argument("--truncation", type=int, default=2)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--pairs", action="append", default=None, metavar="X,Y")
    common(p)

    p = sub.add_parser("ho", help="homotopy category of the localization")
    p.add_argument("file")
    p.add_argument("--truncation", type=int, default=1)
    p.add_argument("--width", type=int, required=True)
    common(p)

    p = sub.add_parser("oracle-ho", help="localized hom-sets by word rewriting")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, default=8)
    common(p)

    p = sub.add_parser("nerve", help="nerve of a finite category")
    p.add_argument("file")
    p.add_argument("--truncation", type=int, default=2)
    common(p)

    p = sub.add_parser("pi0", help="components of a simplicial set")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("homology", help="normalized integral homology")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("flatten", help="flatten a simplicial category")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("dk-check", help="DK-equivalence certificate for a functor")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=2_000_000)
    common(p)

    p = sub.add_parser("neglectable", help="neglectability of a marked subobject")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("verify", help="run a claim verification pipeline")
    p.add_argument("claim", choices=["2.4i", "2.4ii", "3.1", "3.2"])
    p.add_argument("file")
    p.add_argument("--truncation", type=int, default=1)
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--equiv-budget", type=int, default=2_000_000)
    p.add_argument("--dk-budget", type=int, default=2_000_000)
    common(p)

    return parser


_COMMANDS = {
    "validate": _cmd_validate,
    "localize": _cmd_localize,
    "ho": _cmd_ho,
    "oracle-ho": _cmd_oracle_ho,
    "nerve": _cmd_nerve,
    "pi0": _cmd_pi0,
    "homology": _cmd_homology,
    "flatten": _cmd_flatten,
    "dk-check": _cmd_dk_check,
    "neglectable": _cmd_neglectable,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INVALID
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INVALID
    except (CompositionUnavailable, ConsistencyError) as exc:
        print(f"bounds insufficient: {exc}", file=sys.stderr)
        return UNDETERMINED


def main() -> None:
    sys.exit(run())
