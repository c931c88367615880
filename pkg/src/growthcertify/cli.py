"""Command-line front end.

Subcommands and exit codes::

    certify SPEC [--law L] [--verify-radius R]   0 FreeBasis, 10 LawCertificate
    growth SPEC --radius R [--cap N] [--csv F]   0 complete, 11 partial (cap hit)
    fold --rank N WORD...                        0
    law compose OUTER INNER                      0
    law eval LAW --rank N WORD...                0
    law check SPEC --law L [--radius R]          0 holds, 12 counterexample

Any error exits 1 with a diagnostic on stderr.  Reports go to stdout as
JSON (see docs/report.schema.json).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field

from .certify import (
    FreeBasis,
    law_certify_general,
    law_to_dict,
    two_free_certify,
)
from .errors import ElementCapExceeded, GrowthCertifyError, SpecError
from .extension import ExtensionGroup, GeneratingSet, TrackedRealization, make_automorphism
from .growth import entropy_bounds, subadditivity_check
from .laws import (
    FreeGroupRealization,
    check_law_on_ball,
    compose_laws,
    eval_law,
    parse_law,
)
from .stallings import build_graph, classify
from .words import Word, format_word, parse_word

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_LAW = 10
EXIT_PARTIAL = 11
EXIT_COUNTEREXAMPLE = 12


@dataclass
class GroupSpec:
    group: ExtensionGroup
    generators: GeneratingSet
    laws: list = field(default_factory=list)


def _word(text, rank, where):
    if not isinstance(text, str):
        raise SpecError(where, f"expected a word string, got {type(text).__name__}")
    try:
        return parse_word(text, rank)
    except GrowthCertifyError as exc:
        raise SpecError(where, str(exc)) from None


def spec_from_dict(doc: dict) -> GroupSpec:
    """Validate a group-spec document into an extension group and generating set."""
    if not isinstance(doc, dict):
        raise SpecError("<root>", "spec must be a JSON object")
    rank = doc.get("kernel_rank")
    if not isinstance(rank, int) or rank < 0:
        raise SpecError("kernel_rank", "must be a non-negative integer")
    auts = []
    for i, a in enumerate(doc.get("automorphisms", [])):
        where = f"automorphisms[{i}]"
        if not isinstance(a, dict):
            raise SpecError(where, "must be an object with images and inverse_images")
        for key in ("images", "inverse_images"):
            if not isinstance(a.get(key), list) or len(a[key]) != rank:
                raise SpecError(f"{where}.{key}", f"must list {rank} words")
        images = [_word(s, rank, f"{where}.images[{j}]") for j, s in enumerate(a["images"])]
        inverse = [_word(s, rank, f"{where}.inverse_images[{j}]") for j, s in enumerate(a["inverse_images"])]
        try:
            auts.append(make_automorphism(images, inverse))
        except GrowthCertifyError as exc:
            raise SpecError(where, str(exc)) from None
    try:
        E = ExtensionGroup(rank, auts)
    except GrowthCertifyError as exc:
        raise SpecError("automorphisms", str(exc)) from None
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise SpecError("generators", "must be a nonempty list")
    items = []
    for i, g in enumerate(gens):
        where = f"generators[{i}]"
        if not isinstance(g, dict) or not isinstance(g.get("name"), str) or not g["name"]:
            raise SpecError(f"{where}.name", "each generator needs a nonempty string name")
        if any(c.isspace() for c in g["name"]) or "^" in g["name"]:
            raise SpecError(f"{where}.name", "names may not contain whitespace or '^'")
        word = _word(g.get("word", ""), rank, f"{where}.word")
        shift = g.get("shift", [0] * E.d)
        if not isinstance(shift, list) or len(shift) != E.d or not all(isinstance(s, int) for s in shift):
            raise SpecError(f"{where}.shift", f"must be a list of {E.d} integers")
        items.append((g["name"], E.element(word, shift)))
    T = GeneratingSet(items)
    laws = []
    for i, s in enumerate(doc.get("laws", [])):
        try:
            laws.append(parse_law(s))
        except (GrowthCertifyError, TypeError) as exc:
            raise SpecError(f"laws[{i}]", str(exc)) from None
    return GroupSpec(E, T, laws)


def spec_to_dict(spec: GroupSpec) -> dict:
    E = spec.group
    n = E.kernel_rank
    return {
        "kernel_rank": E.kernel_rank,
        "automorphisms": [
            {
                "images": [format_word(Word(im, n)) for im in phi.images],
                "inverse_images": [format_word(Word(im, n)) for im in phi.inverse_images],
            }
            for phi in E.auts
        ],
        "generators": [
            {"name": name, "word": format_word(x.kernel_word), "shift": list(x.shift)}
            for name, x in spec.generators
        ],
        "laws": [str(law) for law in spec.laws],
    }


def load_spec(path: str) -> tuple[GroupSpec, str]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SpecError(path, exc.strerror or str(exc)) from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return spec_from_dict(doc), "sha256:" + hashlib.sha256(raw).hexdigest()


def _report(argv, digest, result, trace, started) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": list(argv),
        "input_digest": digest,
        "result": result,
        "trace": trace,
        "wall_clock_s": time.perf_counter() - started,
    }


def _cmd_certify(args, argv, started):
    spec, digest = load_spec(args.spec)
    if args.law:
        verdict, trace = law_certify_general(spec.group, spec.generators, parse_law(args.law), args.verify_radius)
    else:
        verdict, trace = two_free_certify(spec.group, spec.generators, args.verify_radius)
    report = _report(argv, digest, verdict.to_dict(), trace.summary(), started)
    return report, EXIT_OK if isinstance(verdict, FreeBasis) else EXIT_LAW


def _cmd_growth(args, argv, started):
    spec, digest = load_spec(args.spec)
    verdict = None
    if args.certify:
        verdict, _ = two_free_certify(spec.group, spec.generators)
    try:
        est = entropy_bounds(spec.group, spec.generators, args.radius, verdict, args.cap)
    except ElementCapExceeded as exc:
        census = exc.partial
        result = {
            "partial": True,
            "census": census.to_dict(),
            "subadditive": bool(subadditivity_check(census)),
            "message": str(exc),
        }
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(census.to_csv())
        return _report(argv, digest, result, None, started), EXIT_PARTIAL
    result = {"partial": False, **est.to_dict(), "subadditive": bool(subadditivity_check(est.census))}
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(est.census.to_csv())
    return _report(argv, digest, result, None, started), EXIT_OK


def _cmd_fold(args, argv, started):
    words = [parse_word(w, args.rank) for w in args.words]
    cls = classify(words, args.rank)
    result = {"class": cls.tag, "graph": build_graph(words, args.rank).to_text()}
    if cls.tag == "InfiniteCyclic":
        result.update(rank=1, basis=[format_word(cls.generator)])
    elif cls.tag == "NonAbelianFree":
        result.update(rank=cls.rank, basis=[format_word(b) for b in cls.basis])
    else:
        result.update(rank=0, basis=[])
    return _report(argv, None, result, None, started), EXIT_OK


def _cmd_law(args, argv, started):
    if args.law_cmd == "compose":
        law = compose_laws(parse_law(args.outer), parse_law(args.inner))
        return _report(argv, None, {"law": law_to_dict(law)}, None, started), EXIT_OK
    if args.law_cmd == "eval":
        law = parse_law(args.items[0])
        values = [parse_word(w, args.rank) for w in args.items[1:]]
        value = eval_law(law, values, FreeGroupRealization(args.rank))
        return _report(argv, None, {"value": format_word(value)}, None, started), EXIT_OK
    spec, digest = load_spec(args.spec)
    law = parse_law(args.law)
    R = TrackedRealization(spec.group, spec.generators)
    res = check_law_on_ball(R, R.generators(), law, args.radius)
    if res:
        result = {"holds": True, "ball_size": res.ball_size, "law": law_to_dict(law)}
        return _report(argv, digest, result, None, started), EXIT_OK
    result = {"holds": False, "counterexample": [str(x) for x in res.values], "law": law_to_dict(law)}
    return _report(argv, digest, result, None, started), EXIT_COUNTEREXAMPLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="growthcertify", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="free basis of T-length <= 6 or a law certificate")
    c.add_argument("spec")
    c.add_argument("--law", help="quotient law, e.g. 'x1^2 x2^2 X1^2 X2^2'")
    c.add_argument("--verify-radius", type=int, default=3)

    g = sub.add_parser("growth", help="exact ball census and entropy bounds")
    g.add_argument("spec")
    g.add_argument("--radius", type=int, required=True)
    g.add_argument("--cap", type=int, default=None, help="element cap (env GROWTHCERTIFY_CAP)")
    g.add_argument("--csv", help="also write the census as CSV to this path")
    g.add_argument("--certify", action="store_true", help="include the certified lower bound")

    f = sub.add_parser("fold", help="classify the subgroup generated by words")
    f.add_argument("--rank", type=int, required=True)
    f.add_argument("words", nargs="*")

    law = sub.add_parser("law", help="law algebra")
    lsub = law.add_subparsers(dest="law_cmd", required=True)
    lc = lsub.add_parser("compose")
    lc.add_argument("outer")
    lc.add_argument("inner")
    le = lsub.add_parser("eval")
    # one list so words may follow --rank: LAW WORD...
    le.add_argument("items", nargs="+", metavar="LAW_THEN_WORDS")
    le.add_argument("--rank", type=int, required=True)
    lk = lsub.add_parser("check")
    lk.add_argument("spec")
    lk.add_argument("--law", required=True)
    lk.add_argument("--radius", type=int, default=3)
    return p


COMMANDS = {"certify": _cmd_certify, "growth": _cmd_growth, "fold": _cmd_fold, "law": _cmd_law}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # `law eval LAW --rank N WORD...`: words after the option land in extra
        if extra and getattr(args, "law_cmd", None) == "eval" and not any(x.startswith("-") for x in extra):
            args.items.extend(extra)
        elif extra:
            parser.error("unrecognized arguments: " + " ".join(extra))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    started = time.perf_counter()
    try:
        report, code = COMMANDS[args.command](args, argv, started)
    except (GrowthCertifyError, ValueError) as exc:
        print(f"growthcertify: error: {exc}", file=stderr)
        return EXIT_ERROR
    json.dump(report, stdout, indent=2)
    stdout.write("\n")
    return code


def main() -> None:
    sys.exit(run())
