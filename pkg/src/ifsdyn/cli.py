"""Command-line interface: ``ifsdyn <command> ...``.

System files are JSON objects::

    {"maps": [{"kind": "affine", "a": "7/10", "b": "0"},
              {"kind": "affine", "a": "7/10", "b": "3/10"}],
     "q": "1/2", "variant": "plus", "label": "U 7/10"}

Exit status is 0 on success, 1 on domain errors (failed validation, no
certifiable root, incompatible systems) and 2 on usage errors.
"""

import argparse
import csv
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import kneading, picture, symbolic, transform
from .errors import DepthError, IFSError, NoRootFound, NotCertified
from .maps import (MaskedSystem, MonotoneMap, OverlappingIFS, Variant, as_rational,
                   format_rational, validate)

ROOT_CAVEAT = ("the smallest zero of the kneading series is only known to exist for "
               "affine systems with equal slopes; for other maps its absence is a "
               "legitimate outcome")


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    """Carries a JSON payload to print before exiting with status 1."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "domain error"))
        self.payload = payload


def _emit(obj, out):
    json.dump(obj, out, indent=2)
    out.write("\n")


def load_system(path, q=None, variant=None, check=True):
    """Parse a system file into ``(MaskedSystem, label)``.

    ``q`` and ``variant`` override the file.  With ``check`` the axioms are
    validated first and a failure raises :class:`DomainFailure`.
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read system file {path}: {exc}") from None
    if not isinstance(data, dict) or len(data.get("maps", ())) != 2:
        raise UsageError(f"{path}: expected an object with two entries under 'maps'")
    try:
        f0, f1 = (MonotoneMap.from_dict(m) for m in data["maps"])
    except (IFSError, ValueError, TypeError) as exc:
        raise DomainFailure({"file": str(path), "error": str(exc)}) from None
    ifs = OverlappingIFS(f0, f1)
    if check:
        report = validate(ifs)
        if not report.ok:
            raise DomainFailure({"file": str(path), "error": "validation failed",
                                 "validation": report.to_dict()})
    q = data.get("q") if q is None else q
    if q is None:
        raise UsageError(f"{path}: no mask point given (set 'q' or pass --q)")
    variant = data.get("variant", "plus") if variant is None else variant
    try:
        system = MaskedSystem(ifs, as_rational(q), Variant.parse(variant))
    except (IFSError, ValueError) as exc:
        raise DomainFailure({"file": str(path), "error": str(exc)}) from None
    return system, data.get("label", Path(path).stem)


def _system(args, path=None, q=None):
    return load_system(path or args.system, q if q is not None else args.q,
                       getattr(args, "variant", None))


def _period(itin) -> Optional[dict]:
    if itin.period is None:
        return None
    return {"preperiod": itin.period.preperiod, "length": itin.period.length}


# -- commands -----------------------------------------------------------------

def cmd_validate(args, out):
    try:
        data = json.loads(Path(args.system).read_text())
        f0, f1 = (MonotoneMap.from_dict(m) for m in data["maps"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read system file {args.system}: {exc}") from None
    except IFSError as exc:
        raise DomainFailure({"file": args.system, "error": str(exc)}) from None
    report = validate(OverlappingIFS(f0, f1))
    payload = report.to_dict()
    q = args.q if args.q is not None else data.get("q")
    if q is not None and report.ok:
        lo, hi = OverlappingIFS(f0, f1).overlap
        qv = as_rational(q)
        payload["mask_point"] = {"q": format_rational(qv), "in_overlap": lo < qv < hi}
        if not lo < qv < hi:
            raise DomainFailure(payload)
    if not report.ok:
        raise DomainFailure(payload)
    _emit(payload, out)


def cmd_itinerary(args, out):
    system, label = _system(args)
    itin = symbolic.itinerary(system, args.x, args.depth)
    _emit({"label": label, "x": format_rational(as_rational(args.x)),
           "variant": system.variant.value, "depth": args.depth,
           "itinerary": itin.prefix, "period": _period(itin),
           "mask_hits": sorted(itin.mask_hits)}, out)


def cmd_critical(args, out):
    system, label = _system(args)
    crit = symbolic.critical_itineraries(system.ifs, system.q, args.depth)
    _emit({"label": label, "q": format_rational(system.q), "depth": args.depth,
           "alpha": crit.alpha.prefix, "alpha_period": _period(crit.alpha),
           "beta": crit.beta.prefix, "beta_period": _period(crit.beta)}, out)


def _entropy(system, args):
    try:
        return kneading.entropy(system.ifs, system.q, args.depth, args.tol)
    except NoRootFound as exc:
        raise DomainFailure({"error": str(exc), "evidence": exc.evidence,
                             "caveat": ROOT_CAVEAT}) from None


def cmd_entropy(args, out):
    system, label = _system(args)
    result = _entropy(system, args)
    payload = {"label": label, "q": format_rational(system.q), "depth": args.depth,
               "precision_bits": kneading.precision_bits()}
    payload.update(result.to_dict())
    if not result.guaranteed:
        payload["caveat"] = ROOT_CAVEAT
    _emit(payload, out)


def cmd_conjugate(args, out):
    system, label = _system(args)
    result = _entropy(system, args)
    try:
        uniform = kneading.uniform_from_result(result)
    except NotCertified as exc:
        raise DomainFailure({"error": str(exc), "evidence": result.root.evidence,
                             "caveat": ROOT_CAVEAT}) from None
    n = min(args.replay, args.depth)
    report = kneading.replay_critical(uniform, result.critical, n)
    _emit({"label": label, "precision_bits": kneading.precision_bits(),
           "a": format_rational(uniform.a), "p": format_rational(uniform.p),
           "a_lo": format_rational(uniform.a_enclosure[0]),
           "a_hi": format_rational(uniform.a_enclosure[1]),
           "p_lo": format_rational(uniform.p_enclosure[0]),
           "p_hi": format_rational(uniform.p_enclosure[1]),
           "guaranteed": result.guaranteed,
           "replay": {"symbols": n, "matches": report.matches,
                      "mismatches": report.mismatches,
                      "indeterminate": report.indeterminate}}, out)


def cmd_count(args, out):
    system, _ = _system(args)
    if args.max_len < 1:
        raise UsageError("--max-len must be at least 1")
    if args.oracle and args.max_len > 18:
        raise UsageError("--oracle enumerates 2**(n+1) words; use --max-len <= 18")
    crit = symbolic.critical_itineraries(system.ifs, system.q, max(args.depth, args.max_len + 1))
    counts = symbolic.count_words(crit, args.max_len)
    writer = csv.writer(out, lineterminator="\n")
    header = ["n", "count", "slope_estimate", "ratio_estimate"]
    if args.oracle:
        header.append("oracle")
    writer.writerow(header)
    for n, c in enumerate(counts):
        row = [n, c, "", ""]
        if n >= 1:
            est = symbolic.entropy_estimate(counts[:n + 1], args.window)
            row[2:] = [f"{est.slope_estimate:.12f}", f"{est.ratio_estimate:.12f}"]
        if args.oracle:
            row.append(len(symbolic.brute_force_words(crit, system.variant, n)))
        writer.writerow(row)


def _points(args) -> list:
    if args.x:
        return [as_rational(x) for x in args.x]
    if args.random:
        rng = random.Random(args.seed)
        return sorted(Fraction(rng.randrange(args.grid), args.grid - 1)
                      for _ in range(args.random))
    return [Fraction(i, args.grid - 1) for i in range(args.grid)]


def cmd_transform(args, out):
    F, _ = _system(args, args.source)
    G, _ = _system(args, args.target, args.p)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    rows = []
    for x in _points(args):
        enc = transform.fractal_transform(F, G, x, args.depth)
        rows.append({"x": format_rational(x), **enc.to_dict(),
                     "mid": float(enc.mid), "width": float(enc.width)})
    _emit({"depth": args.depth, "points": rows}, out)


def cmd_check_homeo(args, out):
    F, _ = _system(args, args.source)
    G, _ = _system(args, args.target, args.p)
    verdict = transform.check_homeomorphism(F, G, args.depth)
    _emit(verdict.to_dict(), out)


def cmd_warp(args, out):
    fx, _ = _system(args, args.fx)
    gx, _ = _system(args, args.gx)
    fy = _system(args, args.fy)[0] if args.fy else None
    gy = _system(args, args.gy)[0] if args.gy else None
    if (fy is None) != (gy is None):
        raise UsageError("--fy and --gy must be given together")
    raster = picture.read_pnm(args.image)
    warped = picture.warp_image(raster, fx, gx, fy, gy, args.depth)
    picture.write_pnm(args.output, warped)
    height, width = warped.shape[:2]
    _emit({"output": args.output, "width": width, "height": height,
           "depth": args.depth}, out)


# -- parser -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ifsdyn", description="Dynamics of overlapping two-map IFS on [0,1].")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for any random sampling (default 0)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def system_cmd(name, func, help_text, depth=None):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("system", help="system JSON file")
        p.add_argument("--q", help="mask point, overrides the file")
        p.add_argument("--variant", choices=["plus", "minus"], help="overrides the file")
        if depth is not None:
            p.add_argument("--depth", type=int, default=depth)
        p.set_defaults(func=func)
        return p

    def pair_cmd(name, func, help_text, depth):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("source", help="system file F")
        p.add_argument("target", help="system file G")
        p.add_argument("--q", help="mask point of F, overrides the file")
        p.add_argument("--p", help="mask point of G, overrides the file")
        p.add_argument("--variant", choices=["plus", "minus"])
        p.add_argument("--depth", type=int, default=depth)
        p.set_defaults(func=func)
        return p

    system_cmd("validate", cmd_validate, "check the IFS axioms")
    p = system_cmd("itinerary", cmd_itinerary, "itinerary of a point", kneading.DEFAULT_DEPTH)
    p.add_argument("--x", required=True, help="rational point in [0,1]")
    system_cmd("critical", cmd_critical, "critical itineraries", kneading.DEFAULT_DEPTH)
    for name, func, help_text in (("entropy", cmd_entropy, "topological entropy"),
                                  ("conjugate", cmd_conjugate, "conjugate uniform system")):
        p = system_cmd(name, func, help_text, kneading.DEFAULT_DEPTH)
        p.add_argument("--tol", help="root enclosure width (rational)")
    p.add_argument("--replay", type=int, default=64, help="symbols to replay")
    p = system_cmd("count", cmd_count, "admissible word counts as CSV", kneading.DEFAULT_DEPTH)
    p.add_argument("--max-len", type=int, default=30)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--oracle", action="store_true", help="add a brute-force count column")

    p = pair_cmd("transform", cmd_transform, "fractal transform F -> G", 48)
    p.add_argument("--x", action="append", help="point to map (repeatable)")
    p.add_argument("--grid", type=int, default=11, help="uniform grid size")
    p.add_argument("--random", type=int, default=0,
                   help="sample this many grid points at random (uses --seed)")
    pair_cmd("check-homeo", cmd_check_homeo, "compare critical itineraries",
             kneading.DEFAULT_DEPTH)

    p = sub.add_parser("warp", help="warp a PGM/PPM image")
    p.add_argument("image")
    p.add_argument("--fx", required=True)
    p.add_argument("--gx", required=True)
    p.add_argument("--fy")
    p.add_argument("--gy")
    p.add_argument("--q", help=argparse.SUPPRESS)
    p.add_argument("--variant", choices=["plus", "minus"])
    p.add_argument("--depth", type=int, default=48)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_warp)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        random.seed(args.seed)
        args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except DomainFailure as exc:
        _emit(exc.payload, out)
        return 1
    except DepthError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except (IFSError, ValueError) as exc:
        _emit({"error": str(exc), "type": type(exc).__name__}, out)
        return 1
    return 0


def main(argv=None) -> int:
    sys.exit(run(argv))
