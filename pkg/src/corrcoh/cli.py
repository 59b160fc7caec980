"""Command-line front end.

    corrcoh homology FILES --y Y --x X --m M
    corrcoh homotopy FILES --f F --g G --m M
    corrcoh verify [--seed S] [--sign-bug]
    corrcoh distance FILES --y Y --z Z --m M [--variant two_point|one_point]

Exit codes: 0 success, 1 failed lemma or other model error, 2 parse error,
3 enumeration cap exceeded, 4 undecided.
"""

import argparse
import sys
from dataclasses import dataclass

from . import homology as H
from . import persist as P
from . import report
from .errors import (CorrError, EnumerationCapExceeded, ParseError, SearchBoundExceeded,
                     UndecidedClassEquality)
from .model import DEFAULT_ENUMERATION_CAP
from .parse import parse_files
from .verify import DEFAULT_SEED, run_suite

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_UNDECIDED = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    flavor: str = "S"
    order_cap: int = 4
    degree_cap: int = 2
    class_bound: int = 3
    output: str = "table"
    seed: int = DEFAULT_SEED
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP

    def __post_init__(self):
        if self.flavor not in ("S", "J"):
            raise ValueError("flavor must be S or J")
        for k in ("order_cap", "degree_cap", "class_bound", "enumeration_cap"):
            if getattr(self, k) < 1:
                raise ValueError(f"{k} must be >= 1")
        if self.output not in ("table", "json"):
            raise ValueError("output must be table or json")

    def caps(self):
        return {"flavor": self.flavor, "order_cap": self.order_cap, "degree_cap": self.degree_cap,
                "class_bound": self.class_bound, "enumeration_cap": self.enumeration_cap}


def _lookup(table, key, what):
    if key not in table:
        raise CorrError(f"no {what} named {key!r}; known: {', '.join(sorted(table)) or 'none'}")
    return table[key]


def cmd_homology(files, y, x, m, config):
    models = parse_files(files)
    Y, X = models.space(y), models.space(x)
    M = _lookup(models.marked, m, "marked space")
    c = H.CubicalComplex(config.flavor, Y, X, M, config.degree_cap, config.order_cap,
                         config.class_bound, config.enumeration_cap)
    groups = []
    for n in range(config.degree_cap):
        g = c.cohomology(n)
        groups.append({"degree": n, "text": str(g), **g.as_dict()})
    result = {"ranks": c.ranks(), "groups": groups, "Y": Y.id, "X": X.id, "M": M.id}
    if config.flavor == "S" and c.ranks()[0] == 0:
        result["note"] = "SC = 0: no S correspondence meets the weight condition"
    caps = {**config.caps(), "cohomology_degrees": f"0..{config.degree_cap - 1}"}
    return report.make("homology", "ok", caps, result)


def cmd_homotopy(files, f, g, m, config):
    models = parse_files(files)
    F = _lookup(models.corrs, f, "correspondence")
    G = _lookup(models.corrs, g, "correspondence")
    M = _lookup(models.marked, m, "marked space")
    v = H.homotopic(F, G, M, config.order_cap, config.class_bound, config.enumeration_cap)
    result = {"verdict": v.verdict, "F": f, "G": g, "M": M.id}
    if v.witness is not None:
        result["witness"] = [f"{c:+d} x {s.describe()}".replace("\n", "; ") for c, s in v.witness.terms()]
    status = "undecided" if v.verdict == "undecided" else "ok"
    return report.make("homotopy", status, {**config.caps(), "flavor": F.flavor}, result)


def cmd_verify(config, sign_bug=False):
    results = run_suite(config.seed, sign_bug=sign_bug)
    caps = {"seed": config.seed, "sign_bug": "on" if sign_bug else "off"}
    status = "ok" if all(r.ok for r in results) else "fail"
    return report.make("verify", status, caps, {"lemmas": [r.as_dict() for r in results]})


def _certificate(cert):
    if cert is None:
        return None
    hom = cert["homotopy"] or {}
    return {
        "map": _lines(cert["map"].describe()),
        "level": str(cert["level"]),
        "empty_components_land_in": {str(k): int(v) for k, v in sorted((cert.get("placement") or {}).items())},
        "homotopy": {str(n): _lines(hom[n].describe()) for n in sorted(hom) if hom[n].entries},
    }


def _lines(text):
    return [line.strip() for line in text.splitlines() if line.strip()]


def cmd_distance(files, y, z, m, config, variant="two_point"):
    models = parse_files(files)
    Y, Z = models.space(y), models.space(z)
    M = _lookup(models.marked, m, "marked space")
    d = P.distance(Y, Z, M, variant, config.order_cap, config.degree_cap, config.enumeration_cap)
    result = {
        "value": d.value_str(),
        "certificate": {k: _certificate(v) for k, v in d.certificate.items()},
        "Y": Y.id, "Z": Z.id, "M": M.id, "variant": variant,
    }
    status = "undecided" if d.undecided else "ok"
    caps = {**config.caps(), "flavor": "S", "variant": variant}
    return report.make("distance", status, caps, result, standin=True, label=d.label)


def render(rep, output):
    if output == "json":
        return report.to_json(rep)
    cmd = rep["command"]
    caps = " ".join(f"{k}={v}" for k, v in sorted(rep["caps"].items()))
    lines = [f"# {cmd} [{caps}]"]
    res = rep["result"]
    if cmd == "verify":
        for lem in res["lemmas"]:
            lines.append(f"{'PASS' if lem['ok'] else 'FAIL'} {lem['name']}: {lem['summary']}")
            lines.extend("    " + d for d in lem["dump"])
    elif cmd == "homology":
        lines.append(f"ranks C_n: {res['ranks']}")
        for g in res["groups"]:
            lines.append(f"H_{g['degree']}({res['Y']}, {res['X']}) = {g['text']}")
        if "note" in res:
            lines.append(res["note"])
    elif cmd == "distance":
        lines.append(f"dist({res['Y']}, {res['Z']}) = {res['value']}  [{rep['label']}]")
        lines.extend(report.to_table({"certificate": res["certificate"]}).splitlines())
    else:
        lines.extend(report.to_table(res).splitlines())
    return "\n".join(lines)


def _parser():
    p = argparse.ArgumentParser(prog="corrcoh", description="Correspondence cohomology on finite models.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--flavor", choices=["s", "j", "S", "J"], default="s")
    common.add_argument("--order-cap", type=int, default=4)
    common.add_argument("--degree-cap", type=int, default=2)
    common.add_argument("--class-bound", type=int, default=3)
    common.add_argument("--enumeration-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    common.add_argument("--output", choices=["table", "json"], default="table")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = p.add_subparsers(dest="command", required=True)
    h = sub.add_parser("homology", parents=[common], help="cohomology groups H_n(Y, X)")
    h.add_argument("files", nargs="+")
    h.add_argument("--y", required=True)
    h.add_argument("--x", required=True)
    h.add_argument("--m", required=True)
    t = sub.add_parser("homotopy", parents=[common], help="decide M-homotopy of two correspondences")
    t.add_argument("files", nargs="+")
    t.add_argument("--f", required=True)
    t.add_argument("--g", required=True)
    t.add_argument("--m", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the randomized lemma suite")
    v.add_argument("--sign-bug", action="store_true", help="flip one face sign to test the d^2 check")
    d = sub.add_parser("distance", parents=[common], help="stand-in persistence distance")
    d.add_argument("files", nargs="+")
    d.add_argument("--y", required=True)
    d.add_argument("--z", required=True)
    d.add_argument("--m", required=True)
    d.add_argument("--variant", choices=["two_point", "one_point"], default="two_point")
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        config = RunConfig(args.flavor.upper(), args.order_cap, args.degree_cap, args.class_bound,
                           args.output, args.seed, args.enumeration_cap)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "homology":
            rep = cmd_homology(args.files, args.y, args.x, args.m, config)
        elif args.command == "homotopy":
            rep = cmd_homotopy(args.files, args.f, args.g, args.m, config)
        elif args.command == "verify":
            rep = cmd_verify(config, args.sign_bug)
        else:
            rep = cmd_distance(args.files, args.y, args.z, args.m, config, args.variant)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (EnumerationCapExceeded, SearchBoundExceeded) as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except UndecidedClassEquality as e:
        print(f"undecided: {e}", file=sys.stderr)
        return EXIT_UNDECIDED
    except CorrError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    print(render(rep, config.output), file=out)
    if rep["status"] == "undecided":
        return EXIT_UNDECIDED
    return EXIT_FAIL if rep["status"] == "fail" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
