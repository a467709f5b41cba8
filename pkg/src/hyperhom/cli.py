"""Command-line front end.

Exit status: 0 when every verdict holds or is not applicable, 1 when some
verdict is violated, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path

from . import __version__
from .config import ConfigError, SessionConfig, parse_config
from .homology import depth, ext_subquotient, krull_dim, length, tor_subquotient
from .report import build_report, dumps, render_text
from .resolution import (
    MFExtractionError, PeriodicityNotFound, betti_table, default_bound, detect_periodicity,
    extract_mf, format_betti_table, resolve,
)
from .stable import NotMCM, stable_table, verify_buchweitz_duality, verify_lemma42, verify_theorem41
from .suites import SUITE_NAMES, corpus_text, random_triples, run_suite
from .theta import (
    HOLDS, PushforwardUndefined, ThetaUndefined, _dual_data, check_rigidity,
    jothilingam_check, maximal_ideal_sequence, mcm_criterion_check, pushforward, split_sequence, theta,
    theta_biadditivity_check, verify_depth_formula, verify_dimension_inequality, verify_section3,
)

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2

CHECKS = ("depth-formula", "dim-inequality", "lemma42", "buchweitz", "thm41", "section3",
          "jothilingam", "mcm", "biadditivity")


class UsageError(Exception):
    pass


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            v = int(text)
            return v, v
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="session file with [ring] and [module NAME] sections")
    common.add_argument("--module", action="append", default=[], metavar="NAME",
                        help="module name from the config (repeatable)")
    common.add_argument("--i", type=int, dest="index", help="homological index")
    common.add_argument("--range", type=_parse_range, dest="window", metavar="A..B", help="index window")
    common.add_argument("--bound", type=int, help="resolution / scan bound")
    common.add_argument("--seed", type=int, help="seed for randomized constructions")
    common.add_argument("--json", type=Path, dest="json_path", metavar="PATH", help="write a JSON report")
    common.add_argument("--quiet", action="store_true", help="suppress the text report")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON report")

    parser = argparse.ArgumentParser(prog="hyperhom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("resolve", "minimal free resolution"),
        ("betti", "Betti table"),
        ("tor", "lengths of Tor_i(M, N)"),
        ("ext", "lengths of Ext^i(M, N)"),
        ("theta", "theta(M, N) with stability pairs"),
        ("rigidity", "scan Tor for rigidity"),
        ("pushforward", "pushforward sequence of M"),
        ("dual", "M* and reflexivity"),
        ("depth", "depth of M"),
        ("dim", "Krull dimension of M"),
        ("mf", "matrix factorization from the resolution of M"),
        ("stable", "stable Tor/Ext table"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "resolve":
            p.add_argument("--over", choices=("R", "S"), default="R")
        if name == "stable":
            p.add_argument("--kind", choices=("tor", "ext"), default="tor")
    p = sub.add_parser("check", parents=[common], help="named property check")
    p.add_argument("name", choices=CHECKS)
    p.add_argument("--case", choices=("P31", "T32", "P33"), default="P33", help="section3 statement")
    p.add_argument("--r", type=int, default=1, help="r for the T32 depth statement")
    p.add_argument("--n", type=int, action="append", help="n for the jothilingam check (repeatable)")
    p.add_argument("--pair", action="append", default=[], metavar="I,J", help="index pair for buchweitz")
    p.add_argument("--assume-g-hypothesis", action="store_true",
                   help="declare [M] = 0 in the reduced Grothendieck group (jothilingam over R)")
    p = sub.add_parser("verify", parents=[common], help="run the built-in example suites")
    p.add_argument("target", choices=("examples",))
    p.add_argument("--suite", action="append", choices=SUITE_NAMES, help="restrict to these suites")
    return parser


def _modules(cfg: SessionConfig, args, count: int) -> list:
    names = args.module
    if len(names) < count:
        raise UsageError(f"{args.command} needs {count} --module argument(s)")
    return [cfg.module(n) for n in names[:count]]


def _window(args, default: tuple[int, int]) -> tuple[int, int]:
    if args.window:
        return args.window
    if args.index is not None:
        return args.index, args.index
    return default


def _rows(mat) -> list[str]:
    return ["[" + ", ".join(str(e) for e in row) + "]" for row in mat]


def _result(operation: str, data: dict, text: list[str], verdict: str = HOLDS) -> dict:
    return {"operation": operation, "verdict": verdict, "text": text, **data}


def _check_result(rep, text=None) -> dict:
    lines = text or []
    for k, v in rep.hypotheses.items():
        lines.append(f"hypothesis {k}: {v}")
    for k, v in rep.details.items():
        lines.append(f"{k}: {v}")
    return {"check": rep.name, "verdict": rep.verdict, "hypotheses": rep.hypotheses,
            "details": rep.details, "text": lines}


def run_command(args, cfg: SessionConfig | None) -> list[dict]:
    cmd = args.command
    if cmd == "verify":
        names = args.suite or list(SUITE_NAMES)
        return [run_suite(n, args.seed) for n in sorted(names)]
    if cfg is None:
        raise UsageError(f"{cmd} needs --config")
    seed = args.seed if args.seed is not None else cfg.seed
    bound = args.bound or cfg.bound
    ring = cfg.ring

    if cmd in ("resolve", "betti"):
        (M,) = _modules(cfg, args, 1)
        over = getattr(args, "over", "R")
        res = resolve(M, over, bound if over == "R" else None)
        table = betti_table(res)
        text = format_betti_table(table).splitlines()
        data = {"over": over, "bound": res.bound, "finite": res.finite, "betti": res.betti_numbers(),
                "betti_table": {f"{i},{j}": v for (i, j), v in table.items()}}
        if cmd == "resolve":
            maps = {str(i): _rows(res.entries(i)) for i in range(1, res.length + 1)}
            data["maps"] = maps
            for i, rows in maps.items():
                text.append(f"d{i}: " + " ".join(rows))
        return [_result(cmd, data, text)]

    if cmd in ("tor", "ext"):
        M, N = _modules(cfg, args, 2)
        lo, hi = _window(args, (0, 4))
        fn = tor_subquotient if cmd == "tor" else ext_subquotient
        lengths = {i: length(fn(M, N, i)) for i in range(lo, hi + 1)}
        text = [f"l({cmd.capitalize()}_{i}) = {v}" for i, v in lengths.items()]
        return [_result(cmd, {"window": [lo, hi], "lengths": lengths}, text)]

    if cmd == "theta":
        M, N = _modules(cfg, args, 2)
        rep = theta(M, N, bound)
        text = [f"theta = {rep.value}", f"f_index = {rep.f_index}"]
        text += [f"e = {e}: l(Tor_{2 * e + 2}) = {a}, l(Tor_{2 * e + 1}) = {b}" for e, a, b in rep.stability_pairs]
        top = 2 * rep.stability_pairs[-1][0] + 2
        text.append(f"Tor indices examined: 0..{top}")
        return [_result(cmd, {"theta": rep, "window": [0, top]}, text)]

    if cmd == "rigidity":
        M, N = _modules(cfg, args, 2)
        rep = check_rigidity(M, N, bound)
        text = [f"first vanishing: {rep.first_vanishing}", f"verdict: {rep.verdict} (scanned to {rep.bound})"]
        if rep.vacuous:
            text.append("no Tor_i vanishes in the scanned range")
        return [_result(cmd, {"rigidity": rep}, text)]

    if cmd == "pushforward":
        (M,) = _modules(cfg, args, 1)
        pf = pushforward(M)
        M1 = pf.M1
        text = [f"lambda = {pf.lam}", f"M1: rank {M1.rank}, shifts {list(M1.shifts)}"] + _rows(M1.presentation())
        data = {"lambda": pf.lam, "M1_shifts": list(M1.shifts), "M1_presentation": _rows(M1.presentation()),
                "exact": pf.exact}
        return [_result(cmd, data, text)]

    if cmd == "dual":
        (M,) = _modules(cfg, args, 1)
        d = _dual_data(M)
        text = [f"M*: shifts {list(d.dual.shifts)}"] + _rows(d.dual.presentation()) + [f"reflexive: {d.reflexive}"]
        data = {"dual_shifts": list(d.dual.shifts), "dual_presentation": _rows(d.dual.presentation()),
                "reflexive": d.reflexive, "bidual_injective": d.injective}
        return [_result(cmd, data, text)]

    if cmd == "depth":
        (M,) = _modules(cfg, args, 1)
        v = depth(M)
        return [_result(cmd, {"depth": v}, [f"depth = {'inf' if v == float('inf') else v}"])]

    if cmd == "dim":
        (M,) = _modules(cfg, args, 1)
        v = krull_dim(M)
        return [_result(cmd, {"dim": v, "dim_R": ring.dim}, [f"dim = {v}", f"dim R = {ring.dim}"])]

    if cmd == "mf":
        (M,) = _modules(cfg, args, 1)
        res = resolve(M, "R", bound or default_bound(ring))
        cert = detect_periodicity(res)
        mf = extract_mf(res, args.index if args.index is not None else max(cert.onset, 1))
        data = {"onset": cert.onset, "period": cert.period, "verified_through": cert.verified_through,
                "A": _rows(mf.rows("A")), "B": _rows(mf.rows("B")), "identity": mf.verify()}
        text = [f"onset {cert.onset}, period {cert.period}", "A = " + " ".join(data["A"]),
                "B = " + " ".join(data["B"]), f"AB = BA = f*I: {data['identity']}"]
        return [_result(cmd, data, text, HOLDS if mf.verify() else "violated")]

    if cmd == "stable":
        M, N = _modules(cfg, args, 2)
        lo, hi = _window(args, (-3, 4))
        tab = stable_table(M, N, args.kind, (lo, hi))
        text = [f"l({args.kind}^_{i}) = {v}" for i, v in tab.entries.items()]
        return [_result(cmd, {"kind": args.kind, "window": [lo, hi], "lengths": tab.entries}, text)]

    if cmd == "check":
        return [_run_check(args, cfg, seed, bound)]
    raise UsageError(f"unknown command {cmd}")


def _run_check(args, cfg: SessionConfig, seed: int, bound) -> dict:
    name = args.name
    ring = cfg.ring
    if name == "depth-formula":
        M, N = _modules(cfg, args, 2)
        return _check_result(verify_depth_formula(M, N, bound))
    if name == "dim-inequality":
        M, N = _modules(cfg, args, 2)
        return _check_result(verify_dimension_inequality(M, N))
    if name == "lemma42":
        M, N = _modules(cfg, args, 2)
        return _check_result(verify_lemma42(M, N, _window(args, (-3, 4))))
    if name == "buchweitz":
        M, N = _modules(cfg, args, 2)
        pairs = []
        for text in args.pair or ["1,0"]:
            try:
                i, j = (int(v) for v in text.split(","))
            except ValueError:
                raise UsageError(f"--pair expects I,J; got {text!r}") from None
            pairs.append((i, j))
        try:
            return _check_result(verify_buchweitz_duality(M, N, pairs))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if name == "thm41":
        (M,) = _modules(cfg, args, 1)
        return _check_result(verify_theorem41(M, bound))
    if name == "section3":
        mods = [cfg.module(n) for n in args.module]
        if not mods:
            raise UsageError("section3 needs --module")
        N = mods[1] if len(mods) > 1 else None
        try:
            return _check_result(verify_section3(mods[0], args.case, N, args.r, bound))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if name == "jothilingam":
        (M,) = _modules(cfg, args, 1)
        ns = args.n or [args.index if args.index is not None else 1]
        reps = [jothilingam_check(M, n, args.assume_g_hypothesis, bound) for n in ns]
        from .report import combine_verdicts

        verdict = combine_verdicts(r.verdict for r in reps)
        text = [f"n = {r.details['n']}: {r.verdict} (Ext^n=0: {r.details['Ext^n(M,M)=0']}, "
                f"pd = {r.details['pd']})" for r in reps]
        if any("caveat" in r.details for r in reps):
            text.append("caveat: " + next(r.details["caveat"] for r in reps if "caveat" in r.details))
        return {"check": "jothilingam", "verdict": verdict, "runs": [_check_result(r) for r in reps], "text": text}
    if name == "mcm":
        (M,) = _modules(cfg, args, 1)
        return _check_result(mcm_criterion_check(M, seed, bound))
    if name == "biadditivity":
        (M,) = _modules(cfg, args, 1)
        rows = []
        seqs = [("0->m->R->k->0", maximal_ideal_sequence(ring))]
        for n, (_, N1, N2) in enumerate(random_triples(ring, 10, seed)):
            seqs.append((f"split triple {n}", split_sequence(N1, N2)))
        ok = True
        for label, seq in seqs:
            r = theta_biadditivity_check(M, seq, bound)
            ok = ok and r
            rows.append({"sequence": label, "additive": r})
        text = [f"{r['sequence']}: {r['additive']}" for r in rows]
        return {"check": "biadditivity", "verdict": HOLDS if ok else "violated", "seed": seed,
                "sequences": rows, "text": text}
    raise UsageError(f"unknown check {name}")


def corpus_digest() -> str:
    h = hashlib.sha256()
    for name in SUITE_NAMES:
        h.update(corpus_text(name).encode("utf-8"))
    return h.hexdigest()


def _echo(argv: list[str]) -> list[str]:
    """The command line minus output-only options, so reports compare across runs."""
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--json":
            skip = True
            continue
        if a.startswith("--json=") or a in ("--quiet", "--timings"):
            continue
        out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    start = time.perf_counter()
    try:
        cfg = parse_config(args.config) if args.config else None
        results = run_command(args, cfg)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ThetaUndefined, PeriodicityNotFound, MFExtractionError) as exc:
        print(f"error: {exc}; try a larger --bound", file=sys.stderr)
        return EXIT_USAGE
    except (NotMCM, PushforwardUndefined) as exc:
        print(f"error: precondition not met: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    digest = cfg.digest if cfg else corpus_digest()
    seed = args.seed if args.seed is not None else (cfg.seed if cfg else None)
    report = build_report(_echo(argv), digest, seed, results, {"total_s": round(elapsed, 3)} if args.timings else None)
    if args.json_path:
        args.json_path.write_text(dumps(report), encoding="utf-8")
    if not args.quiet:
        sys.stdout.write(render_text(report))
    return EXIT_VIOLATED if report["verdict"] == "violated" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
