"""``tseq`` command line.

Every subcommand is translated into an :class:`ExperimentConfig` and executed by
:func:`run`, so ``--config file.json`` and plain flags share one code path.

Exit status: 0 for certified or purely tabular results, 3 for refuted, 4 for
inconclusive, 2 for usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from . import amalgam, freeab, ringseq, topology, tracker
from .config import ConfigError, ExperimentConfig, eps_from_text, growth_from_text, load_config, parse_frac, parse_int, seq_from_spec
from .finvec import FinVecSyntaxError, parse_finvec
from .reports import WitnessReport, dumps
from .zbase import BaseError, base_from_config

EXIT = {"certified": 0, "tabular": 0, "refuted": 3, "inconclusive": 4}
EXIT_USAGE = 2


@dataclass
class Outcome:
    report: WitnessReport
    rows: list[list] = field(default_factory=list)
    header: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT[self.report.verdict]

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            if not self.rows:
                raise ConfigError("this experiment has no tabular output; use json", "output.format")
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows([[str(v) for v in row] for row in self.rows])
            return buf.getvalue()
        return self.report.to_json()


# ---------------------------------------------------------------------------
# experiments


def _track(cfg: ExperimentConfig) -> Outcome:
    base = cfg.get("base")
    if isinstance(base, str):
        with open(base, encoding="utf-8") as fh:
            base = json.load(fh)
    spec = tracker.TrackerSpec(growth_from_text(cfg.get("f")), eps_from_text(cfg.get("eps")),
                               base_from_config(base), parse_int(cfg.get("level_cap"), "level_cap"))
    seq = tracker.track(spec, parse_int(cfg.get("N"), "N"))
    profile = tracker.tracking_ratio_profile(seq)
    capped = [e.n for e in seq.entries if e.cap_limited]
    rows = [[e.n, e.f, e.eps, e.a, e.k] for e in seq.entries]
    report = WitnessReport(
        claim="thm1-track",
        params={"f": spec.f.name, "eps": cfg.get("eps"), "N": len(seq), "base": base},
        evidence=[{"n": e.n, "a": e.a, "k": e.k, "deviation": dev, "bound": bound}
                  for e, (_, dev, bound) in zip(seq.entries[-5:], profile[-5:])],
        verdict="tabular",
        bounds={"cap_limited": capped, "min_k_last": min(e.k for e in seq.entries[-max(1, len(seq) // 2):])},
    )
    return Outcome(report, rows, ["n", "f(n)", "eps(n)", "a_n", "k_n"])


def _gaps(cfg: ExperimentConfig) -> Outcome:
    seq = seq_from_spec(cfg.get("seq"), "seq")
    N = parse_int(cfg.get("N"), "N")
    grid = cfg.get("c_grid")
    grid = tracker.DEFAULT_C_GRID if grid is None else [parse_int(c, "c_grid") for c in grid]
    vals = seq.upto(N if seq.length is None else min(N, seq.start + seq.length - 1))
    stats = tracker.gap_stats(vals, parse_int(cfg.get("window"), "window"), grid)
    report = WitnessReport(
        claim="thm1-gaps",
        params={"seq": seq.provenance, "N": N},
        evidence=stats["per_C"],
        verdict="tabular",
        bounds={"violates_at": stats["violates_at"], "window": stats["window"]},
        extra={"block_minima": stats["block_minima"]},
    )
    rows = [[j, m] for j, m in enumerate(stats["block_minima"])]
    return Outcome(report, rows, ["block", "min_gap"])


def _ring(cfg: ExperimentConfig) -> Outcome:
    r = parse_frac(cfg.get("r"), "r")
    N = parse_int(cfg.get("N"), "N")
    k = parse_int(cfg.get("witnesses"), "witnesses")
    seq = ringseq.gen_theorem2(r, N)
    report = ringseq.obstruction_report(seq, k)
    report.extra = {
        "values": list(seq.values),
        "special_indices": list(seq.special),
        "ratio_profile": [{**b, "max_deviation": b["max_deviation"]} for b in ringseq.block_profile(seq)] if N >= 2 else [],
    }
    rows = [[n, seq[n], ringseq.is_special(n)] for n in range(1, N + 1)]
    return Outcome(report, rows, ["n", "a_n", "special"])


def _subgroup(cfg: ExperimentConfig) -> Outcome:
    n0 = parse_int(cfg.get("n0"), "n0")
    count = parse_int(cfg.get("count"), "count")
    H = freeab.SubgroupH()
    wit = freeab.compact_witness(n0, H.fiber, count)
    ok = all(freeab.in_H(w, H) and freeab.norm1(w) == n0 + 1 for w in wit[1:])
    report = WitnessReport(
        claim="thm3-compact-witness",
        params={"n0": n0, "count": count, "fiber": H.fiber.name},
        evidence=[str(w) for w in wit],
        verdict="certified" if ok else "refuted",
    )
    return Outcome(report, [[str(w), freeab.norm1(w)] for w in wit], ["vector", "norm1"])


def _sup(cfg: ExperimentConfig) -> Outcome:
    a = seq_from_spec(cfg.get("a"), "a")
    b = seq_from_spec(cfg.get("b"), "b")
    g = parse_int(cfg.get("g"), "g")
    if g == 0:
        raise ConfigError("g must be non-zero", "g")
    N = parse_int(cfg.get("N"), "N")
    report = topology.diagonal_escape_report(a, b, g, N)
    pairs = topology.sup_witness_pairs(a, b, g, N)
    return Outcome(report, [list(p) for p in pairs], ["n", "m"])


def _tau(cfg: ExperimentConfig) -> Outcome:
    mode = cfg.get("mode")
    if mode == "ball-cap":
        report = freeab.ball_cap_Un(parse_int(cfg.get("n0"), "n0"), parse_int(cfg.get("window"), "window"))
        return Outcome(report, [[s] for s in report.evidence], ["survivor"])
    if mode == "witness":
        n = parse_int(cfg.get("n"), "n")
        nb = _slots(cfg.get("slots"))
        count = parse_int(cfg.get("count"), "count")
        wit = freeab.nondiscrete_witness(n, nb, count)
        ok = len(set(wit)) == count and all(freeab.in_Un(w, n) and topology.member_nbhd_free(w, nb) for w in wit)
        report = WitnessReport(
            claim="thm6-nondiscrete",
            params={"n": n, "slots": str(nb), "count": count},
            evidence=[str(w) for w in wit],
            verdict="certified" if ok else "refuted",
        )
        return Outcome(report, [[str(w)] for w in wit], ["vector"])
    raise ConfigError(f"unknown mode {mode!r}", "mode")


def _amalgam(cfg: ExperimentConfig) -> Outcome:
    c = parse_int(cfg.get("c"), "c")
    mode = cfg.get("mode")
    if mode == "check":
        bound = cfg.get("bound")
        report = amalgam.intersection_check(c, parse_int(bound, "bound") if bound is not None else 10 * c)
        return Outcome(report)
    if mode == "push":
        a = seq_from_spec(cfg.get("a"), "a")
        N = parse_int(cfg.get("N"), "N")
        e1, e2 = amalgam.pushed_sequences(a, c, N)
        ns = range(a.start, N + 1)
        report = WitnessReport(
            claim="thm4-pushed",
            params={"a": a.provenance, "c": c, "N": N},
            evidence=[{"n": n, "e1": x.pair(), "e2": y.pair()} for n, x, y in zip(ns, e1, e2)],
            verdict="tabular",
        )
        rows = [[n, x.u, x.v, y.u, y.v] for n, x, y in zip(ns, e1, e2)]
        return Outcome(report, rows, ["n", "e1_u", "e1_v", "e2_u", "e2_v"])
    raise ConfigError(f"unknown mode {mode!r}", "mode")


def _slots(text) -> topology.CanonicalNbhd:
    try:
        if isinstance(text, list):
            return topology.CanonicalNbhd.from_prefix([parse_int(v, "slots") for v in text])
        return topology.CanonicalNbhd.parse(str(text))
    except ValueError as exc:
        raise ConfigError(str(exc), "slots") from None


def _nbhd_member(cfg: ExperimentConfig) -> Outcome:
    nb = _slots(cfg.get("slots"))
    seq = cfg.get("seq")
    if seq == "e":
        try:
            x = parse_finvec(str(cfg.get("x")))
        except FinVecSyntaxError as exc:
            raise ConfigError(str(exc), "x") from None
        ok = topology.member_nbhd_free(x, nb)
        report = WitnessReport(
            claim="nbhd-member",
            params={"seq": "e", "x": str(x), "slots": str(nb)},
            evidence=[{"units": x.units(), "slots": nb.prefix(max(1, x.norm1()))}],
            verdict="certified" if ok else "refuted",
        )
        return Outcome(report)
    a = seq_from_spec(seq, "seq")
    ic = cfg.get("index_cap")
    q = topology.TailSumQuery(parse_int(cfg.get("x"), "x"), nb, parse_int(cfg.get("depth_cap"), "depth_cap"),
                              parse_int(ic, "index_cap") if ic is not None else None)
    res = topology.member_nbhd_int(a, q)
    report = WitnessReport(
        claim="nbhd-member",
        params={"seq": a.provenance, "x": q.x, "slots": str(nb)},
        evidence=[{"sign": s, "index": i, "value": s * a[i]} for s, i in res.summands],
        verdict="certified" if res.member else "inconclusive",
        bounds={"depth_cap": res.depth_cap, "index_cap": res.index_cap, "answer": res.verdict},
    )
    return Outcome(report)


RUNNERS = {
    "thm1-track": _track,
    "thm1-gaps": _gaps,
    "thm2-ring": _ring,
    "thm3-subgroup": _subgroup,
    "thm5-sup": _sup,
    "thm6-tau": _tau,
    "thm4-amalgam": _amalgam,
    "nbhd-member": _nbhd_member,
}


def run(config: ExperimentConfig) -> Outcome:
    """Execute an experiment and write its output if a path is configured."""
    try:
        outcome = RUNNERS[config.experiment](config)
    except (BaseError, tracker.TrackerError, FinVecSyntaxError) as exc:
        raise ConfigError(str(exc)) from None
    if config.output_path:
        write_atomic(config.output_path, outcome.render(config.output_format))
    return outcome


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tseq-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# argument parsing


def _fmt_for(path: str | None, default: str = "json") -> str:
    if path and path.endswith(".csv"):
        return "csv"
    return default


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tseq", description="Finite certificates for sequence-determined group topologies.")
    p.add_argument("--config", help="JSON experiment config; overrides subcommand flags")
    sub = p.add_subparsers(dest="cmd")

    s = sub.add_parser("track", help="greedy tracker on a neighborhood base")
    s.add_argument("--base", required=True, help="base description file (JSON)")
    s.add_argument("--f", required=True, help='growth function, e.g. "n^2"')
    s.add_argument("--eps", default="default", help='"default" or an expression in n')
    s.add_argument("--N", required=True)
    s.add_argument("--level-cap", default="64")
    s.add_argument("--out")

    s = sub.add_parser("gaps", help="gap-growth statistics of an increasing sequence")
    s.add_argument("--seq", required=True)
    s.add_argument("--N", required=True)
    s.add_argument("--window", required=True)
    s.add_argument("--out")

    s = sub.add_parser("ringseq", help="ring-topology obstruction sequence")
    s.add_argument("--r", required=True)
    s.add_argument("--N", required=True)
    s.add_argument("--witnesses", default="1")
    s.add_argument("--out")

    s = sub.add_parser("nbhd-member", help="membership in a canonical neighborhood")
    s.add_argument("--seq", required=True, help='"e" for generators of the free group, else an integer sequence')
    s.add_argument("--x", required=True)
    s.add_argument("--slots", required=True)
    s.add_argument("--depth-cap", default="8")
    s.add_argument("--index-cap")
    s.add_argument("--out")

    s = sub.add_parser("sup-witness", help="pairs with g = b_m - a_n")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--N", required=True)
    s.add_argument("--out")

    fa = sub.add_parser("freeab", help="free abelian group witnesses")
    fsub = fa.add_subparsers(dest="freeab_cmd", required=True)
    s = fsub.add_parser("ball-cap")
    s.add_argument("--n0", required=True)
    s.add_argument("--window", required=True)
    s.add_argument("--out")
    s = fsub.add_parser("witness")
    s.add_argument("--n", required=True)
    s.add_argument("--slots", required=True)
    s.add_argument("--count", default="1")
    s.add_argument("--out")
    s = fsub.add_parser("compact")
    s.add_argument("--n0", required=True)
    s.add_argument("--count", default="1")
    s.add_argument("--out")

    am = sub.add_parser("amalgam", help="amalgam quotient arithmetic")
    asub = am.add_subparsers(dest="amalgam_cmd", required=True)
    s = asub.add_parser("check")
    s.add_argument("--c", required=True)
    s.add_argument("--bound", required=True)
    s.add_argument("--out")
    s = asub.add_parser("push")
    s.add_argument("--a", required=True)
    s.add_argument("--c", required=True)
    s.add_argument("--N", required=True)
    s.add_argument("--out")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    out = getattr(args, "out", None)
    cmd = args.cmd
    if cmd == "track":
        with open(args.base, encoding="utf-8") as fh:
            base = json.load(fh)
        params = {"base": base, "f": args.f, "eps": args.eps, "N": args.N, "level_cap": args.level_cap}
        return ExperimentConfig("thm1-track", params, out, _fmt_for(out, "csv" if out is None else "json"))
    if cmd == "gaps":
        return ExperimentConfig("thm1-gaps", {"seq": args.seq, "N": args.N, "window": args.window}, out, _fmt_for(out))
    if cmd == "ringseq":
        return ExperimentConfig("thm2-ring", {"r": args.r, "N": args.N, "witnesses": args.witnesses}, out, _fmt_for(out))
    if cmd == "nbhd-member":
        params = {"seq": args.seq, "x": args.x, "slots": args.slots, "depth_cap": args.depth_cap}
        if args.index_cap is not None:
            params["index_cap"] = args.index_cap
        return ExperimentConfig("nbhd-member", params, out, "json")
    if cmd == "sup-witness":
        return ExperimentConfig("thm5-sup", {"a": args.a, "b": args.b, "g": args.g, "N": args.N}, out, _fmt_for(out))
    if cmd == "freeab":
        if args.freeab_cmd == "ball-cap":
            return ExperimentConfig("thm6-tau", {"mode": "ball-cap", "n0": args.n0, "window": args.window}, out, _fmt_for(out))
        if args.freeab_cmd == "witness":
            return ExperimentConfig("thm6-tau", {"mode": "witness", "n": args.n, "slots": args.slots, "count": args.count}, out, _fmt_for(out))
        return ExperimentConfig("thm3-subgroup", {"n0": args.n0, "count": args.count}, out, _fmt_for(out))
    if cmd == "amalgam":
        if args.amalgam_cmd == "check":
            return ExperimentConfig("thm4-amalgam", {"mode": "check", "c": args.c, "bound": args.bound}, out, "json")
        return ExperimentConfig("thm4-amalgam", {"mode": "push", "a": args.a, "c": args.c, "N": args.N}, out, _fmt_for(out))
    raise ConfigError("no subcommand given")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
        elif args.cmd is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        else:
            cfg = config_from_args(args)
        outcome = run(cfg)
    except (ValueError, OSError) as exc:
        print(f"tseq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not cfg.output_path:
        sys.stdout.write(outcome.render(cfg.output_format))
    capped = outcome.report.bounds.get("cap_limited") if outcome.report.claim == "thm1-track" else None
    if capped:
        print(f"tseq: {len(capped)} entries hit the level cap", file=sys.stderr)
    print(f"tseq: {outcome.report.claim}: {outcome.report.verdict}", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
