"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 verification failure,
3 undetermined form or unsound oracle.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from .formats import GameSpec, PrefSpec, format_arena, format_game, format_relation, parse_arena, parse_game, parse_relation
from .games import (
    MatrixGame,
    PayoffTable,
    Profile,
    check_lemma6,
    generate_tree_game,
    is_determined_form,
    is_nash,
    is_stable,
    lemma6_counterexample,
    undetermined_labeling,
)
from .poset import Poset, lift_less, lift_less_poly, lift_less_witness, transitive_closure
from .priority import PriorityGame, random_priority_game, secure_equilibrium_priority, verify_priority_secure
from .secure import is_secure, malevolent_prefs
from .transfer import OracleUnsound, TransferResult, equilibrium_transfer, matrix_oracle

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_UNDETERMINED = 0, 1, 2, 3
FORCE_LIMIT = 20


class InputError(ValueError):
    pass


@dataclass
class RunReport:
    command: str
    digest: str = ""
    result: dict[str, Any] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)
    duration: float = 0.0

    @property
    def failed(self) -> str | None:
        return next((name for name, ok in self.verdicts.items() if not ok), None)

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return json.dumps(asdict(self), indent=2, default=str)
        rows = [("command", self.command), ("input", self.digest[:16])]
        for key, value in self.result.items():
            if key == "canonical_input" or value is None:
                continue
            rows.append((key, f"({', '.join(value)})" if key == "payoff" else _show(value)))
        rows += [(key, str(value)) for key, value in self.counts.items()]
        rows += [("verify", f"{key}: {'ok' if ok else 'FAILED'}") for key, ok in self.verdicts.items()]
        rows.append(("time", f"{self.duration:.3f}s"))
        width = max(len(key) for key, _ in rows)
        lines = [f"{key:<{width}}  {value}" for key, value in rows]
        return "\n".join(lines)


def _show(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "{" + ", ".join(map(str, value)) + "}" if all(isinstance(v, str) for v in value) else str(list(value))
    if isinstance(value, dict):
        return ", ".join(f"{k}->{v}" for k, v in value.items())
    return str(value)


def _read(path: str) -> tuple[str, str]:
    data = Path(path).read_bytes() if path != "-" else sys.stdin.buffer.read()
    return data.decode("utf-8"), hashlib.sha256(data).hexdigest()


def _subset(p: Poset, text: str) -> int:
    text = text.strip().strip("{}").strip()
    if not text:
        return 0
    try:
        return p.subset(t.strip() for t in text.split(","))
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def _pay(payoffs: PayoffTable | None, o: int) -> list[str] | None:
    return None if payoffs is None else [str(x) for x in payoffs[o]]


def cmd_lift(args: argparse.Namespace, report: RunReport) -> int:
    text, report.digest = _read(args.order)
    spec = parse_relation(text)
    p = spec.order()
    a, b = _subset(p, args.a), _subset(p, args.b)
    verdicts = {"lift_less": lift_less(p, a, b), "lift_less_poly": lift_less_poly(p, a, b)}
    if (a & ~b).bit_count() <= FORCE_LIMIT or args.force:
        verdicts["lift_less_witness"] = lift_less_witness(p, a, b)
    report.result = {"A": p.names(a), "B": p.names(b), **verdicts}
    agree = len(set(verdicts.values())) == 1
    report.verdicts["procedures_agree"] = agree
    return EXIT_OK if agree else EXIT_VERIFY


def cmd_check_form(args: argparse.Namespace, report: RunReport) -> int:
    text, report.digest = _read(args.game)
    spec = parse_game(text)
    form = spec.form
    if form.outcomes > FORCE_LIMIT and not args.force:
        raise InputError(f"{form.outcomes} outcomes means 2^{form.outcomes} labelings; pass --force")
    report.result["canonical_input"] = format_game(spec)
    report.result["outcomes"] = form.outcomes
    report.result["determined"] = is_determined_form(form)
    wl = undetermined_labeling(form)
    if wl is not None:
        report.result["undetermined_labeling"] = {lab: "(1,0)" if wl.w >> i & 1 else "(0,1)" for i, lab in enumerate(form.labels)}
    witness = lemma6_counterexample(form)
    if witness is not None:
        report.result["lemma6_subset"] = form.names(witness)
    report.verdicts["lemma6_agrees"] = check_lemma6(form)
    return EXIT_OK if report.failed is None else EXIT_VERIFY


def _transfer_report(report: RunReport, game: MatrixGame, res: TransferResult, payoffs: PayoffTable | None) -> None:
    form = game.form
    report.result.update(
        profile=[res.profile[0], res.profile[1]],
        outcome=form.labels[res.m],
        payoff=_pay(payoffs, res.m),
        M=form.names(res.M),
        Mprime=form.names(res.Mprime),
    )
    report.counts.update(decisions=res.decisions, extractions=res.extractions)


def cmd_solve(args: argparse.Namespace, report: RunReport) -> int:
    text, report.digest = _read(args.game)
    spec = parse_game(text)
    game = spec.game()
    report.result["canonical_input"] = format_game(spec)
    res = equilibrium_transfer(game, matrix_oracle(game.form), args.mode)
    _transfer_report(report, game, res, spec.payoffs)
    if args.verify:
        profile = Profile(*res.profile)
        report.verdicts["nash"] = is_nash(game, profile)
        if any(p.kind == "closure" for p in spec.prefs):
            rel1, rel2 = spec.relations()
            report.verdicts["nash_under_original_relation"] = is_stable(game.form, rel1, rel2, profile)
        report.verdicts["M_below_Mprime"] = lift_less(game.pref1, res.M, res.Mprime)
        if args.mode == "greedy":
            report.verdicts["decision_bound"] = res.decisions <= game.form.outcomes + 2
    return EXIT_OK if report.failed is None else EXIT_VERIFY


def cmd_secure(args: argparse.Namespace, report: RunReport) -> int:
    text, report.digest = _read(args.game)
    spec = parse_game(text)
    if spec.payoffs is None:
        raise InputError("secure equilibria need payoff lines for every outcome")
    report.result["canonical_input"] = format_game(spec)
    game = MatrixGame(spec.form, *malevolent_prefs(spec.payoffs, spec.form.labels))
    res = equilibrium_transfer(game, matrix_oracle(spec.form), args.mode)
    _transfer_report(report, game, res, spec.payoffs)
    if args.verify:
        report.verdicts["secure"] = is_secure(spec.form, spec.payoffs, Profile(*res.profile))
    return EXIT_OK if report.failed is None else EXIT_VERIFY


def _solve_priority(game: PriorityGame, mode: str, verify: bool) -> tuple[dict[str, Any], dict[str, int], dict[str, bool]]:
    res = secure_equilibrium_priority(game, mode)
    s1, s2 = res.profile
    prio = game.outcomes[res.m]
    result = {
        "initial": game.arena.initial,
        "sigma1": dict(sorted(s1.choice.items())),
        "sigma2": dict(sorted(s2.choice.items())),
        "priority": prio,
        "payoff": [str(x) for x in game.payoff[prio]],
    }
    counts = {"decisions": res.decisions, "extractions": res.extractions}
    verdicts = {}
    if verify:
        verdicts["secure"] = verify_priority_secure(game, s1, s2)
        if mode == "greedy":
            verdicts["decision_bound"] = res.decisions <= len(game.outcomes) + 2
        verdicts["two_extractions"] = res.extractions == 2
    return result, counts, verdicts


def cmd_priority(args: argparse.Namespace, report: RunReport) -> int:
    text, report.digest = _read(args.arena)
    game = parse_arena(text)
    report.result["canonical_input"] = format_arena(game)
    starts = range(game.arena.n) if args.all_vertices else [game.arena.initial]
    for v in starts:
        g = PriorityGame(game.arena.with_initial(v), game.payoff)
        result, counts, verdicts = _solve_priority(g, args.mode, args.verify)
        if args.all_vertices:
            report.result[f"vertex {v}"] = result
            report.counts.update({f"{k}@{v}": c for k, c in counts.items()})
            report.verdicts.update({f"{k}@{v}": ok for k, ok in verdicts.items()})
        else:
            report.result.update(result)
            report.counts.update(counts)
            report.verdicts.update(verdicts)
    return EXIT_OK if report.failed is None else EXIT_VERIFY


def cmd_closure(args: argparse.Namespace, report: RunReport) -> int:
    text, report.digest = _read(args.relation)
    spec = parse_relation(text)
    closed = transitive_closure(spec.relation, spec.labels)
    report.result["pairs"] = [f"{closed.labels[a]}<{closed.labels[b]}" for a, b in closed.pairs()]
    report.result["canonical_input"] = format_relation(closed.labels, closed.pairs())
    if args.verify:
        report.verdicts["extends_input"] = all(closed.less(a, b) for a, b in spec.relation.pairs())
        report.verdicts["round_trip"] = parse_relation(report.result["canonical_input"]).order() == closed
    return EXIT_OK if report.failed is None else EXIT_VERIFY


def cmd_generate_tree(args: argparse.Namespace, report: RunReport) -> int:
    form = generate_tree_game(args.seed, args.depth, args.branching, args.outcomes)
    rng = random.Random(args.seed)
    payoffs = PayoffTable(tuple((rng.randint(0, 5), rng.randint(0, 5)) for _ in range(form.outcomes)))
    spec = GameSpec(form, payoffs, (PrefSpec("payoff"), PrefSpec("payoff")))
    report.result["canonical_input"] = format_game(spec)
    return EXIT_OK


def cmd_generate_arena(args: argparse.Namespace, report: RunReport) -> int:
    game = random_priority_game(random.Random(args.seed), args.vertices, args.priorities)
    report.result["canonical_input"] = format_arena(game)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--force", action="store_true", help=f"allow exhaustive work above {FORCE_LIMIT} outcomes")
    verifying = argparse.ArgumentParser(add_help=False)
    verifying.add_argument("--verify", action="store_true", help="re-check the result with brute-force oracles")
    solving = argparse.ArgumentParser(add_help=False, parents=[verifying])
    solving.add_argument("--mode", choices=("naive", "greedy"), default="greedy")

    parser = argparse.ArgumentParser(prog="eqtransfer", description="Nash and secure equilibria from determinacy.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lift", parents=[common], help="compare two subsets under the lifted order")
    p.add_argument("order")
    p.add_argument("a", help="comma-separated elements, e.g. 1,2,3 (use {} for the empty set)")
    p.add_argument("b")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check-form", parents=[common], help="determinacy and enforceability of a game form")
    p.add_argument("game")
    p.set_defaults(func=cmd_check_form)

    p = sub.add_parser("solve", parents=[common, solving], help="Nash equilibrium of a determined matrix game")
    p.add_argument("game")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("secure", parents=[common, solving], help="secure equilibrium of a payoff game")
    p.add_argument("game")
    p.set_defaults(func=cmd_secure)

    p = sub.add_parser("priority", parents=[common, solving], help="positional secure equilibrium of a priority game")
    p.add_argument("arena")
    p.add_argument("--all-vertices", action="store_true", help="solve from every vertex in turn")
    p.set_defaults(func=cmd_priority)

    p = sub.add_parser("closure", parents=[common, verifying], help="transitive closure of an acyclic relation")
    p.add_argument("relation")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("generate-tree", parents=[common], help="write a random tree-induced game file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--branching", type=int, default=2)
    p.add_argument("--outcomes", type=int, default=4)
    p.set_defaults(func=cmd_generate_tree)

    p = sub.add_parser("generate-arena", parents=[common], help="write a random priority-game arena file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertices", type=int, default=8)
    p.add_argument("--priorities", type=int, default=4)
    p.set_defaults(func=cmd_generate_arena)
    return parser


def main(argv: Sequence[str] | None = None, out: Callable[[str], None] = print) -> int:
    args = build_parser().parse_args(argv)
    report = RunReport(" ".join(["eqtransfer", *(argv if argv is not None else sys.argv[1:])]))
    start = time.perf_counter()
    try:
        code = args.func(args, report)
    except OracleUnsound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.duration = time.perf_counter() - start
    if args.command.startswith("generate"):
        out(report.result["canonical_input"].rstrip("\n"))
    else:
        out(report.render(args.format))
    if report.failed is not None:
        print(f"verification failed: {report.failed}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
