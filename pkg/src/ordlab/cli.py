"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (UNSAT found, certificate
rejected, cone invalid), 2 bad input, 3 word problem undecided, 4 budget
exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import kernels
from .ball import build_ball
from .certificates import CertificateError, RefutationCertificate, check_certificate
from .cones import GroupMismatch, get_cone, restrict_to_ball
from .presentation import Presentation, PresentationError, parse_presentation
from .solver import PREBIORDER, PREORDER, find, is_prebiorder, is_preorder
from .space import ConstraintOutsideBall, build_diagram, neighborhood_query
from .wordproblem import Budgets, BudgetExhausted, WordProblemUndecided, get_backend

log = logging.getLogger("ordlab")

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNDECIDED, EXIT_BUDGET = 0, 1, 2, 3, 4
MODE_NAMES = {"lo": PREORDER, "bo": PREBIORDER}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    presentation: Optional[Path]
    k_lo: int
    k_hi: int
    mode: str
    budgets: Budgets
    ball_cap: int
    node_cap: int
    out: Optional[Path]
    fmt: str

    def __post_init__(self):
        for name in ("ball_cap", "node_cap"):
            if getattr(self, name) < 1:
                raise CliError(f"--{name.replace('_', '-')} must be positive", EXIT_INPUT)
        b = self.budgets
        if min(b.kb_max_rules, b.kb_max_len, b.tc_max_cosets) < 1:
            raise CliError("budgets must be positive", EXIT_INPUT)
        if self.k_lo < 1 or self.k_hi < self.k_lo:
            raise CliError("radius must be >= 1 and ranges ascending", EXIT_INPUT)

    @property
    def radii(self) -> range:
        return range(self.k_lo, self.k_hi + 1)


def parse_radius(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        k = int(text)
        return k, k
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <n> or <a>..<b>, got {text!r}") from None


def parse_constraint(text: str, p: Presentation):
    t = text.replace(" ", "")
    for op, sign in ((">1", 1), ("<1", -1)):
        if t.endswith(op):
            try:
                return p.word(t[:-2]), sign
            except PresentationError as exc:
                raise CliError(f"bad constraint {text!r}: {exc}", EXIT_INPUT) from None
    raise CliError(f"bad constraint {text!r}; expected '<word>>1' or '<word><1'", EXIT_INPUT)


# ---------------------------------------------------------------------------
# output

def render_human(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.extend(render_human(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(val)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                sub = render_human(item, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {json.dumps(item)}")
    else:
        lines.append(pad + json.dumps(obj))
    return lines


def format_output(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2) + "\n"
    return "\n".join(render_human(obj)) + "\n"


def write_atomic(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(cfg: RunConfig, obj: dict):
    text = format_output(obj, cfg.fmt)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        write_atomic(cfg.out, text)


# ---------------------------------------------------------------------------
# shared setup

def load_presentation(path: Optional[Path]) -> Presentation:
    if path is None:
        raise CliError("--presentation is required", EXIT_INPUT)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read presentation: {exc}", EXIT_INPUT) from None
    try:
        return parse_presentation(text)
    except PresentationError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


def obtain_backend(cfg: RunConfig, p: Presentation):
    try:
        return get_backend(p, cfg.budgets)
    except WordProblemUndecided as exc:
        raise CliError(str(exc), EXIT_UNDECIDED) from None


def ball_at(cfg: RunConfig, backend, k: int):
    try:
        return build_ball(backend, k, cap=cfg.ball_cap)
    except BudgetExhausted as exc:
        raise CliError(f"radius {k}: {exc}", EXIT_BUDGET) from None


def header(cfg: RunConfig, p: Presentation, backend) -> dict:
    return {"command": cfg.command, "group": p.text(), "backend": backend.kind}


# ---------------------------------------------------------------------------
# commands

def cmd_ball(cfg: RunConfig, args) -> int:
    p = load_presentation(cfg.presentation)
    backend = obtain_backend(cfg, p)
    balls = [ball_at(cfg, backend, k).to_json() for k in cfg.radii]
    out = header(cfg, p, backend)
    if len(balls) == 1:
        out.update(balls[0])
    else:
        out["balls"] = balls
    emit(cfg, out)
    return EXIT_OK


def cmd_test(cfg: RunConfig, args) -> int:
    p = load_presentation(cfg.presentation)
    backend = obtain_backend(cfg, p)
    results = []
    verdict = "sat"
    code = EXIT_OK
    cert_text = None
    cert_path = Path(args.cert_out) if args.cert_out else None
    for k in cfg.radii:
        ball = ball_at(cfg, backend, k)
        outcome = find(ball, cfg.mode, node_cap=cfg.node_cap)
        log.info("k=%d |B|=%d %s", k, len(ball), outcome.status)
        if outcome.status == "undecided":
            raise CliError(f"radius {k}: {outcome.reason}", EXIT_BUDGET)
        if outcome.status == "unsat":
            if cert_path is None:
                cert_path = Path(f"ordlab-{args.order}-k{k}.cert.json")
            cert_text = outcome.certificate.dumps()
            results.append(outcome.to_json(ball, str(cert_path)))
            verdict, code = "unsat", EXIT_NEGATIVE
            break
        results.append(outcome.to_json(ball))
    out = header(cfg, p, backend)
    out.update({"mode": args.order, "results": results, "verdict": verdict,
                "first_unsat_radius": results[-1]["radius"] if verdict == "unsat" else None})
    if cert_text is not None:
        write_atomic(cert_path, cert_text)
    emit(cfg, out)
    return code


def cmd_check_cert(cfg: RunConfig, args) -> int:
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read certificate: {exc}", EXIT_INPUT) from None
    try:
        cert = RefutationCertificate.loads(text)
    except CertificateError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    p = load_presentation(cfg.presentation) if cfg.presentation else cert.presentation
    backend = obtain_backend(cfg, p)
    if cert.presentation.names != p.names:
        accepted, reason = False, "generator names differ from the presentation"
    else:
        ball = ball_at(cfg, backend, cert.radius)
        try:
            accepted = check_certificate(backend, ball, cert)
            reason = "" if accepted else "checker rejected the certificate"
        except CertificateError as exc:
            accepted, reason = False, str(exc)
    out = header(cfg, p, backend)
    out.update({"certificate": str(args.certificate), "kind": cert.kind, "radius": cert.radius,
                "leaves": len(cert.leaves()), "accepted": accepted})
    if reason:
        out["reason"] = reason
    emit(cfg, out)
    return EXIT_OK if accepted else EXIT_NEGATIVE


def cmd_enumerate(cfg: RunConfig, args) -> int:
    p = load_presentation(cfg.presentation)
    backend = obtain_backend(cfg, p)
    if args.limit < 1:
        raise CliError("--limit must be positive", EXIT_INPUT)
    constraints = [parse_constraint(c, p) for c in args.constrain or ()]
    try:
        diagram = build_diagram(backend, cfg.k_hi, cfg.mode, k_min=cfg.k_lo, limit=args.limit,
                                stop_at_empty=False, cap=cfg.ball_cap)
    except BudgetExhausted as exc:
        raise CliError(str(exc), EXIT_BUDGET) from None
    out = header(cfg, p, backend)
    out.update(diagram.to_json(with_assignments=args.assignments))
    if constraints:
        cons = [{"word": p.format_word(w), "sign": s} for w, s in constraints]
        matched = []
        for level in diagram.levels:
            try:
                idx = neighborhood_query(diagram, level.radius, constraints)
            except ConstraintOutsideBall as exc:
                raise CliError(str(exc), EXIT_INPUT) from None
            matched.append({"radius": level.radius, "count": len(idx), "indices": idx})
        out["constraints"] = cons
        out["neighborhood"] = matched
    emit(cfg, out)
    return EXIT_OK


def cmd_verify_cone(cfg: RunConfig, args) -> int:
    p = load_presentation(cfg.presentation)
    try:
        cone = get_cone(args.cone)
        cone.check_binding(p)
    except GroupMismatch as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    backend = obtain_backend(cfg, p)
    rows = []
    all_ok = True
    for k in cfg.radii:
        ball = ball_at(cfg, backend, k)
        try:
            a = restrict_to_ball(cone, ball)
        except GroupMismatch as exc:
            raise CliError(str(exc), EXIT_INPUT) from None
        pre, bi = is_preorder(ball, a), is_prebiorder(ball, a)
        ok = bi if cfg.mode == PREBIORDER else pre
        all_ok &= ok
        rows.append({"radius": k, "ball_size": len(ball), "positive": len(a.positive),
                     "preorder": pre, "prebiorder": bi, "valid": ok})
    out = header(cfg, p, backend)
    out.update({"cone": args.cone, "claims": list(cone.claims), "mode": args.mode,
                "results": rows, "valid": all_ok})
    emit(cfg, out)
    return EXIT_OK if all_ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--presentation", type=Path, help="presentation file")
    common.add_argument("-k", dest="radius", type=parse_radius, default=(1, 1), help="radius <n> or range <a>..<b>")
    common.add_argument("--kb-max-rules", type=int, default=Budgets.kb_max_rules)
    common.add_argument("--kb-max-len", type=int, default=Budgets.kb_max_len)
    common.add_argument("--tc-max-cosets", type=int, default=Budgets.tc_max_cosets)
    common.add_argument("--ball-cap", type=int, default=100_000)
    common.add_argument("--node-cap", type=int, default=10_000_000)
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("human", "json"), default="human")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="ordlab", description="Orderability tests for finitely presented groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ball", parents=[common], help="dump the Cayley ball B_k")
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("test", parents=[common], help="search for preorders (lo) or pre-biorders (bo)")
    sp.add_argument("order", choices=("lo", "bo"))
    sp.add_argument("--cert-out", help="where to write the refutation certificate")
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("check-cert", parents=[common], help="check a refutation certificate")
    sp.add_argument("certificate")
    sp.set_defaults(func=cmd_check_cert)

    sp = sub.add_parser("enumerate", parents=[common], help="enumerate preorders per radius")
    sp.add_argument("--mode", choices=("lo", "bo"), default="lo")
    sp.add_argument("--constrain", action="append", metavar="INEQ", help="'<word>>1' or '<word><1'; repeatable")
    sp.add_argument("--limit", type=int, default=100_000, help="max assignments per level")
    sp.add_argument("--assignments", action="store_true", help="include full assignments in the output")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify-cone", parents=[common], help="restrict a known cone to balls and verify it")
    sp.add_argument("cone", help="lex:<n>, slope or klein")
    sp.add_argument("--mode", choices=("lo", "bo"), default="lo")
    sp.set_defaults(func=cmd_verify_cone)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    kernels.configure_threads()
    order = getattr(args, "order", None) or getattr(args, "mode", None) or "lo"
    try:
        cfg = RunConfig(
            command=args.command,
            presentation=args.presentation,
            k_lo=args.radius[0],
            k_hi=args.radius[1],
            mode=MODE_NAMES[order],
            budgets=Budgets(args.kb_max_rules, args.kb_max_len, args.tc_max_cosets),
            ball_cap=args.ball_cap,
            node_cap=args.node_cap,
            out=args.out,
            fmt=args.fmt,
        )
        return args.func(cfg, args)
    except CliError as exc:
        print(f"ordlab: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
