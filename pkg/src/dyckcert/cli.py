"""Command-line interface.

Exit codes: 0 for yes / accept / nonempty / member, 1 for the negative
answer, 2 for unreadable input or a usage error.  Identical arguments and
inputs always produce identical bytes.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import certno, certyes, generators, oracle, pushdown, reductions, solver
from .formats import FormatError, hw_tokens, parse_document, serialize_document
from .model import Bracket, SeparatorMS, hw_shape_error

YES, NO, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str, fmt: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_document(fmt, data)
    except FormatError as exc:
        raise FormatError(exc.line, f"{path}: {exc.reason}") from None


def _write(path: str | None, doc, out) -> None:
    data = serialize_document(doc)
    if path is None or path == "-":
        out.write(data.decode("utf-8"))
    else:
        Path(path).write_bytes(data)


def _word(arg: str) -> tuple:
    if arg == "":
        return ()
    return tuple(arg.split(",")) if "," in arg else tuple(arg)


def _say(out, text: str) -> None:
    out.write(text + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(a, out):
    ok = solver.decide(_read(a.instance, "d2r"))
    _say(out, "yes" if ok else "no")
    return YES if ok else NO


def cmd_certify(a, out):
    inst = _read(a.instance, "d2r")
    rel = solver.close(inst)
    if rel.holds(solver.S, inst.s, inst.t):
        _write(a.output, certyes.extract_walk_scheme(inst, rel), out)
        _say(out, "yes")
    else:
        _write(a.output, certno.extract_separator(inst, rel), out)
        _say(out, "no")
    return YES


def _verdict(out, v) -> int:
    _say(out, str(v))
    return YES if v.ok else NO


def cmd_check_yes(a, out):
    inst = _read(a.instance, "d2r")
    return _verdict(out, certyes.verify_walk_scheme(inst, _read(a.certificate, "wsc")))


def cmd_check_no(a, out):
    inst = _read(a.instance, "d2r")
    b = _read(a.certificate, "sep")
    if isinstance(b, SeparatorMS):
        if b.MS.shape[0] != inst.n:
            _say(out, f"reject: MS dimension {b.MS.shape[0]} differs from instance size {inst.n}")
            return NO
        b = certno.complete_from_MS(inst, b)
    if a.rand:
        return _verdict(out, certno.check_separator_rand(inst, b, a.seed, a.reps))
    return _verdict(out, certno.check_separator_det(inst, b))


def cmd_prestar(a, out):
    sat = pushdown.prestar(_read(a.pds, "pds"), _read(a.pauto, "pauto"))
    _write(a.output, sat, out)
    return YES


def cmd_pds_certify(a, out):
    pds, aut = _read(a.pds, "pds"), _read(a.pauto, "pauto")
    q0, g0 = a.config
    if pushdown.decide_pushdown_reach(pds, q0, g0, aut):
        _say(out, "reachable")
        return NO
    _write(a.output, pushdown.extract_pds_certificate(pds, aut), out)
    _say(out, "unreachable")
    return YES


def cmd_pds_check(a, out):
    pds, aut = _read(a.pds, "pds"), _read(a.pauto, "pauto")
    cert = _read(a.certificate, "pdscert")
    q0, g0 = a.config
    mode = "rand" if a.rand else "det"
    return _verdict(out, pushdown.check_pds_certificate(pds, aut, q0, g0, cert, mode,
                                                         a.seed, a.reps))


def cmd_pda_empty(a, out):
    res = pushdown.pda_emptiness(_read(a.pda, "pda"))
    if a.output:
        _write(a.output, res.certificate, out)
    if a.image:
        _write(a.image, res.instance, out)
    _say(out, "empty" if res.empty else "nonempty")
    return NO if res.empty else YES


def cmd_reduce(a, out):
    kind = a.kind
    if kind == "cfl-to-d2r":
        if len(a.inputs) != 2:
            raise UsageError("cfl-to-d2r needs GRAPH.cflg LANG.pda")
        doc = reductions.cfl_to_dyck2(_read(a.inputs[0], "cflg"), _read(a.inputs[1], "pda"))
    elif kind == "2npda-to-pda":
        if len(a.inputs) != 2:
            raise UsageError("2npda-to-pda needs MACHINE.npda2 WORD")
        doc = reductions.twonpda_word_to_pda(_read(a.inputs[0], "npda2"), _word(a.inputs[1]))
    elif len(a.inputs) != 1:
        raise UsageError(f"{kind} needs exactly one input file")
    elif kind == "pda-to-d2r":
        doc = reductions.pda_to_dyck2(_read(a.inputs[0], "pda"))
    else:
        inst = _read(a.inputs[0], "d2r")
        if inst.s == inst.t and inst.n > 1:
            sys.stderr.write("source equals target: answered directly, no word written\n")
            _say(out, "yes")
            return YES
        doc = reductions.dyck2_to_hardest_word(inst)
    _write(a.output, doc, out)
    return YES


def cmd_decode_hw(a, out):
    _write(a.output, reductions.decode_hardest_word(_read(a.word, "hw")), out)
    return YES


def cmd_hw_member(a, out):
    try:
        toks = hw_tokens(Path(a.word).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {a.word}: {exc.strerror}") from None
    err = hw_shape_error(toks)
    if err is not None and err.startswith("unknown token"):
        raise FormatError(None, f"{a.word}: {err}")
    ok = reductions.hardest_membership(toks)
    _say(out, "yes" if ok else "no")
    return YES if ok else NO


def cmd_2npda_run(a, out):
    ok = reductions.twonpda_recognize(_read(a.machine, "npda2"), _word(a.word))
    _say(out, "yes" if ok else "no")
    return YES if ok else NO


def cmd_gen(a, out):
    if a.size < 1:
        raise UsageError("--size must be positive")
    if a.kind == "d2r":
        doc = generators.random_instance(a.seed, a.size, generators.DENSITIES[a.density])
    elif a.kind == "pds":
        if not a.output or a.output == "-":
            raise UsageError("gen pds needs -o PREFIX (writes PREFIX.pds and PREFIX.pauto)")
        pds, aut = generators.random_pds(a.seed, max_states=a.size)
        _write(a.output + ".pds", pds, out)
        _write(a.output + ".pauto", aut, out)
        return YES
    elif a.kind == "pda":
        doc = generators.random_pda(a.seed, max_states=a.size)
    else:
        doc = generators.random_2npda(a.seed, max_states=a.size)
    _write(a.output, doc, out)
    return YES


def cmd_oracle(a, out):
    if a.kind == "walk":
        if len(a.args) != 1:
            raise UsageError("oracle walk needs INSTANCE.d2r")
        w = oracle.bounded_walk_search(_read(a.args[0], "d2r"), a.max_len)
        if w is None:
            _say(out, f"not found within {a.max_len}")
            return NO
        _say(out, " ".join([str(w.start)] + [f"{lab}:{v}" for v, lab in w.steps]))
        return YES
    if a.kind == "word":
        try:
            word = [Bracket.from_token(t) for t in a.args]
        except ValueError as exc:
            raise FormatError(None, str(exc)) from None
        ok = oracle.dyck2_word_check(word)
        _say(out, "balanced" if ok else "unbalanced")
        return YES if ok else NO
    if len(a.args) != 2:
        raise UsageError("oracle 2npda needs MACHINE.npda2 WORD")
    res = oracle.bounded_2npda_search(_read(a.args[0], "npda2"), _word(a.args[1]),
                                      a.stack_cap, a.config_cap)
    _say(out, res.status)
    return {oracle.ACCEPTS: YES, oracle.REJECTS: NO}.get(res.status, ERROR)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _seeded(p, rand=True):
    if rand:
        p.add_argument("--rand", action="store_true", help="randomized product checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyckcert", description="Certifying Dyck-2 reachability")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a .d2r instance")
    p.add_argument("instance")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("certify", help="write a .wsc (yes) or .sep (no) certificate")
    p.add_argument("instance")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("check-yes", help="verify a walk scheme")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(fn=cmd_check_yes)

    p = sub.add_parser("check-no", help="verify a separator (sep or sep-ms)")
    p.add_argument("instance")
    p.add_argument("certificate")
    _seeded(p)
    p.set_defaults(fn=cmd_check_no)

    p = sub.add_parser("prestar", help="saturate a P-automaton")
    p.add_argument("pds")
    p.add_argument("pauto")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_prestar)

    for name, fn in (("pds-certify", cmd_pds_certify), ("pds-check", cmd_pds_check)):
        p = sub.add_parser(name)
        p.add_argument("pds")
        p.add_argument("pauto")
        if name == "pds-check":
            p.add_argument("certificate")
            _seeded(p)
        else:
            p.add_argument("-o", "--output")
        p.add_argument("--config", nargs=2, metavar=("STATE", "SYMBOL"), required=True)
        p.set_defaults(fn=fn)

    p = sub.add_parser("pda-empty", help="decide PDA emptiness through its Dyck-2 image")
    p.add_argument("pda")
    p.add_argument("-o", "--output", help="certificate of the image instance")
    p.add_argument("--image", help="write the image instance")
    p.set_defaults(fn=cmd_pda_empty)

    p = sub.add_parser("reduce")
    p.add_argument("kind", choices=["cfl-to-d2r", "2npda-to-pda", "pda-to-d2r", "d2r-to-hw"])
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("decode-hw")
    p.add_argument("word")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_decode_hw)

    p = sub.add_parser("hw-member")
    p.add_argument("word")
    p.set_defaults(fn=cmd_hw_member)

    p = sub.add_parser("2npda-run", help="WORD is comma-separated, or one letter per character")
    p.add_argument("machine")
    p.add_argument("word")
    p.set_defaults(fn=cmd_2npda_run)

    p = sub.add_parser("gen", help="seeded random documents (PCG64)")
    p.add_argument("kind", choices=["d2r", "pds", "pda", "2npda"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--density", choices=sorted(generators.DENSITIES), default="medium")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("oracle", help="bounded brute-force searches")
    p.add_argument("kind", choices=["walk", "word", "2npda"])
    p.add_argument("args", nargs="*")
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--stack-cap", type=int, default=8)
    p.add_argument("--config-cap", type=int, default=100_000)
    p.set_defaults(fn=cmd_oracle)
    return ap


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else YES
    try:
        return args.fn(args, out)
    except FormatError as exc:
        sys.stderr.write(f"format error: {exc}\n")
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
    except ValueError as exc:
        # convention violations, head escapes, off-tape words and the like
        sys.stderr.write(f"invalid input: {exc}\n")
    return ERROR


def main() -> None:
    sys.exit(run())
