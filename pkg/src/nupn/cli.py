"""Command-line front end.

Exit codes: 0 definitive positive answer or success, 1 definitive negative
answer, 2 usage or parse error, 3 resource exhaustion or not applicable.
Source nets (``pt``, ``inhibitor``, ``reset``) are analysed through their
name-net image.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import io
from .backward import coverable, restricted_coverable
from .forward import bounded, measure, reachable_alpha, terminates
from .limits import (BOUNDED, COVERABLE, EXHAUSTED, NOT_APPLICABLE, REACHABLE, TERMINATING,
                     Limits)
from .net import enabled_firings, fire, is_normal, validate_net
from .order import canonicalize, format_canonical
from .witness import ReplayError, replay

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_GAVE_UP = 0, 1, 2, 3

_POSITIVE = {COVERABLE, TERMINATING, BOUNDED, REACHABLE}
_GAVE_UP = {EXHAUSTED, NOT_APPLICABLE}


def _exit_for(verdict):
    if verdict in _POSITIVE:
        return EXIT_OK
    if verdict in _GAVE_UP:
        return EXIT_GAVE_UP
    return EXIT_NO


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _model(path):
    return io.load(io.parse(_read(path)))


def _target(model, path):
    return model.marking(io.parse_marking(model.doc, _read(path)))


def _limits(args):
    return Limits(max_basis=args.limit_basis, max_nodes=args.limit_nodes)


def cmd_validate(args, out):
    model = _model(args.file)
    problems = validate_net(model.net)
    out.write(f"verdict: {'valid' if not problems else 'invalid'}\n")
    out.write(f"normal: {'yes' if is_normal(model.net) else 'no'}\n")
    for p in problems:
        out.write(f"violation: {p}\n")
    return EXIT_OK if not problems else EXIT_NO


def cmd_canon(args, out):
    model = _model(args.file)
    out.write(format_canonical(model.net.places, canonicalize(model.net, model.initial)) + "\n")
    return EXIT_OK


def cmd_simulate(args, out):
    model = _model(args.file)
    rng = random.Random(args.seed)
    m = model.initial
    trace = []
    for _ in range(args.steps):
        options = enabled_firings(model.net, m)
        if not options:
            break
        f = rng.choice(options)
        m = fire(model.net, m, f.transition, f.sigma)
        trace.append(f)
    out.write("verdict: simulated\n")
    out.write(f"stats: steps={len(trace)} deadlock={'yes' if not enabled_firings(model.net, m) else 'no'}\n")
    out.write("witness:\n")
    for f in trace:
        out.write(io.render_firing(f, model.names) + "\n")
    out.write("final:\n")
    text = model.render_marking(m)
    out.write(text + "\n" if text else "")
    return EXIT_OK


def _cover(args, out, fn):
    if not args.target:
        raise _Usage("--target is required")
    model = _model(args.file)
    res = fn(model.net, model.initial, _target(model, args.target), _limits(args))
    out.write(io.render_result(res, model.names))
    return _exit_for(res.verdict)


def cmd_cover(args, out):
    return _cover(args, out, coverable)


def cmd_cover_restricted(args, out):
    return _cover(args, out, restricted_coverable)


def cmd_terminates(args, out):
    model = _model(args.file)
    res = terminates(model.net, model.initial, _limits(args))
    out.write(io.render_result(res, model.names))
    return _exit_for(res.verdict)


def cmd_bounded(args, out):
    model = _model(args.file)
    res = bounded(model.net, model.initial, _limits(args))
    out.write(io.render_result(res, model.names))
    return _exit_for(res.verdict)


def cmd_reach(args, out):
    if not args.target:
        raise _Usage("--target is required")
    model = _model(args.file)
    res = reachable_alpha(model.net, model.initial, _target(model, args.target), _limits(args))
    out.write(io.render_result(res, model.names))
    return _exit_for(res.verdict)


def cmd_measure(args, out):
    model = _model(args.file)
    res = measure(model.net, model.initial, args.steps)
    out.write("verdict: measured\n")
    out.write(f"stats: explored={res.explored} width={res.width} depth={res.depth} "
              f"exact={'yes' if res.exact else 'no'}\n")
    return EXIT_OK


def cmd_translate(args, out):
    model = _model(args.file)
    note = [] if model.doc.kind == "nu" else [f"image of {model.doc.kind} net {model.doc.name}"]
    out.write(io.render(io.to_document(model, comments=model.doc.comments + note)))
    return EXIT_OK


def cmd_replay(args, out):
    model = _model(args.file)
    firings = io.parse_firings(_read(args.witness), model.names)
    try:
        m = replay(model.net, model.initial, firings)
    except ReplayError as exc:
        out.write("verdict: replay-failed\n")
        sys.stderr.write(f"replay failed: {exc}\n")
        return EXIT_NO
    out.write("verdict: replayed\n")
    out.write(f"stats: steps={len(firings)}\n")
    out.write("final:\n")
    text = model.render_marking(m)
    out.write(text + "\n" if text else "")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "canon": cmd_canon,
    "simulate": cmd_simulate,
    "cover": cmd_cover,
    "cover-restricted": cmd_cover_restricted,
    "terminates": cmd_terminates,
    "bounded": cmd_bounded,
    "reach": cmd_reach,
    "measure": cmd_measure,
    "translate": cmd_translate,
    "replay": cmd_replay,
}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser():
    defaults = Limits()
    parser = _Parser(prog="nupn", description="Analyse Petri nets with name creation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file")
        if name == "replay":
            p.add_argument("witness", help="report or file with 'fire' lines")
        p.add_argument("--limit-nodes", type=int, default=defaults.max_nodes)
        p.add_argument("--limit-basis", type=int, default=defaults.max_basis)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--target")
        p.add_argument("--steps", type=int, default=1000 if name == "measure" else 20)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except _Usage as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except io.ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
