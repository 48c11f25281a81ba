"""Replaying firing sequences, and moving a firing along an embedding."""

from __future__ import annotations

from typing import Iterable

from .net import Firing, Marking, NuNet, fire, fresh_names
from .order import leq_alpha


class ReplayError(RuntimeError):
    pass


def replay(net: NuNet, m0: Marking, firings: Iterable[Firing]) -> Marking:
    """Fire ``firings`` in order from ``m0``; raises ReplayError on a disabled step."""
    m = m0
    for k, f in enumerate(firings):
        try:
            m = fire(net, m, f.transition, f.sigma)
        except ValueError as exc:
            raise ReplayError(f"step {k} ({f.transition}): {exc}") from exc
    return m


def transport(net: NuNet, source: Marking, firing: Firing, target: Marking) -> Firing:
    """Translate a firing enabled at ``source`` into one enabled at ``target``.

    Requires ``source`` to embed into ``target`` up to renaming. Plain
    variables follow the embedding, fresh ones get names fresh for ``target``.
    """
    iota = leq_alpha(net, source, target)
    if iota is None:
        raise ReplayError("source marking does not embed into target")
    info = net.info(firing.transition)
    sigma = firing.sigma
    mode = {v: iota[sigma[v]] for v in info.plain}
    mode.update(zip(info.fresh, fresh_names(target, len(info.fresh))))
    return Firing.of(firing.transition, mode)


def concretize(net: NuNet, m0: Marking, steps) -> tuple[list[Firing], Marking]:
    """Turn ``(representative, firing)`` steps into a sequence replayable from ``m0``.

    Each representative must embed into the marking reached so far; this is
    how witnesses found on canonical representatives get real names.
    """
    m = m0
    out = []
    for rep, f in steps:
        g = transport(net, rep, f, m)
        m = fire(net, m, g.transition, g.sigma)
        out.append(g)
    return out, m
