"""Static BDD variable orders derived from net structure.

An order is a list of place indices from the top BDD level down.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .net import Kpn, KpnError


def structural_order(net: Kpn) -> list[int]:
    """Follow the token flow from the initial marking.

    Starting from an initially marked place, keep adding every place that a
    transition can mark once all of its input places are already placed.
    When that stalls, seed again with the next initially marked place.
    Places that can never be reached this way go last. Ties are broken by
    place index, so the result is deterministic.
    """
    order: list[int] = []
    placed = set()
    producers = [[] for _ in range(net.num_places)]
    for t in net.transitions:
        for p in t.post:
            producers[p].append(t)
    seeds = [p for p in range(net.num_places) if net.initial[p]]
    for seed in seeds:
        if seed in placed:
            continue
        order.append(seed)
        placed.add(seed)
        grown = True
        while grown:
            grown = False
            for p in range(net.num_places):
                if p in placed:
                    continue
                if any(t.pre <= placed for t in producers[p]):
                    order.append(p)
                    placed.add(p)
                    grown = True
    order.extend(p for p in range(net.num_places) if p not in placed)
    return order


_TENTH = Fraction(1, 10)
_FIFTH = Fraction(1, 5)


def noack_weights(net: Kpn, assigned) -> dict[int, Fraction]:
    """Weight of every unassigned place given the already ``assigned`` set."""
    s = set(assigned)
    into = [[] for _ in range(net.num_places)]
    out = [[] for _ in range(net.num_places)]
    for t in net.transitions:
        for p in t.post:
            into[p].append(t)
        for p in t.pre:
            out[p].append(t)
    weights = {}
    for p in range(net.num_places):
        if p in s:
            continue
        total = Fraction(0)
        for t in into[p]:
            if t.pre:
                k = len(t.pre & s)
                total += (Fraction(k) if k else _TENTH) / len(t.pre)
            if t.post:
                k = len(t.post & s)
                total += (Fraction(2 * k) if k else _TENTH) / len(t.post)
        for t in out[p]:
            if t.pre:
                total += Fraction(len(t.pre & s) + 1, len(t.pre))
            if t.post:
                k = len(t.post & s)
                total += (Fraction(2 * k) if k else _FIFTH) / len(t.post)
        neighbours = {id(t) for t in into[p]} | {id(t) for t in out[p]}
        weights[p] = total / len(neighbours) if neighbours else Fraction(0)
    return weights


def noack_order(net: Kpn) -> list[int]:
    """Greedy weight heuristic filling levels from the bottom up.

    The heaviest unassigned place takes the lowest free level; weights are
    recomputed after each pick. Ties go to the lowest place index.
    """
    picked: list[int] = []
    while len(picked) < net.num_places:
        weights = noack_weights(net, picked)
        best = max(weights, key=lambda p: (weights[p], -p))
        picked.append(best)
    return picked[::-1]


def read_order(path, net: Kpn) -> list[int]:
    """Read an order file: one place name per line, top level first."""
    names = [ln.strip() for ln in Path(path).read_text().splitlines()]
    names = [n for n in names if n and not n.startswith("#")]
    order = [net.place(n) for n in names]
    if sorted(order) != list(range(net.num_places)):
        raise KpnError("bad order file", "must list every place exactly once")
    return order


def write_order(path, net: Kpn, order) -> None:
    Path(path).write_text("".join(net.places[p] + "\n" for p in order))


def order_names(net: Kpn, order) -> list[str]:
    return [net.places[p] for p in order]
