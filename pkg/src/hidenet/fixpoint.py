"""Constructive fixpoint algorithms over network states.

``min_including_pans`` grows a graph to the smallest pairwise Nash stable
superset by repeatedly interconnecting non-player neighbours, applying
inclusion-minimal profitable set-additions, and adding blocking player
pairs.  ``max_included_pans`` shrinks a graph to the largest stable subset
by profitable deletions plus a cleanup of uncovered non-player edges.
``min_including_k_pans`` generalises the growth process to coalition
additions of size up to k.

Entry conditions are enforced rather than assumed: growth requires that no
player can profit by pure deletion, shrinking that no profitable
unilateral or bilateral addition exists.  Both checks raise
:class:`PreconditionError` when violated, since the fixpoints are only
canonical under them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError
from .model import Edge, GameSpec, Network, edge, sole_cover_count
from .moves import (
    blocking_pair,
    closure,
    has_improving_pure_deletion,
    improving_pure_deletion,
    player_incident_edges,
    utility_pair,
)
from .stability import improving_set_addition


@dataclass
class OpCounter:
    """Counts elementary steps so runtime growth can be budget-tested."""

    ops: int = 0
    notes: dict = field(default_factory=dict)

    def tick(self, amount: int = 1) -> None:
        self.ops += amount


def _tick(counter: Optional[OpCounter], amount: int = 1) -> None:
    if counter is not None:
        counter.tick(amount)


def _player_order(net: Network, order) -> list[int]:
    players = list(order) if order is not None else list(net.players)
    if sorted(players) != list(net.players):
        raise ValueError("player order must be a permutation of the players")
    return players


def _interconnect_pass(net: Network, players, counter) -> Network:
    new_edges = set(net.edges)
    changed = True
    while changed:
        changed = False
        for i in players:
            mine = sorted(
                v for v in net.nonplayers if edge(i, v) in new_edges
            )
            for j, l in itertools.combinations(mine, 2):
                _tick(counter)
                if edge(j, l) not in new_edges:
                    new_edges.add(edge(j, l))
                    changed = True
    if len(new_edges) == len(net.edges):
        return net
    return net.with_edges(new_edges)


def require_no_profitable_deletion(net: Network, game: GameSpec) -> None:
    offender = has_improving_pure_deletion(net, game)
    if offender is not None:
        raise PreconditionError(
            f"player {offender} has a profitable deletion; the minimal "
            "including stable graph is not defined from here"
        )


def require_no_profitable_addition(net: Network, game: GameSpec) -> None:
    for i in net.players:
        mine = sorted(v for v in net.neighbours(i) if not net.is_player(v))
        for j, l in itertools.combinations(mine, 2):
            if edge(j, l) not in net.edges:
                raise PreconditionError(
                    f"player {i} profits from interconnecting {j} and {l}"
                )
        if improving_set_addition(net, game, i) is not None:
            raise PreconditionError(f"player {i} has a profitable set-addition")
    pair = blocking_pair(net, game)
    if pair is not None:
        raise PreconditionError(f"player pair {pair} profits from connecting")


def min_including_pans(
    net: Network,
    game: GameSpec,
    counter: Optional[OpCounter] = None,
    _order=None,
) -> Network:
    """Smallest pairwise Nash stable graph containing ``net``."""
    require_no_profitable_deletion(net, game)
    players = _player_order(net, _order)
    current = net
    changed = True
    while changed:
        changed = False
        grown = _interconnect_pass(current, players, counter)
        if grown is not current:
            current, changed = grown, True
        for i in players:
            while True:
                found = improving_set_addition(current, game, i)
                _tick(counter, 1 << current.num_nonplayers)
                if found is None:
                    break
                current, changed = current.with_edges(found[1]), True
        for i, j in itertools.combinations(sorted(players), 2):
            _tick(counter)
            e = edge(i, j)
            if e in current.edges:
                continue
            gi = Fraction(current.degree(j) + 1) - game.alpha(i)
            gj = Fraction(current.degree(i) + 1) - game.alpha(j)
            if gi >= 0 and gj >= 0 and (gi > 0 or gj > 0):
                current, changed = current.with_edges(current.edges | {e}), True
    return current


def max_included_pans(
    net: Network,
    game: GameSpec,
    counter: Optional[OpCounter] = None,
    _order=None,
) -> Network:
    """Largest pairwise Nash stable graph contained in ``net``.

    The per-edge deletion thresholds mirror the exact drop marginals:
    deleting a player-player edge (i, j) gains alpha_i - deg(j); deleting a
    player-to-non-player edge additionally forfeits every pair only i was
    holding together.  A final guard removes profitable deletion *bundles*,
    which can exist with no profitable single drop when a player alone
    covers pairs among her neighbours (the collateral is shared).
    """
    require_no_profitable_addition(net, game)
    players = _player_order(net, _order)
    current = net
    changed = True
    while changed:
        changed = False
        # profitable single drops, players then non-players
        deleting = True
        while deleting:
            deleting = False
            for i in players:
                for j in sorted(current.neighbours(i)):
                    if not current.is_player(j):
                        continue
                    _tick(counter)
                    if Fraction(current.degree(j)) < game.alpha(i):
                        adjacency = player_incident_edges(current) - {edge(i, j)}
                        current = current.with_edges(
                            closure(current, [i], adjacency, allow_new=False)
                        )
                        deleting = changed = True
            for i in players:
                for j in sorted(current.neighbours(i)):
                    if current.is_player(j):
                        continue
                    _tick(counter)
                    if (
                        Fraction(current.degree(j) + sole_cover_count(current, j, i))
                        < game.alpha(i)
                    ):
                        adjacency = player_incident_edges(current) - {edge(i, j)}
                        current = current.with_edges(
                            closure(current, [i], adjacency, allow_new=False)
                        )
                        deleting = changed = True
        # cleanup: added non-player edges with no covering player
        drop = {
            e
            for e in current.added_nonplayer_edges()
            if not current.common_player_neighbours(*e)
        }
        if drop:
            current, changed = current.with_edges(current.edges - drop), True
            continue
        # bundle guard: shared collateral can hide behind single-drop tests
        for i in players:
            new_edges = improving_pure_deletion(current, game, i)
            _tick(counter, 1 << current.degree(i))
            if new_edges is not None:
                current, changed = current.with_edges(new_edges), True
                break
    return current


def _coalition_addition(
    net: Network, game: GameSpec, k: int, counter: Optional[OpCounter]
) -> Optional[frozenset[Edge]]:
    """First improving coalition addition, smallest coalition first.

    A move connects every player of U to every target in T, adds the
    chosen missing pairs among W, and interconnects everything a member
    then covers.  All of U union W must weakly profit and someone strictly.
    Ordered by coalition size, then lexicographic coalition, then bundle
    size, so the applied move is a deterministic inclusion-minimal choice.
    """
    base = utility_pair(net, game, net.edges)
    adjacency = player_incident_edges(net)
    for size in range(1, min(k, net.num_players) + 1):
        for coalition in itertools.combinations(net.players, size):
            cset = set(coalition)
            pair_pool = [
                edge(i, j)
                for i, j in itertools.combinations(sorted(coalition), 2)
                if edge(i, j) not in net.edges
            ]
            target_pool = sorted(net.nonplayers)
            candidates = []
            for u_size in range(0, size + 1):
                for u in itertools.combinations(sorted(coalition), u_size):
                    t_sets = (
                        [()]
                        if not u
                        else [
                            t
                            for r in range(1, len(target_pool) + 1)
                            for t in itertools.combinations(target_pool, r)
                        ]
                    )
                    for t in t_sets:
                        for p_r in range(0, len(pair_pool) + 1):
                            for pairs in itertools.combinations(pair_pool, p_r):
                                w = {a for e in pairs for a in e}
                                if set(u) | w != cset:
                                    continue
                                candidates.append((len(t) + len(pairs), u, t, pairs))
            candidates.sort(key=lambda c: (c[0], c[1], c[2], c[3]))
            for _, u, t, pairs in candidates:
                _tick(counter)
                extra = {edge(i, j) for i in u for j in t} | set(pairs)
                new_adj = frozenset(adjacency | extra)
                new_edges = closure(net, sorted(coalition), new_adj, allow_new=True)
                if new_edges == net.edges:
                    continue
                after = utility_pair(net, game, new_edges)
                strict = False
                ok = True
                for i in coalition:
                    d = after.of(i) - base.of(i)
                    if d < 0:
                        ok = False
                        break
                    if d > 0:
                        strict = True
                if ok and strict:
                    return new_edges
    return None


def min_including_k_pans(
    net: Network,
    game: GameSpec,
    k: int,
    counter: Optional[OpCounter] = None,
    _order=None,
) -> Network:
    """Smallest k-strong pairwise Nash stable graph containing ``net``."""
    if k == 1:
        return min_including_pans(net, game, counter, _order)
    require_no_profitable_deletion(net, game)
    players = _player_order(net, _order)
    current = net
    changed = True
    while changed:
        changed = False
        grown = _interconnect_pass(current, players, counter)
        if grown is not current:
            current, changed = grown, True
        while True:
            found = _coalition_addition(current, game, k, counter)
            if found is None:
                break
            current, changed = current.with_edges(found), True
    return current
