"""Deviation semantics shared by the stability checkers.

States are identified with graphs through the minimal-profile convention,
so a coalition move is a graph transition subject to consent rules:

* player pairs inside the coalition may be added or removed freely;
* an edge from a member to an outside player can be severed but not
  created (the outsider's consent action is absent in a minimal profile);
* member-to-non-player edges are entirely under the member's control;
* a non-player pair outside E0 survives a move when some player remains
  adjacent to both endpoints, and can be newly interconnected only by a
  member adjacent to both after the move.

Interconnect actions cost nothing and raise neighbour degrees, so keeping
or adding every feasible one weakly improves every member.  Improving-move
search therefore only visits interconnect-maximal moves; pure-deletion
search uses the survive-only closure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import BudgetExceededError
from .model import (
    Edge,
    GameSpec,
    Network,
    build_network,
    edge,
    sole_cover_count,
    utilities_from_edges,
)

DEFAULT_MOVE_BUDGET = 2_000_000


@dataclass(frozen=True)
class DeviationMove:
    """A profitable coalition deviation, replayable on the base network."""

    coalition: tuple[int, ...]
    deleted_edges: frozenset[Edge]
    added_edges: frozenset[Edge]
    result: Network
    deltas: dict[int, Fraction]


def closure(
    net: Network,
    coalition: Sequence[int],
    adjacency: frozenset[Edge],
    allow_new: bool,
) -> frozenset[Edge]:
    """Full post-move edge set implied by the players' adjacency choices.

    ``adjacency`` holds every player-incident edge after the move.  The
    non-player pairs are then forced: E0 persists, an existing added pair
    survives iff some player still covers it, and (when ``allow_new``) any
    pair covered by a coalition member is interconnected.
    """
    n = net.num_players
    adj: dict[int, set[int]] = {i: set() for i in net.players}
    for a, b in adjacency:
        if a <= n:
            adj[a].add(b)
        if b <= n:
            adj[b].add(a)
    out = set(adjacency) | set(net.original_edges)
    members = set(coalition)
    for j in net.nonplayers:
        for l in net.nonplayers:
            if l <= j:
                continue
            e = (j, l)
            if e in net.original_edges:
                continue
            covers = [i for i in net.players if j in adj[i] and l in adj[i]]
            if e in net.edges:
                if covers:
                    out.add(e)
            elif allow_new and any(i in members for i in covers):
                out.add(e)
    return frozenset(out)


def player_incident_edges(net: Network) -> frozenset[Edge]:
    return frozenset(e for e in net.edges if net.is_player(e[0]) or net.is_player(e[1]))


def move_count_bound(net: Network, k: int) -> int:
    """Upper bound on adjacency choices over all coalitions of size <= k."""
    n, m = net.num_players, net.num_nonplayers
    total = 0
    for size in range(1, min(k, n) + 1):
        free = size * (size - 1) // 2 + size * m + size * (n - size)
        total += _comb(n, size) * (1 << free)
    return total


def _comb(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def coalition_adjacency_choices(
    net: Network, coalition: Sequence[int]
) -> Iterator[frozenset[Edge]]:
    """All legal post-move player-incident edge sets for a coalition.

    Deterministic order: choices enumerate binary counters over the sorted
    list of controllable positions, so identical inputs replay identically.
    """
    members = sorted(coalition)
    member_set = set(members)
    fixed = frozenset(
        e
        for e in player_incident_edges(net)
        if not (e[0] in member_set or e[1] in member_set)
    )
    inside = [edge(a, b) for a, b in itertools.combinations(members, 2)]
    to_nonplayers = [edge(i, j) for i in members for j in net.nonplayers]
    to_outside = sorted(
        e
        for e in net.edges
        if (e[0] in member_set) != (e[1] in member_set)
        and net.is_player(e[0])
        and net.is_player(e[1])
    )
    positions = sorted(set(inside + to_nonplayers)) + to_outside
    for bits in range(1 << len(positions)):
        chosen = {positions[t] for t in range(len(positions)) if bits >> t & 1}
        yield frozenset(fixed | chosen)


def utility_pair(net: Network, game: GameSpec, edges: frozenset[Edge]):
    return utilities_from_edges(net.num_players, net.num_nodes, edges, game.alphas)


def make_move(
    net: Network, game: GameSpec, coalition: Sequence[int], new_edges: frozenset[Edge]
) -> DeviationMove:
    result = build_network(
        net.num_players, net.num_nonplayers, new_edges, net.original_edges
    )
    base = utility_pair(net, game, net.edges)
    after = utility_pair(net, game, new_edges)
    deltas = {i: after.of(i) - base.of(i) for i in sorted(coalition)}
    return DeviationMove(
        coalition=tuple(sorted(coalition)),
        deleted_edges=net.edges - new_edges,
        added_edges=new_edges - net.edges,
        result=result,
        deltas=deltas,
    )


def improving_coalition_move(
    net: Network,
    game: GameSpec,
    coalition: Sequence[int],
) -> Optional[frozenset[Edge]]:
    """First interconnect-maximal move that weakly improves every member
    and strictly improves at least one, or None."""
    base = utility_pair(net, game, net.edges)
    members = sorted(coalition)
    seen = set()
    for adjacency in coalition_adjacency_choices(net, coalition):
        new_edges = closure(net, members, adjacency, allow_new=True)
        if new_edges == net.edges or new_edges in seen:
            continue
        seen.add(new_edges)
        after = utility_pair(net, game, new_edges)
        strict = False
        ok = True
        for i in members:
            d = after.of(i) - base.of(i)
            if d < 0:
                ok = False
                break
            if d > 0:
                strict = True
        if ok and strict:
            return new_edges
    return None


def improving_pure_deletion(
    net: Network, game: GameSpec, i: int
) -> Optional[frozenset[Edge]]:
    """Best strictly-improving pure-deletion move of a single player.

    Enumerates subsets of i's incident edges; a dropped connection also
    drops the non-player interconnections only i was covering (the
    survive-only closure).  Returns the resulting edge set of the best
    move (largest gain, then fewest deletions, then lexicographic), or
    None when no deletion strictly improves u_i.
    """
    base = utility_pair(net, game, net.edges)
    incident = sorted(e for e in net.edges if i in e)
    best: Optional[tuple] = None
    for r in range(1, len(incident) + 1):
        for drop in itertools.combinations(incident, r):
            adjacency = frozenset(player_incident_edges(net)) - frozenset(drop)
            new_edges = closure(net, [i], adjacency, allow_new=False)
            gain = utility_pair(net, game, new_edges).of(i) - base.of(i)
            if gain > 0:
                key = (-gain, r, tuple(sorted(drop)))
                if best is None or key < best[0]:
                    best = (key, new_edges)
    return None if best is None else best[1]


def has_improving_pure_deletion(net: Network, game: GameSpec) -> Optional[int]:
    """Player with a strictly-improving pure-deletion move, if any.

    A player covering no non-player pair alone has edge-independent drop
    marginals, so single-edge thresholds suffice for her (complementarity);
    the subset search is only entered when sole-covered pairs exist.
    """
    for i in net.players:
        singles_ok = True
        has_collateral = False
        for e in sorted(net.edges):
            if i not in e:
                continue
            j = e[0] if e[1] == i else e[1]
            if net.is_player(j):
                if net.degree(j) < game.alpha(i):
                    singles_ok = False
            else:
                sole = sole_cover_count(net, j, i)
                if sole:
                    has_collateral = True
                if net.degree(j) + sole < game.alpha(i):
                    singles_ok = False
        if not singles_ok:
            return i
        if has_collateral and improving_pure_deletion(net, game, i) is not None:
            return i
    return None


def blocking_pair(net: Network, game: GameSpec) -> Optional[Edge]:
    """Missing player pair both sides weakly want, one strictly (first in
    lexicographic order)."""
    for i in net.players:
        for j in net.players:
            if j <= i or edge(i, j) in net.edges:
                continue
            gi = Fraction(net.degree(j) + 1) - game.alpha(i)
            gj = Fraction(net.degree(i) + 1) - game.alpha(j)
            if gi >= 0 and gj >= 0 and (gi > 0 or gj > 0):
                return (i, j)
    return None


def check_move_budget(net: Network, k: int, budget: int = DEFAULT_MOVE_BUDGET) -> None:
    bound = move_count_bound(net, k)
    if bound > budget:
        raise BudgetExceededError(
            f"coalition search needs ~{bound} moves for k={k}, over the budget of {budget}"
        )
