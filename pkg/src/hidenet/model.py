"""Core data model for the hiders' game.

Nodes are labelled 1..n+m with the n strategic players first and the m
passive non-players after them.  A network state is an undirected graph
over those nodes together with the set of original (pre-play) edges E0,
which may only join non-players.  Player utility is

    u_i = sum(deg(j) for j in neighbours(i)) - alpha_i * deg(i)

with alpha_i an exact rational, so every stability question reduces to
exact integer/rational comparisons; ties are semantically meaningful and
floating point is never used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ValidationError

Edge = tuple[int, int]


def edge(a: int, b: int) -> Edge:
    """Normalise an unordered node pair."""
    if a == b:
        raise ValidationError(f"self-loop on node {a}")
    return (a, b) if a < b else (b, a)


def edge_set(pairs: Iterable[Sequence[int]]) -> frozenset[Edge]:
    return frozenset(edge(a, b) for a, b in pairs)


def as_fraction(value) -> Fraction:
    """Exact conversion; accepts Fraction, int, or strings like '3/2' / '1.1'."""
    if isinstance(value, float):
        raise ValidationError(
            f"refusing float alpha {value!r}: pass a string or Fraction for exactness"
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational {value!r}: {exc}") from None


@dataclass(frozen=True)
class GameSpec:
    """Per-player visibility-aversion coefficients alpha_1..alpha_n."""

    alphas: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(as_fraction(a) for a in self.alphas))
        if len(self.alphas) < 2:
            raise ValidationError("a game needs at least two players")
        for i, a in enumerate(self.alphas, start=1):
            if a < 0:
                raise ValidationError(f"negative alpha for player {i}: {a}")

    @property
    def num_players(self) -> int:
        return len(self.alphas)

    def alpha(self, i: int) -> Fraction:
        return self.alphas[i - 1]


@dataclass(frozen=True)
class Network:
    """An immutable graph state of the hiders' game.

    ``edges`` always contains ``original_edges``.  Every added edge between
    two non-players carries a sustainer: the player whose interconnect
    action keeps it alive under the minimal-profile convention.  Sustainer
    attribution is metadata for :func:`effective_degree` and
    :func:`minimal_profile`; utilities and stability verdicts never depend
    on it.
    """

    num_players: int
    num_nonplayers: int
    original_edges: frozenset[Edge]
    edges: frozenset[Edge]
    sustainers: Mapping[Edge, int] = field(default_factory=dict)

    @property
    def num_nodes(self) -> int:
        return self.num_players + self.num_nonplayers

    @property
    def players(self) -> range:
        return range(1, self.num_players + 1)

    @property
    def nonplayers(self) -> range:
        return range(self.num_players + 1, self.num_nodes + 1)

    @property
    def nodes(self) -> range:
        return range(1, self.num_nodes + 1)

    def is_player(self, v: int) -> bool:
        return 1 <= v <= self.num_players

    @cached_property
    def _adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(s) for v, s in adj.items()}

    def neighbours(self, v: int) -> frozenset[int]:
        try:
            return self._adjacency[v]
        except KeyError:
            raise ValidationError(f"unknown node {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def player_degree(self, v: int) -> int:
        return sum(1 for u in self.neighbours(v) if self.is_player(u))

    @property
    def added_edges(self) -> frozenset[Edge]:
        return self.edges - self.original_edges

    def added_nonplayer_edges(self) -> frozenset[Edge]:
        return frozenset(
            e for e in self.added_edges if not self.is_player(e[0]) and not self.is_player(e[1])
        )

    def common_player_neighbours(self, j: int, l: int) -> frozenset[int]:
        return frozenset(
            i for i in self.players if j in self._adjacency[i] and l in self._adjacency[i]
        )

    def with_edges(
        self, edges: Iterable[Sequence[int]], sustainers: Optional[Mapping[Edge, int]] = None
    ) -> "Network":
        """A validated copy of this network with a different edge set."""
        return build_network(
            self.num_players,
            self.num_nonplayers,
            edges,
            original_edges=self.original_edges,
            sustainers=sustainers,
        )

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def canonical_sustainers(
    num_players: int,
    num_nonplayers: int,
    original_edges: frozenset[Edge],
    edges: frozenset[Edge],
    given: Optional[Mapping[Edge, int]] = None,
) -> dict[Edge, int]:
    """Assign one sustainer to every added non-player edge.

    Explicit assignments are kept when legal; anything missing gets the
    lowest-indexed player adjacent to both endpoints.  An added non-player
    edge with no player adjacent to both endpoints cannot exist in any
    strategy profile and is rejected.
    """
    adj: dict[int, set[int]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    out: dict[Edge, int] = {}
    given = dict(given or {})
    for e in sorted(edges - original_edges):
        j, l = e
        if j <= num_players or l <= num_players:
            continue
        eligible = [
            i
            for i in range(1, num_players + 1)
            if j in adj.get(i, ()) and l in adj.get(i, ())
        ]
        if not eligible:
            raise ValidationError(f"unsustainable non-player edge {e}: no common player neighbour")
        chosen = given.pop(e, None)
        if chosen is not None:
            if chosen not in eligible:
                raise ValidationError(
                    f"sustainer {chosen} of edge {e} is not a player adjacent to both endpoints"
                )
            out[e] = chosen
        else:
            out[e] = eligible[0]
    if given:
        bad = sorted(given)[0]
        raise ValidationError(f"sustainer given for {bad}, which is not an added non-player edge")
    return out


def build_network(
    num_players: int,
    num_nonplayers: int,
    edges: Iterable[Sequence[int]] = (),
    original_edges: Iterable[Sequence[int]] = (),
    sustainers: Optional[Mapping[Edge, int]] = None,
) -> Network:
    """Construct and fully validate a :class:`Network`."""
    if num_players < 2:
        raise ValidationError(f"need at least 2 players, got {num_players}")
    if num_nonplayers < 0:
        raise ValidationError("negative non-player count")
    n, m = num_players, num_nonplayers
    e0 = edge_set(original_edges)
    es = edge_set(edges) | e0
    for a, b in sorted(es):
        if not (1 <= a <= n + m and 1 <= b <= n + m):
            raise ValidationError(f"edge ({a}, {b}) references unknown nodes (|V| = {n + m})")
    for a, b in sorted(e0):
        if a <= n or b <= n:
            raise ValidationError(f"original edge ({a}, {b}) touches a player")
    sus = canonical_sustainers(n, m, e0, es, sustainers)
    return Network(n, m, e0, es, sus)


def validate_network(raw, game: Optional[GameSpec] = None) -> Network:
    """Validate raw network data (a Network or a mapping of its fields).

    With a game, also cross-checks the alpha count against the player set.
    """
    if isinstance(raw, Network):
        net = build_network(
            raw.num_players, raw.num_nonplayers, raw.edges, raw.original_edges, raw.sustainers
        )
    else:
        net = build_network(
            raw["num_players"],
            raw["num_nonplayers"],
            raw.get("edges", ()),
            raw.get("original_edges", ()),
            raw.get("sustainers"),
        )
    if game is not None and game.num_players != net.num_players:
        raise ValidationError(
            f"game has {game.num_players} alphas but network has {net.num_players} players"
        )
    return net


def degrees(net: Network, node: int) -> tuple[int, int]:
    """(degree, player degree) of a node."""
    return net.degree(node), net.player_degree(node)


@dataclass(frozen=True)
class UtilityVector:
    per_player: tuple[Fraction, ...]

    @property
    def sw(self) -> Fraction:
        return sum(self.per_player, Fraction(0))

    def of(self, i: int) -> Fraction:
        return self.per_player[i - 1]


def utilities_from_edges(
    num_players: int, num_nodes: int, edges: Iterable[Edge], alphas: Sequence[Fraction]
) -> UtilityVector:
    """Utilities of an arbitrary edge set, without feasibility checks.

    Utility depends on the graph alone, so this is also the evaluation core
    for hypothetical states inside deviation and welfare searches.
    """
    deg = [0] * (num_nodes + 1)
    nbrs: list[list[int]] = [[] for _ in range(num_players + 1)]
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        if a <= num_players:
            nbrs[a].append(b)
        if b <= num_players:
            nbrs[b].append(a)
    per = tuple(
        Fraction(sum(deg[x] for x in nbrs[i])) - alphas[i - 1] * deg[i]
        for i in range(1, num_players + 1)
    )
    return UtilityVector(per)


def utility(net: Network, game: GameSpec) -> UtilityVector:
    if game.num_players != net.num_players:
        raise ValidationError("alpha count does not match the player set")
    return utilities_from_edges(net.num_players, net.num_nodes, net.edges, game.alphas)


def social_welfare(net: Network, game: GameSpec) -> Fraction:
    return utility(net, game).sw


def effective_degree(net: Network, j: int, k: int) -> int:
    """Number of k's neighbours that k alone interconnects with j.

    Counts added non-player edges (j, l) whose sustainer is k.  This is
    attribution metadata under the minimal-profile convention; deletion
    marginals in the stability code use :func:`sole_cover_count` instead,
    which is attribution-free.
    """
    if net.is_player(j):
        raise ValidationError(f"effective degree is defined for non-players, got player {j}")
    if not net.is_player(k):
        raise ValidationError(f"effective degree needs a player as second argument, got {k}")
    return sum(1 for e, s in net.sustainers.items() if s == k and j in e)


def sole_cover_count(net: Network, j: int, i: int) -> int:
    """Added non-player edges at j that die if player i drops edge (i, j).

    An added non-player edge needs some player adjacent to both endpoints;
    it outlives i's withdrawal exactly when another player covers it.
    """
    count = 0
    for e in net.added_nonplayer_edges():
        if j not in e:
            continue
        if net.common_player_neighbours(*e) == frozenset({i}):
            count += 1
    return count


@dataclass(frozen=True)
class PlayerStrategy:
    """One player's action set: own connections plus interconnect actions."""

    connect_self: frozenset[int]
    connect_pairs: frozenset[Edge]


@dataclass(frozen=True)
class StrategyProfile:
    strategies: tuple[PlayerStrategy, ...]

    def of(self, i: int) -> PlayerStrategy:
        return self.strategies[i - 1]


def minimal_profile(net: Network) -> StrategyProfile:
    """The inclusion-wise minimal profile producing ``net``.

    Both endpoints of a player-player edge connect; a player connects to
    each of her non-player neighbours; every added non-player edge is the
    interconnect action of exactly its sustainer.
    """
    per: list[PlayerStrategy] = []
    for i in net.players:
        connect = frozenset(net.neighbours(i))
        pairs = frozenset(e for e, s in net.sustainers.items() if s == i)
        per.append(PlayerStrategy(connect, pairs))
    return StrategyProfile(tuple(per))


def resulting_network(
    profile: StrategyProfile,
    num_players: int,
    num_nonplayers: int,
    original_edges: Iterable[Sequence[int]] = (),
) -> Network:
    """Resulting graph of a profile: E0 plus the added-edge rule.

    Player pairs need mutual consent; player-to-non-player links are
    unilateral; a non-player pair appears when some player neighbours both
    and plays the interconnect action (the lowest such player is recorded
    as sustainer).
    """
    n, m = num_players, num_nonplayers
    e0 = edge_set(original_edges)
    if len(profile.strategies) != n:
        raise ValidationError("profile size does not match the player count")
    added: set[Edge] = set()
    for i in range(1, n + 1):
        for j in profile.of(i).connect_self:
            if not (1 <= j <= n + m) or j == i:
                raise ValidationError(f"player {i} connects to invalid node {j}")
            if j > n:
                added.add(edge(i, j))
            elif i in profile.of(j).connect_self:
                added.add(edge(i, j))
    sustainers: dict[Edge, int] = {}
    for i in range(1, n + 1):
        si = profile.of(i)
        for j, l in si.connect_pairs:
            if j <= n or l <= n:
                raise ValidationError(f"interconnect action of player {i} names player nodes")
            if j in si.connect_self and l in si.connect_self:
                e = edge(j, l)
                if e not in e0:
                    added.add(e)
                    if e not in sustainers:
                        sustainers[e] = i
    return build_network(n, m, added | e0, e0, sustainers)


def is_minimal_profile(
    profile: StrategyProfile,
    num_players: int,
    num_nonplayers: int,
    original_edges: Iterable[Sequence[int]] = (),
) -> bool:
    """Round-trip test: profile -> graph -> minimal profile is the identity."""
    net = resulting_network(profile, num_players, num_nonplayers, original_edges)
    return minimal_profile(net) == profile
