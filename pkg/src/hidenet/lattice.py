"""Lattice operations over the pairwise Nash stable graphs.

The stable graphs of an instance form a non-empty lattice under edge
inclusion; the least element grows out of the original graph, the
greatest shrinks out of the complete graph, and join/meet run the same
fixpoints from the union/intersection of two stable states.
``enumerate_lattice`` materialises the whole k-strong lattice via the
oracle and re-verifies the lattice axioms on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import PreconditionError
from .fixpoint import max_included_pans, min_including_pans
from .model import Edge, GameSpec, Network, build_network, edge_set
from .oracle import enumerate_feasible_graphs
from .stability import is_k_strong, is_pane


def _require_pans(net: Network, game: GameSpec, name: str) -> None:
    if not is_pane(net, game):
        raise PreconditionError(f"{name} is not pairwise Nash stable")


def least_pans(
    game: GameSpec, num_nonplayers: int, original_edges: Iterable = ()
) -> Network:
    """Inclusion-minimum stable graph: grow from the original graph."""
    start = build_network(game.num_players, num_nonplayers, original_edges, original_edges)
    return min_including_pans(start, game)


def greatest_pans(
    game: GameSpec,
    num_nonplayers: int,
    original_edges: Iterable = (),
    verify_strong: bool = False,
) -> Network:
    """Inclusion-maximum stable graph: shrink from the complete graph.

    With ``verify_strong`` the result is additionally asserted to survive
    coalition deviations of every size (it always should).
    """
    n, m = game.num_players, num_nonplayers
    complete = [(a, b) for a, b in itertools.combinations(range(1, n + m + 1), 2)]
    start = build_network(n, m, complete, original_edges)
    out = max_included_pans(start, game)
    if verify_strong:
        verdict = is_k_strong(out, game, n)
        if not verdict.stable:
            raise AssertionError(
                f"greatest stable graph admits a coalition deviation: {verdict.witness}"
            )
    return out


def join_pans(game: GameSpec, net_s: Network, net_t: Network) -> Network:
    """Smallest stable graph containing both inputs (edge union, grown)."""
    _require_pans(net_s, game, "left join operand")
    _require_pans(net_t, game, "right join operand")
    merged = net_s.with_edges(net_s.edges | net_t.edges)
    return min_including_pans(merged, game)


def meet_pans(game: GameSpec, net_s: Network, net_t: Network) -> Network:
    """Largest stable graph inside both inputs (edge intersection, shrunk)."""
    _require_pans(net_s, game, "left meet operand")
    _require_pans(net_t, game, "right meet operand")
    merged = net_s.with_edges(net_s.edges & net_t.edges)
    return max_included_pans(merged, game)


@dataclass
class LatticeSummary:
    strength: int
    least: Network
    greatest: Network
    elements: list[Network]
    hasse_edges: list[tuple[int, int]] = field(default_factory=list)

    def element_edge_sets(self) -> list[frozenset[Edge]]:
        return [n.edges for n in self.elements]


def _hasse(edge_sets: list[frozenset[Edge]]) -> list[tuple[int, int]]:
    covers = []
    for a, b in itertools.permutations(range(len(edge_sets)), 2):
        if edge_sets[a] < edge_sets[b] and not any(
            edge_sets[a] < edge_sets[c] < edge_sets[b] for c in range(len(edge_sets))
        ):
            covers.append((a, b))
    return sorted(covers)


def enumerate_lattice(
    game: GameSpec,
    num_nonplayers: int,
    original_edges: Iterable = (),
    k: int = 1,
    cross_check: bool = True,
    budget: Optional[int] = None,
) -> LatticeSummary:
    """All k-strong stable graphs of an instance, verified as a lattice.

    Ground truth comes from the oracle; each element is re-checked with
    the search-based verifier, the join/meet fixpoints are compared with
    the enumerated LUB/GLB, and the (k+1)-strong set is confirmed to nest
    inside the k-strong one.  Any disagreement raises, since it means two
    independent implementations of the model diverge.
    """
    fgs = enumerate_feasible_graphs(game, num_nonplayers, original_edges, budget)
    elements = fgs.pans_networks(k)
    if not elements:
        raise AssertionError("stable set is empty; a stable graph always exists")
    if cross_check:
        for net in elements:
            if not is_k_strong(net, game, k).stable:
                raise AssertionError(
                    f"oracle marks {sorted(net.edges)} {k}-strong stable, "
                    "the deviation search disagrees"
                )
    sets = [n.edges for n in elements]
    least = min(sets, key=len)
    greatest = max(sets, key=len)
    if any(not least <= s for s in sets) or any(not s <= greatest for s in sets):
        raise AssertionError("enumerated stable set has no least/greatest element")
    # join/meet closure against enumerated bounds
    for ea, eb in itertools.combinations(sets, 2):
        na = build_network(game.num_players, num_nonplayers, ea, edge_set(original_edges))
        nb = build_network(game.num_players, num_nonplayers, eb, edge_set(original_edges))
        ups = [s for s in sets if ea | eb <= s]
        lub = min(ups, key=len)
        downs = [s for s in sets if s <= ea & eb]
        glb = max(downs, key=len)
        if join_pans(game, na, nb).edges != lub or any(not lub <= s for s in ups):
            raise AssertionError(f"join is not the LUB for {sorted(ea)} | {sorted(eb)}")
        if meet_pans(game, na, nb).edges != glb or any(not s <= glb for s in downs):
            raise AssertionError(f"meet is not the GLB for {sorted(ea)} & {sorted(eb)}")
    if k < game.num_players:
        stronger = {frozenset(n.edges) for n in fgs.pans_networks(k + 1)}
        if not stronger <= {frozenset(s) for s in sets}:
            raise AssertionError(f"{k + 1}-strong stable graphs do not nest in {k}-strong")
    order = sorted(range(len(elements)), key=lambda t: (len(sets[t]), sorted(sets[t])))
    elements = [elements[t] for t in order]
    sets = [sets[t] for t in order]
    least_net = next(n for n in elements if n.edges == least)
    greatest_net = next(n for n in elements if n.edges == greatest)
    return LatticeSummary(k, least_net, greatest_net, elements, _hasse(sets))
