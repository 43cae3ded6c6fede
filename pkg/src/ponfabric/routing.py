"""Rule-chain route resolution between servers and to the external gateway.

Routes are deterministic chains prescribed by the architecture, not
shortest-path searches: each traffic class has exactly one sequence of
elements that may carry it, and resolution verifies every hop exists in
the graph.  Traffic between racks of the same group crosses the group's
optical switch; traffic between groups uses the direct NIC-to-NIC link
when one exists (and the policy prefers it) or relays through the OLT via
each group's gateway NIC.  When an endpoint AP is itself the gateway, its
NIC enters the OLT directly with no optical-switch detour.

Hop counts per class on a well-formed graph:

======================  =========================================
same server             0
same rack               2
same group, other rack  10
other group, direct     9
other group, relayed    14 (no gateway endpoint), 12 (one), 10 (both)
external                8 (6 from the gateway AP's rack)
======================  =========================================
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .errors import NoRoute, PolicyExcluded, UnknownServer
from .topology import Architecture, DeviceKind, NetworkGraph, Node


class PathClass(Enum):
    SAME_SERVER = "same_server"
    INTRA_RACK = "intra_rack"
    INTER_RACK_INTRA_GROUP = "inter_rack_intra_group"
    INTER_GROUP_DIRECT = "inter_group_direct"
    INTER_GROUP_RELAYED = "inter_group_relayed"
    EXTERNAL = "external"


@dataclass(frozen=True)
class RoutingPolicy:
    """Path selection knobs for inter-group traffic.

    With ``prefer_direct_inter_group`` a pair whose APs share a direct
    fiber link uses it; otherwise (or when no such link exists) the pair
    relays through the OLT if ``allow_relay_fallback`` permits.
    """

    prefer_direct_inter_group: bool = True
    allow_relay_fallback: bool = True


@dataclass(frozen=True)
class Route:
    """An ordered simple path: node ids plus the link ids joining them."""

    nodes: tuple[str, ...]
    links: tuple[str, ...]
    path_class: PathClass

    @property
    def hop_count(self) -> int:
        return len(self.links)

    def reversed(self) -> "Route":
        return Route(tuple(reversed(self.nodes)), tuple(reversed(self.links)), self.path_class)


def _server(graph: NetworkGraph, node_id: str) -> Node:
    if not graph.has_node(node_id):
        raise UnknownServer(node_id)
    node = graph.node(node_id)
    if node.kind is not DeviceKind.SERVER:
        raise UnknownServer(node_id)
    return node


def _sole(nodes: tuple[Node, ...], what: str) -> Node:
    if not nodes:
        raise NoRoute(f"graph has no {what}")
    if len(nodes) > 1:
        # Multiple candidates (e.g. parallel transceiver planes): take the
        # lowest id for determinism.
        return min(nodes, key=lambda n: n.id)
    return nodes[0]


def _leaf_of(graph: NetworkGraph, server: Node) -> Node:
    for other, _ in graph.neighbors(server.id):
        if other.kind is DeviceKind.LEAF_SWITCH:
            return other
    raise NoRoute(f"server {server.id} is not wired to a leaf switch")


def _uplink_of(graph: NetworkGraph, leaf: Node) -> tuple[Node, Node, Node]:
    """The leaf's backhaul chain: rooftop transceiver, AP transceiver, NIC."""
    rtxs = tuple(
        other
        for other, _ in graph.neighbors(leaf.id)
        if other.kind is DeviceKind.RACK_TRANSCEIVER
    )
    rtx = _sole(rtxs, f"rooftop transceiver on {leaf.id}")
    atxs = tuple(
        other
        for other, _ in graph.neighbors(rtx.id)
        if other.kind is DeviceKind.AP_TRANSCEIVER
    )
    atx = _sole(atxs, f"AP transceiver beamed from {rtx.id}")
    nics = tuple(
        other for other, _ in graph.neighbors(atx.id) if other.kind is DeviceKind.NIC
    )
    nic = _sole(nics, f"NIC behind {atx.id}")
    return rtx, atx, nic


def _group_switch(graph: NetworkGraph, group: int) -> Node:
    return _sole(
        graph.find_nodes(DeviceKind.OPTICAL_SWITCH, group=group),
        f"optical switch in group {group}",
    )


def _gateway_nic(graph: NetworkGraph, group: int) -> Node:
    return _sole(
        graph.find_nodes(DeviceKind.NIC, group=group, gateway=True),
        f"gateway NIC in group {group}",
    )


def _olt(graph: NetworkGraph) -> Node:
    return _sole(graph.nodes_of_kind(DeviceKind.OLT), "OLT")


def _chain(graph: NetworkGraph, node_ids: list[str], path_class: PathClass) -> Route:
    links = []
    for a, b in zip(node_ids, node_ids[1:]):
        link = graph.link_between(a, b)
        if link is None:
            raise NoRoute(f"missing link {a} -- {b}")
        links.append(link.id)
    return Route(tuple(node_ids), tuple(links), path_class)


def _descent(graph: NetworkGraph, server: Node) -> list[str]:
    """NIC-to-server half of a backhaul chain."""
    leaf = _leaf_of(graph, server)
    rtx, atx, nic = _uplink_of(graph, leaf)
    return [nic.id, atx.id, rtx.id, leaf.id, server.id]


def resolve_route(
    graph: NetworkGraph,
    src: str,
    dst: str,
    policy: RoutingPolicy = RoutingPolicy(),
) -> Route:
    """The unique rule-chain route between two servers.

    Raises ``NoRoute`` when a required element is missing (which surfaces
    the same breaches ``validate`` reports), ``PolicyExcluded`` when the
    policy forbids every mechanism available for an inter-group pair, and
    ``UnknownServer`` for endpoints that are not server nodes.
    """
    a = _server(graph, src)
    b = _server(graph, dst)
    if src == dst:
        return Route((src,), (), PathClass.SAME_SERVER)

    leaf_a = _leaf_of(graph, a)
    if a.rack == b.rack:
        return _chain(graph, [src, leaf_a.id, dst], PathClass.INTRA_RACK)

    if graph.architecture is Architecture.TRADITIONAL:
        raise NoRoute(
            "inter-rack paths are only modeled for the optical-wireless fabric"
        )

    rtx_a, atx_a, nic_a = _uplink_of(graph, leaf_a)
    ascent = [src, leaf_a.id, rtx_a.id, atx_a.id, nic_a.id]
    descent = _descent(graph, b)
    nic_b = graph.node(descent[0])
    group_a, group_b = atx_a.group, nic_b.group

    if group_a == group_b:
        switch = _group_switch(graph, group_a)
        return _chain(
            graph, ascent + [switch.id] + descent, PathClass.INTER_RACK_INTRA_GROUP
        )

    if not policy.prefer_direct_inter_group and not policy.allow_relay_fallback:
        raise PolicyExcluded("both inter-group mechanisms are disabled")

    direct = graph.link_between(nic_a.id, nic_b.id)
    if direct is not None and policy.prefer_direct_inter_group:
        return _chain(graph, ascent + descent, PathClass.INTER_GROUP_DIRECT)
    if not policy.allow_relay_fallback:
        raise PolicyExcluded(
            f"no direct link between the APs of {src} and {dst}, "
            "and relay fallback is disabled"
        )

    olt = _olt(graph)
    middle: list[str] = []
    if not nic_a.is_gateway:
        middle += [_group_switch(graph, group_a).id, _gateway_nic(graph, group_a).id]
    middle.append(olt.id)
    if not nic_b.is_gateway:
        middle += [_gateway_nic(graph, group_b).id, _group_switch(graph, group_b).id]
    return _chain(graph, ascent + middle + descent, PathClass.INTER_GROUP_RELAYED)


def route_to_external(graph: NetworkGraph, src: str) -> Route:
    """Route from a server to the external gateway, always via the OLT."""
    a = _server(graph, src)
    if graph.architecture is Architecture.TRADITIONAL:
        raise NoRoute("the traditional fabric has no modeled external gateway")
    external = _sole(graph.nodes_of_kind(DeviceKind.EXTERNAL_GATEWAY), "external gateway")
    olt = _olt(graph)

    leaf = _leaf_of(graph, a)
    rtx, atx, nic = _uplink_of(graph, leaf)
    chain = [src, leaf.id, rtx.id, atx.id, nic.id]
    if not nic.is_gateway:
        chain += [_group_switch(graph, atx.group).id, _gateway_nic(graph, atx.group).id]
    chain += [olt.id, external.id]
    return _chain(graph, chain, PathClass.EXTERNAL)


def all_pairs_summary(
    graph: NetworkGraph, policy: RoutingPolicy = RoutingPolicy()
) -> dict[tuple[PathClass, int], int]:
    """Histogram of (class, hop count) over all ordered server pairs.

    Includes the diagonal, so counts sum to the squared server count.
    """
    servers = sorted(graph.nodes_of_kind(DeviceKind.SERVER), key=lambda n: n.id)
    histogram: Counter[tuple[PathClass, int]] = Counter()
    for source in servers:
        for target in servers:
            route = resolve_route(graph, source.id, target.id, policy)
            histogram[(route.path_class, route.hop_count)] += 1
    return dict(histogram)
