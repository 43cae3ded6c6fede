"""Exact power accounting for both fabric architectures.

All device powers are integer milliwatts, so every subtotal and total is
exact (0.4 W is exactly 400 mW).  Reduction percentages are kept as
rationals and only rendered to one decimal at the edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import MissingCatalogEntry, MissingOlt, PonFabricError, SpecMismatch, ZeroBaseline
from .topology import (
    Architecture,
    DeviceKind,
    LinkCapacities,
    NetworkGraph,
    OwcPonSpec,
    TraditionalSpec,
    build_owc_pon,
    build_traditional,
    device_census,
)


@dataclass(frozen=True)
class PowerCatalog:
    """Per-device-kind wattage table, stored as non-negative milliwatts."""

    entries: Mapping[DeviceKind, int]

    def __post_init__(self):
        frozen = dict(self.entries)
        for kind, value in frozen.items():
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{kind.value}: power must be a non-negative int (mW)")
        object.__setattr__(self, "entries", frozen)

    def get(self, kind: DeviceKind) -> int | None:
        return self.entries.get(kind)

    def __getitem__(self, kind: DeviceKind) -> int:
        return self.entries[kind]

    def __contains__(self, kind: DeviceKind) -> bool:
        return kind in self.entries

    def with_overrides(self, overrides: Mapping[DeviceKind, int]) -> "PowerCatalog":
        merged = dict(self.entries)
        merged.update(overrides)
        return PowerCatalog(merged)


# Servers and the external gateway are structural boundary devices; the
# networking power model never prices them, in either architecture.
STRUCTURAL_KINDS = frozenset({DeviceKind.SERVER, DeviceKind.EXTERNAL_GATEWAY})

TRADITIONAL_CATALOG = PowerCatalog(
    {
        DeviceKind.SPINE_SWITCH: 660_000,
        DeviceKind.LEAF_SWITCH: 508_000,
        DeviceKind.SERVER_TRANSCEIVER: 3_000,
    }
)

OWC_PON_CATALOG = PowerCatalog(
    {
        DeviceKind.RACK_TRANSCEIVER: 400,
        DeviceKind.AP_TRANSCEIVER: 400,
        DeviceKind.LEAF_SWITCH: 508_000,
        DeviceKind.OLT: 480_000,
        DeviceKind.SERVER_TRANSCEIVER: 3_000,
        DeviceKind.NIC: 45_000,
        DeviceKind.OPTICAL_SWITCH: 75_000,
    }
)


class NicCountMode(Enum):
    PER_AP = "per_ap"
    PER_SERVER = "per_server"


@dataclass(frozen=True)
class PowerOptions:
    """Inclusion flags for the transceiver terms and the NIC counting mode.

    Both transceiver terms default to excluded and NICs default to one per
    AP; that combination is the benchmark default.  ``per_server`` NIC
    counting is a what-if that charges one NIC per server instead.
    """

    include_owc_transceivers: bool = False
    include_server_transceivers: bool = False
    nic_count_mode: NicCountMode = NicCountMode.PER_AP


#: The only named option profiles.  "reproduction" is the benchmark
#: default; "as-written" additionally charges the server transceivers.
PROFILES: dict[str, PowerOptions] = {
    "reproduction": PowerOptions(),
    "as-written": PowerOptions(include_server_transceivers=True),
}


@dataclass(frozen=True)
class PowerRow:
    kind: DeviceKind
    quantity: int
    unit_mw: int
    subtotal_mw: int
    included: bool


@dataclass(frozen=True)
class PowerReport:
    """Per-kind subtotals plus their exact total, echoing the inputs."""

    rows: tuple[PowerRow, ...]
    total_mw: int
    options: PowerOptions
    catalog: PowerCatalog

    def __post_init__(self):
        if self.total_mw != sum(row.subtotal_mw for row in self.rows):
            raise ValueError("report total does not match its subtotals")

    @property
    def total_watts(self) -> Fraction:
        return Fraction(self.total_mw, 1000)

    def row(self, kind: DeviceKind) -> PowerRow | None:
        for row in self.rows:
            if row.kind is kind:
                return row
        return None


def _row(
    kind: DeviceKind, quantity: int, catalog: PowerCatalog, included: bool
) -> PowerRow:
    unit = catalog.get(kind)
    if unit is None:
        if included and quantity > 0:
            raise MissingCatalogEntry(kind)
        unit = 0
    subtotal = quantity * unit if included else 0
    return PowerRow(kind, quantity, unit, subtotal, included)


def _report(rows: Sequence[PowerRow], options, catalog) -> PowerReport:
    return PowerReport(
        tuple(rows), sum(row.subtotal_mw for row in rows), options, catalog
    )


def traditional_power(
    census: Mapping[DeviceKind, int],
    catalog: PowerCatalog = TRADITIONAL_CATALOG,
    options: PowerOptions = PowerOptions(),
) -> PowerReport:
    """Closed-form power of the spine-and-leaf fabric.

    Total = spines + leaves, plus the server transceivers when included.
    """
    rows = [
        _row(DeviceKind.SPINE_SWITCH, census.get(DeviceKind.SPINE_SWITCH, 0), catalog, True),
        _row(DeviceKind.LEAF_SWITCH, census.get(DeviceKind.LEAF_SWITCH, 0), catalog, True),
        _row(
            DeviceKind.SERVER_TRANSCEIVER,
            census.get(DeviceKind.SERVER_TRANSCEIVER, 0),
            catalog,
            options.include_server_transceivers,
        ),
    ]
    return _report(rows, options, catalog)


def owc_pon_power(
    census: Mapping[DeviceKind, int],
    catalog: PowerCatalog = OWC_PON_CATALOG,
    options: PowerOptions = PowerOptions(),
) -> PowerReport:
    """Closed-form power of the optical-wireless fabric with PON backhaul.

    Total = one OLT (a constant, not multiplied by the census) + optical
    switches + NICs + leaves, plus the free-space and server transceiver
    terms when included.  The NIC quantity follows ``options.nic_count_mode``:
    the NIC census (one per AP) or the server census.
    """
    if census.get(DeviceKind.OLT, 0) == 0:
        raise MissingOlt("census has no OLT; the backhaul constant is undefined")
    if options.nic_count_mode is NicCountMode.PER_AP:
        nic_quantity = census.get(DeviceKind.NIC, 0)
    else:
        nic_quantity = census.get(DeviceKind.SERVER, 0)

    rows = [
        _row(DeviceKind.LEAF_SWITCH, census.get(DeviceKind.LEAF_SWITCH, 0), catalog, True),
        _row(
            DeviceKind.SERVER_TRANSCEIVER,
            census.get(DeviceKind.SERVER_TRANSCEIVER, 0),
            catalog,
            options.include_server_transceivers,
        ),
        _row(
            DeviceKind.RACK_TRANSCEIVER,
            census.get(DeviceKind.RACK_TRANSCEIVER, 0),
            catalog,
            options.include_owc_transceivers,
        ),
        _row(
            DeviceKind.AP_TRANSCEIVER,
            census.get(DeviceKind.AP_TRANSCEIVER, 0),
            catalog,
            options.include_owc_transceivers,
        ),
        _row(DeviceKind.NIC, nic_quantity, catalog, True),
        _row(
            DeviceKind.OPTICAL_SWITCH,
            census.get(DeviceKind.OPTICAL_SWITCH, 0),
            catalog,
            True,
        ),
        _row(DeviceKind.OLT, 1, catalog, True),
    ]
    return _report(rows, options, catalog)


def closed_form_power(
    graph: NetworkGraph,
    catalog: PowerCatalog,
    options: PowerOptions = PowerOptions(),
) -> PowerReport:
    """Dispatch to the architecture's closed-form evaluator."""
    census = device_census(graph)
    if graph.architecture is Architecture.TRADITIONAL:
        return traditional_power(census, catalog, options)
    return owc_pon_power(census, catalog, options)


def per_node_power(
    graph: NetworkGraph,
    catalog: PowerCatalog,
    options: PowerOptions = PowerOptions(),
) -> PowerReport:
    """Brute-force power: walk every node and add its catalog entry.

    Honors the same inclusion flags as the closed forms and, like them,
    never prices the structural kinds.  Its total equals the closed forms
    exactly (with per-AP NIC counting; the per-server mode is a
    closed-form what-if with no node-level counterpart).  Every priced
    kind present in the graph needs a catalog entry.
    """
    excluded = set(STRUCTURAL_KINDS)
    if not options.include_owc_transceivers:
        excluded.update({DeviceKind.RACK_TRANSCEIVER, DeviceKind.AP_TRANSCEIVER})
    if not options.include_server_transceivers:
        excluded.add(DeviceKind.SERVER_TRANSCEIVER)

    quantities: dict[DeviceKind, int] = {}
    for node in graph.nodes:
        quantities[node.kind] = quantities.get(node.kind, 0) + 1
        if node.kind not in excluded and node.kind not in catalog:
            raise MissingCatalogEntry(node.kind)

    rows = [
        _row(kind, quantities[kind], catalog, kind not in excluded)
        for kind in DeviceKind
        if kind in quantities
    ]
    return _report(rows, options, catalog)


def _half_up_permille(fraction: Fraction) -> int:
    """Round ``fraction`` to tenths of a percent, halves away from zero."""
    scaled = fraction * 1000
    n, d = scaled.numerator, scaled.denominator
    magnitude = (2 * abs(n) + d) // (2 * d)
    return magnitude if n >= 0 else -magnitude


def format_percent(fraction: Fraction) -> str:
    permille = _half_up_permille(fraction)
    sign = "-" if permille < 0 else ""
    whole, tenth = divmod(abs(permille), 10)
    return f"{sign}{whole}.{tenth}%"


@dataclass(frozen=True)
class Reduction:
    """Relative power saving of a proposed fabric against a baseline."""

    fraction: Fraction

    @property
    def percent_text(self) -> str:
        return format_percent(self.fraction)


def power_reduction(baseline: PowerReport, proposed: PowerReport) -> Reduction:
    """(baseline - proposed) / baseline as an exact rational."""
    if baseline.total_mw == 0:
        raise ZeroBaseline("baseline consumes no power")
    return Reduction(Fraction(baseline.total_mw - proposed.total_mw, baseline.total_mw))


@dataclass(frozen=True)
class SweepPoint:
    racks: int
    servers_per_rack: int
    num_groups: int
    num_spine: int


@dataclass(frozen=True)
class SweepResult:
    point: SweepPoint
    traditional: PowerReport | None
    proposed: PowerReport | None
    reduction: Reduction | None
    error: str | None


def scaling_sweep(
    rack_counts: Sequence[int],
    *,
    servers_per_rack: int = 8,
    num_groups: int = 2,
    spine_counts: Sequence[int] | None = None,
    traditional_catalog: PowerCatalog = TRADITIONAL_CATALOG,
    owc_pon_catalog: PowerCatalog = OWC_PON_CATALOG,
    options: PowerOptions = PowerOptions(),
    capacities: LinkCapacities = LinkCapacities(),
) -> tuple[SweepResult, ...]:
    """Evaluate both architectures across a family of rack counts.

    Spine counts default to the rack count (one spine per leaf, the
    benchmark pairing).  A point whose parameters are inadmissible is
    marked failed without aborting the rest of the sweep.
    """
    if spine_counts is not None and len(spine_counts) != len(rack_counts):
        raise ValueError("spine_counts must match rack_counts in length")

    results = []
    for index, racks in enumerate(rack_counts):
        spines = spine_counts[index] if spine_counts is not None else racks
        point = SweepPoint(racks, servers_per_rack, num_groups, spines)
        try:
            if num_groups > 0:
                aps = racks // num_groups
            elif racks == 0:
                aps = 0
            else:
                raise SpecMismatch(f"{racks} racks cannot be split into zero groups")
            trad_graph = build_traditional(
                TraditionalSpec(spines, racks, servers_per_rack), capacities
            )
            owc_graph = build_owc_pon(
                OwcPonSpec(racks, servers_per_rack, num_groups, aps), capacities
            )
            trad = traditional_power(
                device_census(trad_graph), traditional_catalog, options
            )
            owc = owc_pon_power(device_census(owc_graph), owc_pon_catalog, options)
            reduction = power_reduction(trad, owc)
        except (PonFabricError, ValueError) as exc:
            results.append(SweepResult(point, None, None, None, str(exc)))
            continue
        results.append(SweepResult(point, trad, owc, reduction, None))
    return tuple(results)
