"""Scenario-driven evaluation: build both fabrics, price them, compare.

The benchmark report is a deterministic record: census tables, per-kind
power subtotals, the exact reduction fraction, and its one-decimal
rendering.  Serializing the same scenario twice yields identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ScenarioError, ValidationFailed
from .power import (
    OWC_PON_CATALOG,
    TRADITIONAL_CATALOG,
    NicCountMode,
    PowerCatalog,
    PowerReport,
    Reduction,
    owc_pon_power,
    power_reduction,
    traditional_power,
)
from .render import Document, Table, format_rational
from .scenario import Scenario, serialize_scenario
from .topology import (
    Architecture,
    DeviceKind,
    NetworkGraph,
    build_owc_pon,
    build_traditional,
    device_census,
    validate,
)
from .version import __version__


def resolved_catalogs(scenario: Scenario) -> tuple[PowerCatalog, PowerCatalog]:
    """Built-in catalogs with the scenario's overrides applied to both."""
    overrides = {
        DeviceKind(key): milliwatts for key, milliwatts in scenario.catalog_overrides
    }
    return (
        TRADITIONAL_CATALOG.with_overrides(overrides),
        OWC_PON_CATALOG.with_overrides(overrides),
    )


def build_graphs(scenario: Scenario) -> dict[Architecture, NetworkGraph]:
    """Build every architecture the scenario selects."""
    graphs: dict[Architecture, NetworkGraph] = {}
    if scenario.selects(Architecture.TRADITIONAL):
        graphs[Architecture.TRADITIONAL] = build_traditional(
            scenario.traditional, scenario.capacities
        )
    if scenario.selects(Architecture.OWC_PON):
        graphs[Architecture.OWC_PON] = build_owc_pon(
            scenario.owcpon, scenario.capacities
        )
    return graphs


def validated_graphs(scenario: Scenario) -> dict[Architecture, NetworkGraph]:
    graphs = build_graphs(scenario)
    for architecture, graph in graphs.items():
        violations = validate(graph)
        if violations:
            raise ValidationFailed(architecture, violations)
    return graphs


@dataclass(frozen=True)
class BenchmarkReport:
    version: str
    scenario_text: str
    traditional_census: dict[DeviceKind, int]
    proposed_census: dict[DeviceKind, int]
    traditional: PowerReport
    proposed: PowerReport
    reduction: Reduction
    notes: tuple[str, ...]


def run_benchmark(scenario: Scenario) -> BenchmarkReport:
    """Evaluate both architectures under one scenario and compare them."""
    if len(scenario.architectures) != 2:
        raise ScenarioError("the benchmark needs both architectures selected")
    traditional_catalog, owc_catalog = resolved_catalogs(scenario)
    graphs = validated_graphs(scenario)

    trad_census = device_census(graphs[Architecture.TRADITIONAL])
    owc_census = device_census(graphs[Architecture.OWC_PON])
    trad_report = traditional_power(trad_census, traditional_catalog, scenario.options)
    owc_report = owc_pon_power(owc_census, owc_catalog, scenario.options)
    reduction = power_reduction(trad_report, owc_report)

    notes = []
    if scenario.options.nic_count_mode is NicCountMode.PER_SERVER:
        notes.append(
            "non-reproducing: per-server NIC counting inflates the NIC term; "
            "the headline reduction assumes one NIC per AP"
        )

    return BenchmarkReport(
        version=__version__,
        scenario_text=serialize_scenario(scenario),
        traditional_census=trad_census,
        proposed_census=owc_census,
        traditional=trad_report,
        proposed=owc_report,
        reduction=reduction,
        notes=tuple(notes),
    )


def census_table(name: str, census: dict[DeviceKind, int]) -> Table:
    return Table(
        name,
        ("device", "count"),
        tuple((kind.value, census[kind]) for kind in DeviceKind),
    )


def power_table(name: str, report: PowerReport) -> Table:
    rows = [
        (
            row.kind.value,
            row.quantity,
            row.unit_mw,
            row.subtotal_mw,
            "yes" if row.included else "no",
        )
        for row in report.rows
    ]
    rows.append(("TOTAL", "", "", report.total_mw, ""))
    return Table(name, ("device", "quantity", "unit_mw", "subtotal_mw", "included"), tuple(rows))


def benchmark_document(report: BenchmarkReport) -> Document:
    meta = [
        ("version", report.version),
        ("traditional_total_mw", report.traditional.total_mw),
        ("proposed_total_mw", report.proposed.total_mw),
        ("reduction_percent", report.reduction.percent_text),
        ("reduction_fraction", format_rational(report.reduction.fraction)),
    ]
    tables = [
        census_table("census_traditional", report.traditional_census),
        census_table("census_owcpon", report.proposed_census),
        power_table("power_traditional", report.traditional),
        power_table("power_owcpon", report.proposed),
    ]
    if report.notes:
        tables.append(Table("notes", ("note",), tuple((note,) for note in report.notes)))
    tables.append(
        Table(
            "scenario",
            ("line",),
            tuple((line,) for line in report.scenario_text.splitlines()),
        )
    )
    return Document("power consumption benchmark", tuple(meta), tuple(tables))
