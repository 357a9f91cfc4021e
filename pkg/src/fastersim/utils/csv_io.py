"""CSV emission and read-back for simulation outputs.

All files are written by pandas with ``\\n`` line endings and without an index
column unless the index is the tick axis, so repeated runs of the same
configuration produce byte-identical files.
"""

from pathlib import Path
from typing import List, Literal, Sequence

import pandas as pd

from fastersim.models.core import SimMode
from fastersim.models.results import (
    ComparisonReport,
    DropReason,
    PacketLogEntry,
    RunSummary,
    TimeSeriesRow,
)

TIMESERIES_COLUMNS = ["tick", "node_id", "battery_j", "richness", "alive"]
SUMMARY_COLUMNS = [
    "mode",
    "seed",
    "richness_stddev_final",
    "mean_lifetime",
    "delivery_rate",
    *(f"drops_{reason.name.lower()}" for reason in DropReason),
]
PACKET_COLUMNS = ["tick", "sender", "destination", "route", "outcome", "charge"]
COMPARISON_COLUMNS = [
    "seed",
    "richness_stddev_final_faster",
    "richness_stddev_final_baseline",
    "mean_lifetime_faster",
    "mean_lifetime_baseline",
]

PlotValue = Literal["richness", "battery"]


def _write(frame: pd.DataFrame, path: Path, index: bool = False) -> None:
    frame.to_csv(path, index=index, lineterminator="\n")


def _timeseries_frame(rows: Sequence[TimeSeriesRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            (row.tick, row.node_id, row.battery, row.richness, row.alive)
            for row in rows
        ],
        columns=TIMESERIES_COLUMNS,
    )


def write_timeseries(rows: Sequence[TimeSeriesRow], path: Path) -> None:
    """Write ``tick,node_id,battery_j,richness,alive`` rows."""
    _write(_timeseries_frame(rows), path)


def read_timeseries(path: Path) -> List[TimeSeriesRow]:
    frame = pd.read_csv(path, float_precision="round_trip")
    return [
        TimeSeriesRow(
            tick=int(row.tick),
            node_id=int(row.node_id),
            battery=float(row.battery_j),
            richness=int(row.richness),
            alive=bool(row.alive),
        )
        for row in frame.itertuples(index=False)
    ]


def write_plotdata(
    rows: Sequence[TimeSeriesRow], path: Path, value: PlotValue
) -> None:
    """Write a tick × node matrix of richness or battery for plotting."""
    column = "battery_j" if value == "battery" else "richness"
    frame = _timeseries_frame(rows).pivot(
        index="tick", columns="node_id", values=column
    )
    _write(frame, path, index=True)


def write_summary(summaries: Sequence[RunSummary], path: Path) -> None:
    records = [
        (
            summary.mode.value,
            summary.seed,
            summary.richness_stddev_final,
            summary.mean_lifetime,
            summary.delivery_rate,
            *(summary.drops.get(reason, 0) for reason in DropReason),
        )
        for summary in summaries
    ]
    _write(pd.DataFrame(records, columns=SUMMARY_COLUMNS), path)


def read_summary(path: Path) -> List[RunSummary]:
    frame = pd.read_csv(path, float_precision="round_trip")
    return [
        RunSummary(
            mode=SimMode(record["mode"]),
            seed=int(record["seed"]),
            richness_stddev_final=float(record["richness_stddev_final"]),
            mean_lifetime=float(record["mean_lifetime"]),
            delivery_rate=float(record["delivery_rate"]),
            drops={
                reason: int(record[f"drops_{reason.name.lower()}"])
                for reason in DropReason
            },
        )
        for record in frame.to_dict(orient="records")
    ]


def write_packet_log(entries: Sequence[PacketLogEntry], path: Path) -> None:
    """Write ``tick,sender,destination,route,outcome,charge`` (route as ``0-4-7``)."""
    records = [
        (
            entry.tick,
            entry.sender,
            entry.destination,
            entry.route_label,
            entry.outcome,
            entry.charge,
        )
        for entry in entries
    ]
    _write(pd.DataFrame(records, columns=PACKET_COLUMNS), path)


def write_comparison(report: ComparisonReport, path: Path) -> None:
    records = [
        (
            row.seed,
            row.richness_stddev_final_faster,
            row.richness_stddev_final_baseline,
            row.mean_lifetime_faster,
            row.mean_lifetime_baseline,
        )
        for row in report.rows
    ]
    _write(pd.DataFrame(records, columns=COMPARISON_COLUMNS), path)
