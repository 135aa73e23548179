import logging
from pathlib import Path

import pandas as pd

from core.errors import EmptyDataError
from core.outputs import write_table
from core.routing import CommandRouter
from modules.campaigns.commands import INPUT_PATHS
from modules.campaigns.services import load_inputs
from .services import (
    comment_alignment,
    comment_length_by_group,
    donation_position_curve,
    empty_position_curve,
    exemplars,
    group_difference,
    group_table,
)

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["figures"])


@router.command(
    "figdata",
    help="plot-ready data for the comment and donation-position figures",
    requires=INPUT_PATHS,
    flags=("frame", "category", "min_donations", "max_position", "exemplars"),
)
def cmd_figdata(config, manifest):
    inputs = load_inputs(config, manifest)
    out = Path(config.output_dir)

    # every table is built before the first write
    alignment_tables, length_tables, differences = [], [], []
    for frame in config.frames():
        alignment = comment_alignment(inputs.records, inputs.axes, inputs.table, frame, config.category_filter)
        lengths = comment_length_by_group(inputs.records, inputs.axes, inputs.table, frame, config.category_filter)
        manifest.count(f"split_campaigns_{frame}", alignment.split_size)
        alignment_tables.append(group_table(alignment))
        length_tables.append(group_table(lengths))
        differences.append({"measure": "comment_score", **group_difference(alignment)})
        differences.append({"measure": "comment_length", **group_difference(lengths)})

    max_position = config.max_position or config.min_donations
    qualifying = sum(len(record.donations) >= config.min_donations for record in inputs.records)
    manifest.count("curve_campaigns", qualifying)
    try:
        curve = donation_position_curve(inputs.records, config.min_donations, max_position)
    except EmptyDataError as exc:
        logger.warning("[figures] donation position curve is empty: %s", exc)
        curve = empty_position_curve(max_position)

    picks = None
    if inputs.features.rows:
        picks = exemplars(inputs.records, inputs.features.rows, config.exemplar_count)

    manifest.add_output(write_table(pd.concat(alignment_tables, ignore_index=True), out / "comment_alignment.tsv"))
    manifest.add_output(write_table(pd.concat(length_tables, ignore_index=True), out / "comment_length.tsv"))
    manifest.add_output(write_table(pd.DataFrame(differences), out / "group_differences.tsv"))
    manifest.add_output(write_table(curve, out / "donation_position.tsv"))
    if picks is not None:
        manifest.add_output(write_table(picks, out / "exemplars.tsv"))
