import logging
from pathlib import Path

import pandas as pd

from core.errors import EmptyDataError, NumericalError
from core.outputs import write_table
from core.routing import CommandRouter
from .services import (
    comment_score_frame,
    dataset_summary,
    descriptives,
    descriptives_wide,
    load_inputs,
    rejects_frame,
    score_frame,
    total_raised_check,
)

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["campaigns"])

INPUT_PATHS = ("embedding_path", "dataset_path", "lexicon_path", "sentiment_lexicon_path")


@router.command(
    "score",
    help="score every appeal and comment on the moral axes",
    requires=INPUT_PATHS,
)
def cmd_score(config, manifest):
    inputs = load_inputs(config, manifest, features=False)
    out = Path(config.output_dir)
    scores = score_frame(inputs.records, inputs.axes, inputs.table)
    undefined = int(scores["care"].isna().sum())
    if undefined:
        logger.warning("[campaigns] %d appeals have no in-vocabulary tokens", undefined)
    manifest.count("undefined_appeal_scores", undefined)
    manifest.add_output(write_table(scores, out / "scores.tsv"))
    comments = comment_score_frame(inputs.records, inputs.axes, inputs.table)
    manifest.add_output(write_table(comments, out / "comment_scores.tsv"))
    manifest.add_output(write_table(rejects_frame(inputs.ingest.rejects), out / "rejects.tsv"))


@router.command(
    "describe",
    help="per-category descriptive statistics and dataset summary",
    requires=INPUT_PATHS,
)
def cmd_describe(config, manifest):
    inputs = load_inputs(config, manifest)
    out = Path(config.output_dir)
    rows = inputs.features.rows
    if not rows:
        raise EmptyDataError("no campaign has defined moral scores")
    table = descriptives(rows)
    manifest.add_output(write_table(table, out / "descriptives.tsv"))
    manifest.add_output(write_table(descriptives_wide(table), out / "descriptives_wide.tsv", index=True))
    summary = dataset_summary(inputs.ingest, rows)
    manifest.add_output(write_table(summary, out / "dataset_summary.tsv"))

    try:
        check = total_raised_check(inputs.records)
    except (EmptyDataError, NumericalError) as exc:
        logger.warning("[campaigns] total raised check skipped: %s", exc)
        check = {"rho": None, "p_value": None, "n": len(inputs.records)}
    manifest.add_output(write_table(pd.DataFrame([check]), out / "total_raised.tsv"))
    manifest.add_output(write_table(rejects_frame(inputs.ingest.rejects), out / "rejects.tsv"))
