from pathlib import Path

from core.errors import EmptyDataError
from core.outputs import atomic_write_bytes
from core.routing import CommandRouter
from modules.campaigns.commands import INPUT_PATHS
from modules.campaigns.services import dataset_summary, descriptives, descriptives_wide, load_inputs
from modules.models.services import comparison_table, fit_model
from .services import build_report_pdf

router = CommandRouter(tags=["reports"])


@router.command(
    "report",
    help="render descriptives, dataset summary and model fits to a PDF",
    requires=INPUT_PATHS,
    flags=("models", "no_interactions"),
)
def cmd_report(config, manifest):
    inputs = load_inputs(config, manifest)
    rows = inputs.features.rows
    if not rows:
        raise EmptyDataError("no campaign has defined moral scores")
    results = {
        model_id: fit_model(model_id, rows, interactions=config.interactions)[1]
        for model_id in config.model_ids
    }
    pdf = build_report_pdf(
        descriptives_wide(descriptives(rows)),
        comparison_table(results),
        dataset_summary(inputs.ingest, rows),
    )
    manifest.add_output(atomic_write_bytes(pdf, Path(config.output_dir) / "report.pdf"))
