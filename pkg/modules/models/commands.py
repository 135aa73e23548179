import logging
from pathlib import Path

from core.errors import EmptyDataError
from core.outputs import write_table
from core.routing import CommandRouter
from modules.campaigns.commands import INPUT_PATHS
from modules.campaigns.services import load_inputs
from .services import comparison_table, fit_model, fit_table

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["models"])


@router.command(
    "fit",
    help="fit the donation, amount and comment regression models",
    requires=INPUT_PATHS,
    flags=("models", "no_interactions"),
)
def cmd_fit(config, manifest):
    inputs = load_inputs(config, manifest)
    rows = inputs.features.rows
    if not rows:
        raise EmptyDataError("no campaign has defined moral scores")
    out = Path(config.output_dir)
    results = {}
    for model_id in config.model_ids:
        spec, result = fit_model(model_id, rows, interactions=config.interactions)
        manifest.count(f"model{model_id}_n_obs", result.n_obs)
        manifest.count(f"model{model_id}_dropped", spec.n_dropped_rows)
        manifest.add_output(write_table(fit_table(result), out / f"fit_model{model_id}.tsv"))
        results[model_id] = result
    manifest.add_output(write_table(comparison_table(results), out / "fit_summary.tsv", index=True))
