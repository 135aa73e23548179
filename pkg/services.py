from modules.campaigns.repository import ingest
from modules.campaigns.services import build_features, descriptives, load_inputs
from modules.figures.services import comment_alignment, comment_length_by_group, donation_position_curve
from modules.models.services import fit_model, fit_table, model_spec
from modules.reports.services import build_report_pdf

__all__ = [
    "ingest",
    "load_inputs",
    "build_features",
    "descriptives",
    "model_spec",
    "fit_model",
    "fit_table",
    "comment_alignment",
    "comment_length_by_group",
    "donation_position_curve",
    "build_report_pdf",
]
