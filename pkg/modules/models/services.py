from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.errors import InsufficientDataError
from core.stats import INTERCEPT, DesignMatrix, FitResult, fit_ols, significance_stars

logger = logging.getLogger(__name__)

CATEGORY_DUMMIES = ("Emergency", "Medical", "Memorial")
SCORE_COLUMNS = ("Care", "Fairness", "Loyalty")
SENTIMENT_DUMMIES = ("Positive", "Neutral")
CONTROL_COLUMNS = ("log_length", "log_photos", "log_goal")

MODEL_OUTCOMES = {
    1: ("log_n_donations", "Number of donations"),
    2: ("log_avg_amount", "Average donation amount"),
    3: ("log_n_comments", "Number of comments"),
}

COLUMN_LABELS = {
    INTERCEPT: "Intercept",
    "Care": "Care",
    "Fairness": "Fairness",
    "Loyalty": "Loyalty",
    "Positive": "Positive sentiment",
    "Neutral": "Neutral sentiment",
    "log_length": "Campaign appeal length",
    "log_photos": "Number of photos",
    "log_goal": "Fundraising goal",
}


def interaction_name(category: str, score: str) -> str:
    return f"{category} x {score}"


def design_columns(interactions: bool = True) -> tuple[str, ...]:
    columns = [INTERCEPT, *CATEGORY_DUMMIES, *SCORE_COLUMNS]
    if interactions:
        for score in SCORE_COLUMNS:
            for category in CATEGORY_DUMMIES:
                columns.append(interaction_name(category, score))
    columns.extend(SENTIMENT_DUMMIES)
    columns.extend(CONTROL_COLUMNS)
    return tuple(columns)


@dataclass(frozen=True)
class ModelSpec:
    model_id: int
    outcome: str
    design: DesignMatrix
    y: np.ndarray
    campaign_ids: tuple[str, ...]
    n_dropped_rows: int


def design_row(row, interactions: bool) -> list[float]:
    dummies = [1.0 if row.category == category else 0.0 for category in CATEGORY_DUMMIES]
    scores = [row.care, row.fairness, row.loyalty]
    values = [1.0, *dummies, *scores]
    if interactions:
        for score in scores:
            values.extend(dummy * score for dummy in dummies)
    values.append(1.0 if row.sentiment == "positive" else 0.0)
    values.append(1.0 if row.sentiment == "neutral" else 0.0)
    values.extend([row.log_length, row.log_photos, row.log_goal])
    return values


def model_spec(model_id: int, rows, *, interactions: bool = True) -> ModelSpec:
    if model_id not in MODEL_OUTCOMES:
        raise ValueError(f"unknown model id: {model_id}")
    rows = sorted(rows, key=lambda row: row.campaign_id)
    if not rows:
        raise InsufficientDataError("model specification needs at least one feature row")
    outcome, _ = MODEL_OUTCOMES[model_id]
    usable = [row for row in rows if getattr(row, outcome) is not None]
    dropped = len(rows) - len(usable)
    if dropped:
        logger.info("[models] model %d: %d campaigns without donations dropped", model_id, dropped)
    if not usable:
        raise InsufficientDataError(f"model {model_id} has no usable rows")
    values = np.array([design_row(row, interactions) for row in usable], dtype=np.float64)
    design = DesignMatrix(values=values, column_names=design_columns(interactions))
    y = np.array([getattr(row, outcome) for row in usable], dtype=np.float64)
    return ModelSpec(
        model_id=model_id,
        outcome=outcome,
        design=design,
        y=y,
        campaign_ids=tuple(row.campaign_id for row in usable),
        n_dropped_rows=dropped,
    )


def fit_model(model_id: int, rows, *, interactions: bool = True) -> tuple[ModelSpec, FitResult]:
    spec = model_spec(model_id, rows, interactions=interactions)
    result = fit_ols(spec.design, spec.y, n_dropped_rows=spec.n_dropped_rows)
    logger.info(
        "[models] model %d fitted on %d campaigns (adj. R2 %.3f)",
        model_id,
        result.n_obs,
        result.adjusted_r2,
    )
    return spec, result


def column_label(name: str) -> str:
    return COLUMN_LABELS.get(name, name.replace(" x ", " × "))


def fit_table(result: FitResult) -> pd.DataFrame:
    lower, upper = result.conf_int()
    coefficients = pd.DataFrame(
        {
            "term": list(result.column_names),
            "label": [column_label(name) for name in result.column_names],
            "coef": result.coefficients,
            "std_err": result.std_errors,
            "t": result.t_stats,
            "p_value": result.p_values,
            "stars": [significance_stars(p) for p in result.p_values],
            "ci_lower": lower,
            "ci_upper": upper,
        }
    )
    summary = pd.DataFrame(
        {
            "term": ["n_obs", "n_dropped", "r2", "adj_r2", "residual_df"],
            "label": [
                "Number of observations",
                "Dropped campaigns",
                "R2",
                "Adjusted R2",
                "Residual degrees of freedom",
            ],
            "coef": [
                result.n_obs,
                result.n_dropped_rows,
                result.r2,
                result.adjusted_r2,
                result.residual_df,
            ],
        }
    )
    return pd.concat([coefficients, summary], ignore_index=True)


def format_cell(coef: float, std_err: float, stars: str) -> str:
    return f"{coef:.3f}{stars} ({std_err:.3f})"


def comparison_table(results: dict[int, FitResult]) -> pd.DataFrame:
    """Side-by-side ``coef*** (se)`` layout, one column per model."""
    names = None
    columns = {}
    for model_id in sorted(results):
        result = results[model_id]
        names = names or list(result.column_names)
        columns[f"Model {model_id}"] = [
            format_cell(
                result.coefficient(name),
                result.std_error(name),
                significance_stars(result.p_values[result.column_names.index(name)]),
            )
            for name in names
        ] + [f"{result.n_obs:,}", f"{result.adjusted_r2:.2f}"]
    # intercept row last
    order = [name for name in names if name != INTERCEPT] + [INTERCEPT]
    index = [column_label(name) for name in names] + ["Number of observations", "Adjusted R2"]
    frame = pd.DataFrame(columns, index=index)
    ordered = [column_label(name) for name in order] + ["Number of observations", "Adjusted R2"]
    return frame.loc[ordered]
