"""Least squares with classical inference and the small statistics the analyses need."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, special, stats

from .errors import InsufficientDataError, NumericalError, RankDeficientError

RANK_TOLERANCE = 1e-10
INTERCEPT = "Intercept"
STAR_CUTPOINTS = ((0.001, "***"), (0.01, "**"), (0.05, "*"))


@dataclass(frozen=True)
class DesignMatrix:
    values: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != len(self.column_names):
            raise ValueError("design matrix shape does not match column names")
        if len(set(self.column_names)) != len(self.column_names):
            raise ValueError("design matrix column names must be unique")
        if not np.all(np.isfinite(values)):
            raise ValueError("design matrix contains non-finite entries")
        # other all-ones columns (degenerate dummies) surface as rank deficiency in fit_ols
        if values.shape[1] == 0 or not np.all(values[:, 0] == 1.0):
            raise ValueError("the first design column must be the all-ones intercept")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.column_names.index(name)]


@dataclass(frozen=True)
class FitResult:
    column_names: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    r2: float
    adjusted_r2: float
    residual_df: int
    n_obs: int
    n_dropped_rows: int = 0
    fitted: np.ndarray = field(default=None, repr=False)
    residuals: np.ndarray = field(default=None, repr=False)

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.column_names.index(name)])

    def std_error(self, name: str) -> float:
        return float(self.std_errors[self.column_names.index(name)])

    def conf_int(self, level: float = 0.95) -> tuple[np.ndarray, np.ndarray]:
        q = student_t_quantile(0.5 + level / 2.0, self.residual_df)
        return self.coefficients - q * self.std_errors, self.coefficients + q * self.std_errors


def _check_rank(values: np.ndarray, names) -> None:
    singular = np.linalg.svd(values, compute_uv=False)
    if singular[0] == 0.0 or singular[-1] / singular[0] <= RANK_TOLERANCE:
        _, r_factor, perm = linalg.qr(values, mode="economic", pivoting=True)
        diag = np.abs(np.diag(r_factor))
        rank = int(np.sum(diag > RANK_TOLERANCE * diag[0])) if diag[0] > 0 else 0
        offending = [names[j] for j in perm[rank:]]
        raise RankDeficientError(
            f"design matrix is rank deficient; collinear columns: {', '.join(offending)}",
            columns=offending,
        )


def fit_ols(design: DesignMatrix, y, *, n_dropped_rows: int = 0) -> FitResult:
    X = design.values
    y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    if y.shape != (n,):
        raise ValueError(f"outcome has shape {y.shape}, expected ({n},)")
    if not np.all(np.isfinite(y)):
        raise ValueError("outcome contains non-finite values")
    if n <= p:
        raise InsufficientDataError(f"need more rows than columns (n={n}, p={p})")
    _check_rank(X, design.column_names)

    q_factor, r_factor = np.linalg.qr(X, mode="reduced")
    beta = linalg.solve_triangular(r_factor, q_factor.T @ y, lower=False)
    fitted = X @ beta
    residuals = y - fitted
    rss = float(residuals @ residuals)
    df = n - p
    sigma2 = rss / df

    r_inv = linalg.solve_triangular(r_factor, np.eye(p), lower=False)
    xtx_inv = r_inv @ r_inv.T
    std_errors = np.sqrt(np.clip(np.diag(xtx_inv), 0.0, None) * sigma2)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(std_errors > 0, beta / std_errors, np.copysign(np.inf, beta))
    t_stats = np.where((std_errors == 0) & (beta == 0), 0.0, t_stats)
    p_values = np.array([two_sided_p(t, df) for t in t_stats])

    centered = y - y.mean()
    tss = float(centered @ centered)
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    adjusted = 1.0 - (1.0 - r2) * (n - 1) / df
    if not np.all(np.isfinite(beta)):
        raise NumericalError("least squares produced non-finite coefficients")
    return FitResult(
        column_names=design.column_names,
        coefficients=beta,
        std_errors=std_errors,
        t_stats=t_stats,
        p_values=p_values,
        r2=float(r2),
        adjusted_r2=float(adjusted),
        residual_df=df,
        n_obs=n,
        n_dropped_rows=n_dropped_rows,
        fitted=fitted,
        residuals=residuals,
    )


def student_t_sf(t: float, df: float) -> float:
    """Upper tail P(T > t) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    t = float(t)
    if math.isnan(t):
        return math.nan
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * float(special.betainc(df / 2.0, 0.5, x))
    return tail if t > 0 else 1.0 - tail


def two_sided_p(t: float, df: float) -> float:
    if math.isnan(t):
        return math.nan
    return min(1.0, 2.0 * student_t_sf(abs(t), df))


def student_t_quantile(prob: float, df: float) -> float:
    if not 0.0 < prob < 1.0:
        raise ValueError("probability must lie in (0, 1)")
    if prob == 0.5:
        return 0.0
    tail = min(prob, 1.0 - prob)
    x = float(special.betaincinv(df / 2.0, 0.5, 2.0 * tail))
    magnitude = math.sqrt(df * (1.0 - x) / x)
    return magnitude if prob > 0.5 else -magnitude


def significance_stars(p_value: float) -> str:
    if p_value is None or math.isnan(p_value):
        return ""
    for cutpoint, stars in STAR_CUTPOINTS:
        if p_value < cutpoint:
            return stars
    return ""


def average_ranks(values) -> np.ndarray:
    return stats.rankdata(np.asarray(values, dtype=np.float64), method="average")


def spearman(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("spearman inputs must have equal length")
    if x.size < 3:
        raise InsufficientDataError("spearman needs at least 3 observations")
    rx = average_ranks(x)
    ry = average_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise NumericalError("spearman undefined: zero rank variance")
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def spearman_p(rho: float, n: int) -> float:
    if n <= 2:
        return math.nan
    if abs(rho) >= 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return two_sided_p(t, n - 2)


@dataclass(frozen=True)
class Description:
    mean: float
    sd: float | None
    n: int


def describe(values) -> Description:
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        raise InsufficientDataError("describe needs at least one value")
    sd = float(data.std(ddof=1)) if data.size >= 2 else None
    return Description(mean=float(data.mean()), sd=sd, n=int(data.size))


@dataclass(frozen=True)
class MeanInterval:
    mean: float
    lower: float
    upper: float
    n: int


def mean_ci95(values) -> MeanInterval:
    data = np.asarray(list(values), dtype=np.float64)
    if data.size < 2:
        raise InsufficientDataError("a confidence interval needs at least 2 values")
    mean = float(data.mean())
    sd = float(data.std(ddof=1))
    half = student_t_quantile(0.975, data.size - 1) * sd / math.sqrt(data.size)
    return MeanInterval(mean=mean, lower=mean - half, upper=mean + half, n=int(data.size))


def welch_t_test(a, b) -> tuple[float, float, float, float]:
    """Welch two-sample test; returns (mean difference, t, df, two-sided p)."""
    a = np.asarray(list(a), dtype=np.float64)
    b = np.asarray(list(b), dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise InsufficientDataError("welch test needs at least 2 values per group")
    va = float(a.var(ddof=1)) / a.size
    vb = float(b.var(ddof=1)) / b.size
    diff = float(a.mean() - b.mean())
    if va + vb == 0.0:
        raise NumericalError("welch test undefined: both groups have zero variance")
    result = stats.ttest_ind(a, b, equal_var=False)
    return diff, float(result.statistic), float(result.df), float(result.pvalue)


def log1p_transform(x: float) -> float:
    x = float(x)
    if x < 0 or math.isnan(x):
        raise ValueError(f"log1p transform needs a non-negative value, got {x}")
    return math.log1p(x)
