import math

import numpy as np
import pytest
from scipy import integrate, special

from core.errors import InsufficientDataError, NumericalError, RankDeficientError
from core.stats import (
    DesignMatrix,
    average_ranks,
    describe,
    fit_ols,
    log1p_transform,
    mean_ci95,
    significance_stars,
    spearman,
    spearman_p,
    student_t_quantile,
    student_t_sf,
    two_sided_p,
    welch_t_test,
)


def _design(columns, names=None):
    values = np.column_stack([np.ones(len(columns[0])), *columns])
    names = names or ["Intercept", *[f"x{i}" for i in range(len(columns))]]
    return DesignMatrix(values=values, column_names=tuple(names))


def _t_density(x, df):
    log_norm = special.gammaln((df + 1) / 2) - special.gammaln(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(log_norm) * (1 + x * x / df) ** (-(df + 1) / 2)


def test_exact_line():
    result = fit_ols(_design([[0.0, 1.0, 2.0]]), [1.0, 3.0, 5.0])
    np.testing.assert_allclose(result.coefficients, [1.0, 2.0], atol=1e-12)
    assert result.r2 == pytest.approx(1.0)
    assert float(result.residuals @ result.residuals) == pytest.approx(0.0, abs=1e-20)


def test_intercept_only_model_returns_mean():
    design = DesignMatrix(values=np.ones((4, 1)), column_names=("Intercept",))
    result = fit_ols(design, [3.0, 3.0, 3.0, 3.0])
    assert result.coefficients[0] == pytest.approx(3.0)
    assert result.r2 == 0.0


def test_matches_normal_equations_oracle(rng):
    X = np.column_stack([np.ones(50), rng.normal(size=(50, 3))])
    y = X @ np.array([0.5, -1.0, 2.0, 0.25]) + rng.normal(scale=0.3, size=50)
    design = DesignMatrix(values=X, column_names=("Intercept", "a", "b", "c"))
    result = fit_ols(design, y)

    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    residuals = y - X @ beta
    sigma2 = residuals @ residuals / (50 - 4)
    se = np.sqrt(np.diag(xtx_inv) * sigma2)
    np.testing.assert_allclose(result.coefficients, beta, atol=1e-8)
    np.testing.assert_allclose(result.std_errors, se, rtol=1e-8)
    np.testing.assert_allclose(result.t_stats, beta / se, rtol=1e-8)
    r2 = 1 - residuals @ residuals / np.sum((y - y.mean()) ** 2)
    assert result.r2 == pytest.approx(r2, rel=1e-10)
    assert result.adjusted_r2 == pytest.approx(1 - (1 - r2) * 49 / 46, rel=1e-10)
    assert result.residual_df == 46


def test_residuals_orthogonal_to_columns(rng):
    X = np.column_stack([np.ones(30), rng.normal(size=(30, 2))])
    y = rng.normal(size=30)
    result = fit_ols(DesignMatrix(values=X, column_names=("Intercept", "a", "b")), y)
    np.testing.assert_allclose(X.T @ result.residuals, 0.0, atol=1e-9)


def test_collinear_columns_are_named():
    x = np.arange(10.0)
    design = _design([x, 2 * x], names=["Intercept", "a", "doubled"])
    with pytest.raises(RankDeficientError) as excinfo:
        fit_ols(design, np.arange(10.0) ** 2)
    assert excinfo.value.columns
    assert set(excinfo.value.columns) <= {"a", "doubled", "Intercept"}


def test_degenerate_dummy_is_rank_deficient():
    # a category dummy that is 1 everywhere duplicates the intercept
    design = _design([np.ones(6), np.arange(6.0)], names=["Intercept", "Emergency", "x"])
    with pytest.raises(RankDeficientError):
        fit_ols(design, np.arange(6.0))


def test_needs_more_rows_than_columns():
    with pytest.raises(InsufficientDataError):
        fit_ols(_design([[0.0, 1.0]]), [1.0, 2.0])


def test_design_matrix_requires_leading_intercept():
    with pytest.raises(ValueError):
        DesignMatrix(values=np.array([[2.0, 1.0], [2.0, 3.0]]), column_names=("a", "b"))
    with pytest.raises(ValueError):
        DesignMatrix(values=np.array([[1.0, np.nan], [1.0, 3.0]]), column_names=("Intercept", "b"))


def test_conf_int_uses_t_quantile(rng):
    X = np.column_stack([np.ones(20), rng.normal(size=20)])
    y = X @ np.array([1.0, 0.5]) + rng.normal(size=20)
    result = fit_ols(DesignMatrix(values=X, column_names=("Intercept", "a")), y)
    lower, upper = result.conf_int()
    q = student_t_quantile(0.975, 18)
    np.testing.assert_allclose(upper - result.coefficients, q * result.std_errors)
    np.testing.assert_allclose(result.coefficients - lower, q * result.std_errors)


@pytest.mark.parametrize("df", [1, 3, 10, 46.5])
@pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
def test_t_tail_matches_numerical_integration(t, df):
    expected, _ = integrate.quad(_t_density, t, np.inf, args=(df,))
    assert student_t_sf(t, df) == pytest.approx(expected, rel=1e-6)
    assert student_t_sf(-t, df) == pytest.approx(1 - expected, rel=1e-6)


def test_t_tail_special_values():
    assert student_t_sf(0.0, 5) == 0.5
    assert student_t_sf(math.inf, 5) == 0.0
    assert two_sided_p(0.0, 5) == 1.0


def test_t_quantile_textbook_value():
    assert student_t_quantile(0.975, 1) == pytest.approx(12.7062, rel=1e-4)
    assert student_t_sf(student_t_quantile(0.975, 7), 7) == pytest.approx(0.025, rel=1e-8)


@pytest.mark.parametrize(
    "p, stars",
    [(0.0005, "***"), (0.001, "**"), (0.005, "**"), (0.01, "*"), (0.049, "*"), (0.05, ""), (0.5, "")],
)
def test_significance_stars_cutpoints(p, stars):
    assert significance_stars(p) == stars


def test_spearman_monotone_relations():
    x = np.arange(1.0, 11.0)
    assert spearman(x, x**2) == pytest.approx(1.0)
    assert spearman(x, x[::-1]) == pytest.approx(-1.0)


def test_spearman_ties_match_brute_force():
    x = [1, 2, 2, 4]
    y = [10, 20, 30, 40]
    rx = np.array([1.0, 2.5, 2.5, 4.0])
    ry = np.array([1.0, 2.0, 3.0, 4.0])
    expected = np.corrcoef(rx, ry)[0, 1]
    np.testing.assert_array_equal(average_ranks(x), rx)
    assert spearman(x, y) == pytest.approx(expected)


def test_spearman_errors():
    with pytest.raises(InsufficientDataError):
        spearman([1, 2], [1, 2])
    with pytest.raises(NumericalError):
        spearman([1, 1, 1], [1, 2, 3])


def test_spearman_of_independent_samples_is_near_zero(rng):
    x = rng.normal(size=1000)
    y = rng.permutation(x)
    rho = spearman(x, y)
    assert abs(rho) < 0.1
    assert 0.0 <= spearman_p(rho, 1000) <= 1.0


@pytest.mark.parametrize(
    "values, mean, sd",
    [
        ([5], 5.0, None),
        ([1, 2, 3], 2.0, 1.0),
        ([2, 4, 4, 4, 5, 5, 7, 9], 5.0, 2.13809),
    ],
)
def test_describe(values, mean, sd):
    result = describe(values)
    assert result.mean == pytest.approx(mean)
    assert result.n == len(values)
    if sd is None:
        assert result.sd is None
    else:
        assert result.sd == pytest.approx(sd, rel=1e-5)


def test_mean_ci95_constant_and_textbook():
    constant = mean_ci95([4.0, 4.0, 4.0])
    assert constant.lower == constant.upper == 4.0
    interval = mean_ci95([0.0, 2.0])
    half = 12.7062 * math.sqrt(2.0) / math.sqrt(2.0)
    assert interval.mean == 1.0
    assert interval.lower == pytest.approx(1 - half, rel=1e-4)
    assert interval.upper == pytest.approx(1 + half, rel=1e-4)


def test_welch_t_test_against_formula():
    a = [1.0, 2.0, 3.0, 4.0]
    b = [2.0, 4.0, 6.0, 8.0, 10.0]
    diff, t, df, p = welch_t_test(a, b)
    va, vb = np.var(a, ddof=1) / 4, np.var(b, ddof=1) / 5
    assert diff == pytest.approx(2.5 - 6.0)
    assert t == pytest.approx(-3.5 / math.sqrt(va + vb))
    assert df == pytest.approx((va + vb) ** 2 / (va**2 / 3 + vb**2 / 4))
    assert 0.0 < p < 0.1


@pytest.mark.parametrize("x, expected", [(0, 0.0), (math.e - 1, 1.0), (99, math.log(100))])
def test_log1p_transform(x, expected):
    assert log1p_transform(x) == pytest.approx(expected)


def test_log1p_rejects_negative():
    with pytest.raises(ValueError):
        log1p_transform(-1)


def _random_system(seed, min_columns=1):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(min_columns, 26))
    n = int(rng.integers(p + 2, 201))
    X = np.column_stack([np.ones(n), rng.normal(size=(n, p - 1))])
    y = X @ rng.normal(size=p) + rng.normal(scale=0.5, size=n)
    names = ("Intercept", *[f"x{i}" for i in range(1, p)])
    return DesignMatrix(values=X, column_names=names), y


@pytest.mark.parametrize("seed", range(100))
def test_random_systems_match_normal_equations(seed):
    design, y = _random_system(seed)
    X = design.values
    n, p = X.shape
    result = fit_ols(design, y)
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    residuals = y - X @ beta
    se = np.sqrt(np.diag(xtx_inv) * (residuals @ residuals) / (n - p))
    np.testing.assert_allclose(result.coefficients, beta, rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(result.std_errors, se, rtol=1e-6)
    assert result.residual_df == n - p


@pytest.mark.parametrize("seed", range(10))
def test_rescaling_a_predictor_rescales_its_estimate(seed):
    design, y = _random_system(1000 + seed, min_columns=2)
    factor = 3.7
    values = design.values.copy()
    values[:, 1] *= factor
    base = fit_ols(design, y)
    scaled = fit_ols(DesignMatrix(values=values, column_names=design.column_names), y)
    assert scaled.coefficients[1] == pytest.approx(base.coefficients[1] / factor, rel=1e-8, abs=1e-10)
    assert scaled.std_errors[1] == pytest.approx(base.std_errors[1] / factor, rel=1e-8)
    assert scaled.t_stats[1] == pytest.approx(base.t_stats[1], rel=1e-8, abs=1e-8)
    assert scaled.r2 == pytest.approx(base.r2, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_noise_column_never_lowers_r2(seed):
    design, y = _random_system(3000 + seed)
    rng = np.random.default_rng(seed)
    values = np.column_stack([design.values, rng.normal(size=design.n_rows)])
    names = (*design.column_names, "noise")
    base = fit_ols(design, y)
    extended = fit_ols(DesignMatrix(values=values, column_names=names), y)
    assert extended.r2 >= base.r2 - 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_t_tails_are_complementary(seed):
    rng = np.random.default_rng(seed)
    t = float(rng.normal(scale=3.0))
    df = float(rng.uniform(0.5, 300.0))
    assert student_t_sf(t, df) + student_t_sf(-t, df) == pytest.approx(1.0, abs=1e-12)


def _brute_force_ranks(values):
    values = list(values)
    return np.array(
        [
            1 + sum(other < value for other in values) + (sum(other == value for other in values) - 1) / 2
            for value in values
        ]
    )


@pytest.mark.parametrize("seed", range(50))
def test_spearman_matches_brute_force_ranks(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 40))
    x = rng.integers(0, 8, size=n).astype(float)
    y = rng.integers(0, 8, size=n).astype(float)
    rx, ry = _brute_force_ranks(x), _brute_force_ranks(y)
    np.testing.assert_allclose(average_ranks(x), rx)
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        with pytest.raises(NumericalError):
            spearman(x, y)
        return
    assert spearman(x, y) == pytest.approx(np.corrcoef(rx, ry)[0, 1], abs=1e-12)
    # strictly increasing transforms keep every rank
    assert spearman(np.exp(x / 4.0), y**3 + y) == pytest.approx(spearman(x, y), abs=1e-12)


def _brute_force_welch(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    va, vb = a.var(ddof=1) / a.size, b.var(ddof=1) / b.size
    t = (a.mean() - b.mean()) / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va**2 / (a.size - 1) + vb**2 / (b.size - 1))
    return t, df, 2 * student_t_sf(abs(t), df)


@pytest.mark.parametrize("seed", range(10))
def test_welch_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 1.0, size=int(rng.integers(2, 30)))
    b = rng.normal(0.5, 2.0, size=int(rng.integers(2, 30)))
    _, t, df, p = welch_t_test(a, b)
    expected_t, expected_df, expected_p = _brute_force_welch(a, b)
    assert t == pytest.approx(expected_t, rel=1e-10)
    assert df == pytest.approx(expected_df, rel=1e-10)
    assert p == pytest.approx(expected_p, rel=1e-6)
