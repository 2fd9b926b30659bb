"""One-step forecasting of a target series from its own and exogenous lags.

The model is linear in lagged values: the target regressed on its last
``ar_order`` values and on the last ``exog_order`` values of each exogenous
series, with no intercept unless requested. Coefficients come from ordinary
least squares. Evaluation is in-sample one-step-ahead: mean absolute error
plus the running mean of absolute errors over the evaluated months.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .analysis import NumericSeries

MODEL_NAMES = (
    "ar",
    "mean-valence",
    "mean-arousal",
    "mean-dominance",
    "std-valence",
    "std-arousal",
    "std-dominance",
    "both-valence",
    "both-arousal",
    "both-dominance",
)

MODEL_EXOGENOUS: dict[str, tuple[str, ...]] = {
    "ar": (),
    "mean-valence": ("mean-valence",),
    "mean-arousal": ("mean-arousal",),
    "mean-dominance": ("mean-dominance",),
    "std-valence": ("std-valence",),
    "std-arousal": ("std-arousal",),
    "std-dominance": ("std-dominance",),
    "both-valence": ("mean-valence", "std-valence"),
    "both-arousal": ("mean-arousal", "std-arousal"),
    "both-dominance": ("mean-dominance", "std-dominance"),
}


@dataclass(frozen=True)
class ArmaSpec:
    """Model shape: autoregressive order, exogenous lag order, series names."""

    ar_order: int
    exog_order: int
    exogenous_names: tuple[str, ...] = ()
    include_intercept: bool = False

    def __post_init__(self) -> None:
        if self.ar_order < 0 or self.exog_order < 0:
            raise ValueError("lag orders must be non-negative")
        if self.ar_order == 0 and self.exog_order == 0:
            raise ValueError("model needs at least one lag term")
        if self.exogenous_names and self.exog_order == 0:
            raise ValueError("exogenous series given but exog_order is 0")

    @property
    def n_exogenous(self) -> int:
        return len(self.exogenous_names)

    @property
    def max_lag(self) -> int:
        # exog_order counts even with no exogenous series attached, so a
        # benchmark spec with matching orders is evaluated over exactly the
        # same months as the models it is compared against.
        return max(self.ar_order, self.exog_order)

    @property
    def n_columns(self) -> int:
        cols = self.ar_order + self.n_exogenous * self.exog_order
        return cols + (1 if self.include_intercept else 0)


@dataclass(frozen=True)
class RegressionSystem:
    """A lagged design matrix and its response, with row and column labels."""

    regressors: np.ndarray
    response: np.ndarray
    months: list[str]
    columns: list[str]


def assemble_regression(
    spec: ArmaSpec,
    target: NumericSeries,
    exogenous: Mapping[str, NumericSeries],
) -> RegressionSystem:
    """Build the least-squares system for one-step prediction.

    Row t predicts target(t) from target(t-1..t-ar_order) and, per
    exogenous series, series(t-1..t-exog_order). Rows start at the maximum
    lag; every series must share the target's month axis and be gap-free.
    """
    for name in spec.exogenous_names:
        if name not in exogenous:
            raise ValueError(f"missing exogenous series {name!r}")
        if exogenous[name].months != target.months:
            raise ValueError(f"exogenous series {name!r} is not on the target month axis")
    series_values: dict[str, list[float]] = {}
    for label, series in [("target", target)] + [
        (name, exogenous[name]) for name in spec.exogenous_names
    ]:
        for month, value in zip(series.months, series.values):
            if value is None:
                raise ValueError(f"series {label!r} has a missing value at {month}")
        series_values[label] = series.values  # type: ignore[assignment]
    start = spec.max_lag
    total = len(target.months)
    if total - start < 2:
        raise ValueError(
            f"series of length {total} is too short for maximum lag {start}"
        )
    columns = [f"target[t-{i}]" for i in range(1, spec.ar_order + 1)]
    for name in spec.exogenous_names:
        columns.extend(f"{name}[t-{i}]" for i in range(1, spec.exog_order + 1))
    if spec.include_intercept:
        columns.append("intercept")
    tv = series_values["target"]
    rows = []
    for t in range(start, total):
        row = [tv[t - i] for i in range(1, spec.ar_order + 1)]
        for name in spec.exogenous_names:
            ev = series_values[name]
            row.extend(ev[t - i] for i in range(1, spec.exog_order + 1))
        if spec.include_intercept:
            row.append(1.0)
        rows.append(row)
    return RegressionSystem(
        regressors=np.asarray(rows, dtype=float),
        response=np.asarray(tv[start:], dtype=float),
        months=list(target.months[start:]),
        columns=columns,
    )


@dataclass(frozen=True)
class ArmaModel:
    """A fitted lagged-regression model."""

    spec: ArmaSpec
    ar_coeffs: list[float]
    exog_coeffs: list[list[float]]
    intercept: float
    training_months: list[str]
    sse: float

    def coefficient_vector(self) -> np.ndarray:
        flat = list(self.ar_coeffs)
        for per_series in self.exog_coeffs:
            flat.extend(per_series)
        if self.spec.include_intercept:
            flat.append(self.intercept)
        return np.asarray(flat, dtype=float)


def fit_arma(
    spec: ArmaSpec,
    target: NumericSeries,
    exogenous: Optional[Mapping[str, NumericSeries]] = None,
) -> ArmaModel:
    """Fit the lagged regression by ordinary least squares.

    On a rank-deficient design the minimum-norm solution is returned and a
    RuntimeWarning is issued.
    """
    system = assemble_regression(spec, target, exogenous or {})
    n_rows, n_cols = system.regressors.shape
    if n_rows < n_cols:
        raise ValueError(
            f"underdetermined fit: {n_rows} rows for {n_cols} coefficients"
        )
    solution, _, rank, _ = np.linalg.lstsq(system.regressors, system.response, rcond=None)
    if rank < n_cols:
        warnings.warn(
            f"rank-deficient design (rank {rank} of {n_cols} columns); "
            "returning the minimum-norm least-squares solution",
            RuntimeWarning,
            stacklevel=2,
        )
    residual = system.response - system.regressors @ solution
    sse = float(residual @ residual)
    ar_coeffs = [float(c) for c in solution[: spec.ar_order]]
    exog_coeffs = []
    offset = spec.ar_order
    for _ in spec.exogenous_names:
        exog_coeffs.append([float(c) for c in solution[offset : offset + spec.exog_order]])
        offset += spec.exog_order
    intercept = float(solution[offset]) if spec.include_intercept else 0.0
    return ArmaModel(
        spec=spec,
        ar_coeffs=ar_coeffs,
        exog_coeffs=exog_coeffs,
        intercept=intercept,
        training_months=system.months,
        sse=sse,
    )


def predict_one_step(
    model: ArmaModel,
    target: NumericSeries,
    exogenous: Mapping[str, NumericSeries],
    month: str,
) -> float:
    """Predict the target at ``month`` from values strictly before it."""
    spec = model.spec
    try:
        t = target.months.index(month)
    except ValueError:
        raise ValueError(f"month {month} is not on the target axis") from None
    if t < spec.max_lag:
        raise ValueError(f"month {month} has fewer than {spec.max_lag} months of history")
    acc = model.intercept
    for i, coeff in enumerate(model.ar_coeffs, start=1):
        value = target.values[t - i]
        if value is None:
            raise ValueError(f"target is missing a value at lag {i} before {month}")
        acc += coeff * value
    for name, per_series in zip(spec.exogenous_names, model.exog_coeffs):
        series = exogenous[name]
        if series.months != target.months:
            raise ValueError(f"exogenous series {name!r} is not on the target month axis")
        for i, coeff in enumerate(per_series, start=1):
            value = series.values[t - i]
            if value is None:
                raise ValueError(f"series {name!r} is missing a value at lag {i} before {month}")
            acc += coeff * value
    return float(acc)


@dataclass(frozen=True)
class EvaluationReport:
    """In-sample one-step evaluation over the rows the model can predict."""

    months: list[str]
    predictions: list[float]
    actuals: list[float]
    errors: list[float]
    cumulative_mean_abs_error: list[float]
    mae: float

    @property
    def month_range(self) -> tuple[str, str]:
        return self.months[0], self.months[-1]


def evaluate(
    model: ArmaModel,
    target: NumericSeries,
    exogenous: Optional[Mapping[str, NumericSeries]] = None,
) -> EvaluationReport:
    """One-step predictions, signed errors, and the running-mean error curve.

    The final point of the cumulative curve equals the mean absolute error.
    """
    system = assemble_regression(model.spec, target, exogenous or {})
    predictions = system.regressors @ model.coefficient_vector()
    errors = system.response - predictions
    abs_cumsum = np.cumsum(np.abs(errors))
    counts = np.arange(1, len(errors) + 1)
    cumulative = abs_cumsum / counts
    return EvaluationReport(
        months=list(system.months),
        predictions=[float(v) for v in predictions],
        actuals=[float(v) for v in system.response],
        errors=[float(v) for v in errors],
        cumulative_mean_abs_error=[float(v) for v in cumulative],
        mae=float(cumulative[-1]),
    )


def evaluate_holdout(
    spec: ArmaSpec,
    target: NumericSeries,
    exogenous: Optional[Mapping[str, NumericSeries]] = None,
    holdout: int = 12,
) -> tuple[ArmaModel, EvaluationReport]:
    """Fit on all but the last ``holdout`` months, evaluate on those months.

    Predictions on the held-out months are still one step ahead: each uses
    the true lagged values, only the coefficients come from the shortened
    training window. The default in-sample evaluation is ``evaluate``; this
    split exists as a stricter sensitivity check.
    """
    if holdout < 1:
        raise ValueError(f"holdout must be >= 1, got {holdout}")
    total = len(target.months)
    split = total - holdout
    if split < spec.max_lag + 2:
        raise ValueError(
            f"holdout of {holdout} leaves only {split} training months; "
            f"need at least {spec.max_lag + 2}"
        )
    exogenous = exogenous or {}

    def prefix(series: NumericSeries) -> NumericSeries:
        return NumericSeries(months=series.months[:split], values=series.values[:split])

    model = fit_arma(spec, prefix(target), {n: prefix(s) for n, s in exogenous.items()})
    system = assemble_regression(spec, target, exogenous)
    keep = [i for i, month in enumerate(system.months) if month >= target.months[split]]
    predictions = system.regressors[keep] @ model.coefficient_vector()
    actuals = system.response[keep]
    errors = actuals - predictions
    cumulative = np.cumsum(np.abs(errors)) / np.arange(1, len(errors) + 1)
    report = EvaluationReport(
        months=[system.months[i] for i in keep],
        predictions=[float(v) for v in predictions],
        actuals=[float(v) for v in actuals],
        errors=[float(v) for v in errors],
        cumulative_mean_abs_error=[float(v) for v in cumulative],
        mae=float(cumulative[-1]),
    )
    return model, report


@dataclass(frozen=True)
class SuiteEntry:
    """One fitted and evaluated model of the comparison suite."""

    name: str
    model: ArmaModel
    report: EvaluationReport


def model_suite(
    target: NumericSeries,
    components: Mapping[str, NumericSeries],
    ar_order: int = 1,
    exog_order: int = 3,
    holdout: Optional[int] = None,
) -> list[SuiteEntry]:
    """Fit and evaluate the ten standard models in their fixed order.

    ``components`` must supply the six emotion component series named
    ``mean-valence`` .. ``std-dominance``. The pure-autoregressive
    benchmark uses the same lag orders as the rest so every model is
    evaluated over the same months. ``holdout`` switches every model from
    the default in-sample evaluation to the held-out split.
    """
    missing = [n for names in MODEL_EXOGENOUS.values() for n in names if n not in components]
    if missing:
        raise ValueError(f"components are missing series: {sorted(set(missing))}")
    entries = []
    for name in MODEL_NAMES:
        exog_names = MODEL_EXOGENOUS[name]
        spec = ArmaSpec(
            ar_order=ar_order,
            exog_order=exog_order,
            exogenous_names=exog_names,
        )
        exog = {n: components[n] for n in exog_names}
        if holdout is None:
            model = fit_arma(spec, target, exog)
            report = evaluate(model, target, exog)
        else:
            model, report = evaluate_holdout(spec, target, exog, holdout)
        entries.append(SuiteEntry(name=name, model=model, report=report))
    return entries


def permute_series(series: NumericSeries, rng: np.random.Generator) -> NumericSeries:
    """Randomly reorder a gap-free series' values on the same month axis."""
    for month, value in zip(series.months, series.values):
        if value is None:
            raise ValueError(f"cannot permute a series with a missing value at {month}")
    shuffled = rng.permutation(np.asarray(series.values, dtype=float))
    return NumericSeries(months=list(series.months), values=[float(v) for v in shuffled])


@dataclass(frozen=True)
class SurrogateReport:
    """Permutation-test outcome for one model's exogenous information."""

    n_surrogates: int
    empirical_mae: float
    surrogate_maes: list[float]
    p_hat: float
    seed: int


def surrogate_test(
    spec: ArmaSpec,
    target: NumericSeries,
    exogenous: Mapping[str, NumericSeries],
    n_surrogates: int = 1000,
    seed: int = 0,
) -> SurrogateReport:
    """Permutation significance test for the exogenous contribution.

    Each surrogate independently shuffles every exogenous series in time
    (destroying temporal alignment, preserving each value multiset), refits
    the model, and records its in-sample mean absolute error. ``p_hat`` is
    the fraction of surrogates with error at or below the empirical
    model's.
    """
    if n_surrogates < 1:
        raise ValueError(f"n_surrogates must be >= 1, got {n_surrogates}")
    if not spec.exogenous_names:
        raise ValueError("surrogate test needs at least one exogenous series")
    empirical = evaluate(fit_arma(spec, target, exogenous), target, exogenous)
    maes = []
    for i in range(n_surrogates):
        rng = np.random.default_rng([seed, i])
        shuffled = {
            name: permute_series(exogenous[name], rng)
            for name in spec.exogenous_names
        }
        model = fit_arma(spec, target, shuffled)
        maes.append(evaluate(model, target, shuffled).mae)
    at_or_below = sum(1 for m in maes if m <= empirical.mae)
    return SurrogateReport(
        n_surrogates=n_surrogates,
        empirical_mae=empirical.mae,
        surrogate_maes=maes,
        p_hat=at_or_below / n_surrogates,
        seed=seed,
    )


__all__ = [
    "MODEL_NAMES",
    "MODEL_EXOGENOUS",
    "ArmaSpec",
    "RegressionSystem",
    "ArmaModel",
    "EvaluationReport",
    "SuiteEntry",
    "SurrogateReport",
    "assemble_regression",
    "fit_arma",
    "predict_one_step",
    "evaluate",
    "evaluate_holdout",
    "model_suite",
    "permute_series",
    "surrogate_test",
]
