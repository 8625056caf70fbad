"""CSV dataset ingestion and the simulate-side writers."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd

from .datagen import SimSetting
from .exceptions import DataFileError


def _coerce_numeric(series, col_name):
    """Float values of one column, naming the first bad cell on failure."""
    coerced = pd.to_numeric(series, errors="coerce")
    bad = coerced.isna()
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        value = series.iloc[row]
        where = f"row {row + 2}, column {col_name!r}"  # +2: header and 1-based
        if pd.isna(value):
            raise DataFileError(f"missing value at {where}")
        raise DataFileError(f"non-numeric value {value!r} at {where}")
    return coerced.to_numpy(dtype=np.float64)


def load_dataset_csv(path, response):
    """Read a headered CSV into (X, y, feature_names).

    ``response`` picks the response column by name or by integer position;
    every remaining column is a feature and must be numeric.
    """
    path = Path(path)
    if not path.exists():
        raise DataFileError(f"no such file: {path}")
    try:
        frame = pd.read_csv(path)
    except pd.errors.ParserError as exc:
        raise DataFileError(f"malformed CSV {path}: {exc}") from None
    except pd.errors.EmptyDataError:
        raise DataFileError(f"empty CSV: {path}") from None

    columns = list(frame.columns)
    if str(response) in columns:
        response_col = str(response)
    else:
        try:
            pos = int(response)
        except (TypeError, ValueError):
            raise DataFileError(
                f"response column {response!r} not found in {path}"
            ) from None
        if not 0 <= pos < len(columns):
            raise DataFileError(
                f"response index {pos} out of range for {len(columns)} columns"
            )
        response_col = columns[pos]

    feature_cols = [c for c in columns if c != response_col]
    if not feature_cols:
        raise DataFileError("the CSV has no feature columns besides the response")

    y = _coerce_numeric(frame[response_col], response_col)
    X = np.column_stack(
        [_coerce_numeric(frame[c], c) for c in feature_cols]
    )
    return X, y, feature_cols


def metadata_path(dataset_path) -> Path:
    path = Path(dataset_path)
    if path.suffix == ".csv":
        return path.with_suffix(".meta.json")
    return Path(str(path) + ".meta.json")


def write_dataset_csv(path, X, y):
    """Write the dataset with header x1..xp, y."""
    X = np.asarray(X)
    frame = pd.DataFrame(X, columns=[f"x{j + 1}" for j in range(X.shape[1])])
    frame["y"] = np.asarray(y)
    frame.to_csv(path, index=False)


def write_metadata_json(path, setting: SimSetting):
    """Sidecar JSON recording the setting, seed, true support and beta."""
    beta = setting.beta_star()
    support = sorted(setting.true_support())
    meta = {
        "design": setting.design,
        "n": setting.n,
        "p": setting.p,
        "q": setting.q,
        "rho": setting.rho,
        "s": setting.s,
        "beta_pattern": setting.beta_pattern,
        "family": setting.family,
        "seed": setting.seed,
        "true_support": support,
        "true_support_names": [f"x{j + 1}" for j in support],
        "beta_star_support": [float(beta[j]) for j in support],
        "intercept": 0.0,
    }
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
