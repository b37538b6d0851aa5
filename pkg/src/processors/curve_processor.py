"""
Pipeline behind the command line: expand curves, fit, predict and select iterations
"""

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from boosting.engine import EngineSpec
from boosting.model import BoostedModel, predict_boosted
from fda.basis import BasisSystem, build_basis
from fda.dataset import FunctionalDataSet
from fda.smoothing import smooth_curves
from modelsel.criteria import select_by_information
from modelsel.cross_validation import cross_validate
from modelsel.curve import SelectionCurve
from modelsel.folds import kfold
from processors.curve_io import CurveTable
from utils.config import Config
from utils.errors import UsageError
from utils.logger import get_logger

logger = get_logger("CurveProcessor")

BASIS_KINDS = {"fourier": "fourier", "bspline": "bspline", "poly": "polynomial", "polynomial": "polynomial"}
OUTPUT_COLUMNS = {"score": "score", "label": "label", "prob": "probability", "probability": "probability"}
BETA_GRID_POINTS = 201


class CurveProcessor:
    """Runs the expand / fit / predict / cv steps on curve tables"""

    def __init__(self, config: Config):
        self.config = config

    def build_basis(self, table: CurveTable, kind: str, n_basis: int, degree: Optional[int] = None) -> BasisSystem:
        """Basis of the requested kind on the table's grid range"""
        if kind not in BASIS_KINDS:
            raise UsageError(f"unknown basis '{kind}' (choose from fourier, bspline, poly)")
        domain = (float(table.grid[0]), float(table.grid[-1]))
        if domain[0] >= domain[1]:
            raise UsageError("the curve table needs at least two grid points to define a domain")
        params = {}
        if BASIS_KINDS[kind] == "bspline":
            params["degree"] = int(self.config.get("cli.degree", 3) if degree is None else degree)
        return build_basis(BASIS_KINDS[kind], n_basis, domain, params)

    def expand(self, table: CurveTable, basis: BasisSystem, lam: float = 0.0, k: int = 2) -> FunctionalDataSet:
        """Basis coefficients of every curve in the table"""
        dataset = smooth_curves(table.grid, table.values, basis, lam, k,
                                response=table.response, response_kind=table.response_kind)
        logger.info(f"Expanded {dataset.n} curves in a {basis.kind} basis of {basis.n_basis} functions")
        return dataset

    def coefficient_frame(self, dataset: FunctionalDataSet) -> pd.DataFrame:
        """c1..cK columns plus the response column when present"""
        frame = pd.DataFrame(dataset.coefficients, columns=[f"c{l + 1}" for l in range(dataset.basis.n_basis)])
        if dataset.response is not None and dataset.response_kind in ("scalar", "label"):
            column = "label" if dataset.response_kind == "label" else "y"
            frame[column] = dataset.response
        return frame

    def fit(self, dataset: FunctionalDataSet, engine: EngineSpec, M: int,
            smoothing: Tuple[float, int] = (0.0, 2)) -> BoostedModel:
        """Train to M iterations and remember how curves were expanded"""
        self._require_response(dataset, engine)
        model = engine.fit(dataset, M, progress_callback=self._progress("iteration"))
        metadata = {**model.metadata, "smoothing_lambda": float(smoothing[0]), "smoothing_order": int(smoothing[1])}
        return replace(model, metadata=metadata)

    def predict(self, model: BoostedModel, table: CurveTable, output: str = "label",
                m_opt: Optional[int] = None) -> pd.DataFrame:
        """Expand the table in the model's data basis and score it"""
        if output not in OUTPUT_COLUMNS:
            raise UsageError(f"unknown output kind '{output}'")
        column = OUTPUT_COLUMNS[output]
        if column == "probability" and model.algorithm != "logitboost":
            raise UsageError(f"--output-kind prob needs a LogitBoost model, this one is {model.algorithm}")
        if m_opt is not None and not 1 <= m_opt <= model.M:
            raise UsageError(f"--m {m_opt} outside the model's 1..{model.M} stages")

        lam = float(model.metadata.get("smoothing_lambda", 0.0))
        k = int(model.metadata.get("smoothing_order", 2))
        C = smooth_curves(table.grid, table.values, model.data_basis, lam, k).coefficients
        values = predict_boosted(model, C, m_opt, column)
        return pd.DataFrame({column: values})

    def select(self, dataset: FunctionalDataSet, engine: EngineSpec, M_max: int, folds: int,
               seed: Optional[int], criterion: str = "cv") -> SelectionCurve:
        """Selection curve by cross-validation (stratified for labels) or AIC/BIC"""
        self._require_response(dataset, engine)
        if criterion in ("aic", "bic"):
            curve, _ = select_by_information(engine, dataset, M_max, criterion)
            return curve
        if criterion != "cv":
            raise UsageError(f"unknown criterion '{criterion}' (choose from cv, aic, bic)")
        if not 2 <= folds <= dataset.n:
            raise UsageError(f"--folds must lie in 2..{dataset.n}, got {folds}")

        labels = dataset.response if dataset.is_classification else None
        assignment = kfold(dataset.n, folds, seed, labels)
        return cross_validate(engine, dataset, assignment, M_max, max_workers=self.config.max_workers,
                              progress_callback=self._progress("fold"))

    def curve_frame(self, curve: SelectionCurve) -> pd.DataFrame:
        column = "error" if curve.metric in ("misclassification", "mse") else curve.metric
        return pd.DataFrame({"m": curve.iterations, column: curve.values})

    def beta_frame(self, model: BoostedModel, m_opt: Optional[int] = None,
                   n_points: int = BETA_GRID_POINTS) -> pd.DataFrame:
        """Plot data of the boosted coefficient function on an even grid"""
        a, b = model.beta_basis.domain
        t = np.linspace(a, b, n_points)
        return pd.DataFrame({"t": t, "beta": model.beta(t, m_opt)})

    @staticmethod
    def _require_response(dataset: FunctionalDataSet, engine: EngineSpec):
        if dataset.response_kind not in ("scalar", "label"):
            raise UsageError("training needs a 'label' or 'y' column in the input table")
        if engine.is_classifier and not dataset.is_classification:
            raise UsageError(f"{engine.algorithm} needs a 'label' column, the input has 'y'")

    @staticmethod
    def _progress(unit: str):
        def report(current: int, total: int):
            logger.debug(f"{unit} {current}/{total}")
        return report
