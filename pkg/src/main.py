#!/usr/bin/env python3
"""
FuncBoost
Command-line entry point: expand, fit, predict and cv on wide curve tables
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from boosting.engine import EngineSpec
from learners.base import WeakLearnerSpec
from processors.curve_io import load_curves, write_table
from processors.curve_processor import CurveProcessor
from processors.model_store import load_model, save_model
from utils.config import Config
from utils.errors import UsageError
from utils.logger import setup_logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse that reports bad flags as UsageError instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(message)


def build_parser(config: Config) -> ArgumentParser:
    cli = lambda key: config.get(f"cli.{key}")

    parser = ArgumentParser(prog="funcboost", description="Boosting for functional data")
    parser.add_argument("--config", help="configuration file (default config/config.json)")
    parser.add_argument("--verbose", action="store_true", help="log every iteration and fold")
    commands = parser.add_subparsers(dest="command", metavar="{expand,fit,predict,cv}")
    commands.required = True

    def basis_flags(p):
        p.add_argument("--basis", choices=["fourier", "bspline", "poly"], default=cli("basis"))
        p.add_argument("--nbasis", type=int, default=cli("nbasis"))
        p.add_argument("--degree", type=int, default=cli("degree"), help="B-spline degree")
        p.add_argument("--penalty-order", type=int, default=cli("penalty_order"))

    def training_flags(p):
        p.add_argument("--algo", choices=["adaboost", "l2boost", "logitboost"], default=cli("algo"))
        p.add_argument("--learner", choices=["stump", "componentwise", "penalized"], default=cli("learner"))
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="penalty weight of the penalized learner")
        p.add_argument("--df-target", type=float, default=None,
                       help="degrees of freedom of the penalized learner (lambda found by bisection)")
        p.add_argument("--smooth-lambda", type=float, default=cli("smoothing_lambda"),
                       help="roughness penalty used when expanding the curves")
        p.add_argument("--mode", choices=["reweight", "resample"], default=None)
        p.add_argument("--seed", type=int, default=cli("seed"))
        p.add_argument("--shrinkage", type=float, default=None)

    expand = commands.add_parser("expand", help="write basis coefficients of every curve")
    expand.add_argument("--input", required=True)
    expand.add_argument("--out", required=True)
    basis_flags(expand)
    expand.add_argument("--lambda", dest="lam", type=float, default=cli("smoothing_lambda"),
                        help="roughness penalty of the expansion")

    fit = commands.add_parser("fit", help="train a boosted model")
    fit.add_argument("--input", required=True)
    fit.add_argument("--out", required=True, help="model file")
    basis_flags(fit)
    training_flags(fit)
    fit.add_argument("--m", type=int, default=cli("m"), help="boosting iterations")
    fit.add_argument("--beta-out", help="CSV of the boosted coefficient function (linear learners)")

    predict = commands.add_parser("predict", help="score curves with a saved model")
    predict.add_argument("--input", required=True)
    predict.add_argument("--model", required=True)
    predict.add_argument("--out", required=True)
    predict.add_argument("--m", type=int, default=None, help="truncate the model after m stages")
    predict.add_argument("--output-kind", choices=["score", "label", "prob"], default=cli("output_kind"))

    cv = commands.add_parser("cv", help="selection curve over the number of iterations")
    cv.add_argument("--input", required=True)
    cv.add_argument("--out", required=True)
    basis_flags(cv)
    training_flags(cv)
    cv.add_argument("--folds", type=int, default=cli("folds"))
    cv.add_argument("--mmax", type=int, default=cli("mmax"))
    cv.add_argument("--criterion", choices=["cv", "aic", "bic"], default=cli("criterion"))
    return parser


def engine_from_args(args, config: Config) -> EngineSpec:
    """Validate flag combinations and build the engine"""
    if args.mode is not None and args.algo != "adaboost":
        raise UsageError("--mode only applies to --algo adaboost")
    if args.shrinkage is not None and args.algo != "l2boost":
        raise UsageError("--shrinkage only applies to --algo l2boost")
    if args.learner != "penalized" and (args.lam is not None or args.df_target is not None):
        raise UsageError("--lambda and --df-target only apply to --learner penalized")
    if args.lam is not None and args.df_target is not None:
        raise UsageError("give either --lambda or --df-target, not both")
    if getattr(args, "criterion", "cv") in ("aic", "bic") and (args.algo != "l2boost" or args.learner != "penalized"):
        raise UsageError(f"--criterion {args.criterion} needs --algo l2boost --learner penalized")

    learner = WeakLearnerSpec(
        args.learner,
        lam=config.get("cli.learner_lambda", 1.0) if args.lam is None else args.lam,
        penalty_order=args.penalty_order,
        df_target=args.df_target,
    )
    return EngineSpec(
        args.algo,
        learner,
        mode=args.mode or config.get("cli.mode", "reweight"),
        seed=args.seed,
        shrinkage=config.get("cli.shrinkage", 1.0) if args.shrinkage is None else args.shrinkage,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse the command line, execute one subcommand and return the exit code"""
    load_dotenv()
    logger = logging.getLogger("FuncBoost")
    try:
        config = Config()
        parser = build_parser(config)
        args = parser.parse_args(argv)
        if args.config:
            config = Config(args.config)
            args = build_parser(config).parse_args(argv)

        level = logging.DEBUG if args.verbose else getattr(logging, str(config.get("logging.level", "INFO")).upper(), logging.INFO)
        logger = setup_logger(level=level, log_to_file=bool(config.get("logging.log_to_file", False)))
        processor = CurveProcessor(config)

        if args.command == "predict":
            model = load_model(args.model)
            frame = processor.predict(model, load_curves(args.input), args.output_kind, args.m)
            write_table(args.out, frame)
            logger.info(f"Wrote {len(frame)} predictions to {args.out}")
            return EXIT_OK

        if args.nbasis < 1:
            raise UsageError(f"--nbasis must be positive, got {args.nbasis}")
        table = load_curves(args.input)
        basis = processor.build_basis(table, args.basis, args.nbasis, args.degree)

        if args.command == "expand":
            dataset = processor.expand(table, basis, args.lam, args.penalty_order)
            write_table(args.out, processor.coefficient_frame(dataset))
            return EXIT_OK

        engine = engine_from_args(args, config)
        dataset = processor.expand(table, basis, args.smooth_lambda, args.penalty_order)

        if args.command == "fit":
            if args.m < 1:
                raise UsageError(f"--m must be positive, got {args.m}")
            if args.beta_out and args.learner == "stump":
                raise UsageError("--beta-out needs a linear learner (componentwise or penalized)")
            model = processor.fit(dataset, engine, args.m, (args.smooth_lambda, args.penalty_order))
            save_model(model, args.out)
            if args.beta_out:
                write_table(args.beta_out, processor.beta_frame(model))
            return EXIT_OK

        if args.mmax < 1:
            raise UsageError(f"--mmax must be positive, got {args.mmax}")
        curve = processor.select(dataset, engine, args.mmax, args.folds, args.seed, args.criterion)
        write_table(args.out, processor.curve_frame(curve))
        print(f"m_opt={curve.m_opt} {'error' if args.criterion == 'cv' else args.criterion}={curve.min_value:.6g}")
        return EXIT_OK

    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        logger.debug("Traceback", exc_info=True)
        return EXIT_DATA


def main():
    """Main application entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
