#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ftscluster command line tool

    ftscluster ingest      gridded CSV -> coefficient CSV
    ftscluster simulate    model collections -> coefficient CSVs + labels.json
    ftscluster similarity  coefficient CSVs -> similarity / adjacency matrices
    ftscluster cluster     similarity CSV -> cluster report
    ftscluster select-k    similarity CSV -> per-method k selection
    ftscluster test        coefficient CSVs -> pairwise equality tests
    ftscluster bench       replicated simulation tables

Exit codes: 0 success, 1 input error, 2 numeric error.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import argparse
import logging
import sys
from pathlib import Path

from . import basis, bench, cluster, config, convert, equality, models, spectra, version
from .exceptions import Error, FtsDimensionError, FtsParameterError

LOG_FORMAT = "%(asctime)s: %(levelname)8s: %(name)s - %(funcName)s(): %(message)s"
COMMANDS = ("ingest", "simulate", "similarity", "cluster", "select-k", "test", "bench")
# argparse destinations that are not RunConfig fields
_CONTROL = ("command", "config", "verbose", "quiet")


class Parser:
    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="ftscluster",
            description="Spectral clustering of functional time series",
        )
        self.parser.add_argument(
            "-V", "--version", action="version", version=f"%(prog)s {version.string()}"
        )
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("-c", "--config", metavar="PATH", help="config plist")
        common.add_argument("-o", "--output", metavar="DIR", help="output directory")
        common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
        common.add_argument("-q", "--quiet", action="store_true", help="warnings only")
        common.add_argument("--workers", type=int, help="worker threads")
        common.add_argument("--seed", type=int, help="random seed")

        sub = self.parser.add_subparsers(dest="command", metavar="COMMAND")
        sub.required = True

        p = sub.add_parser("ingest", parents=[common], help="fit gridded curves")
        p.add_argument("inputs", nargs="+", metavar="CSV", help="gridded CSV files")
        p.add_argument("--L", dest="ingest_dimension", type=int, help="basis dimension")
        p.add_argument("--missing-cap", dest="missing_cap", type=float,
                       help="largest missing fraction per row")
        p.add_argument("--grid-header", dest="grid_header", action="store_const",
                       const=True, help="first row holds the grid points")
        p.add_argument("--center", action="store_const", const=True,
                       help="subtract the mean curve")

        p = sub.add_parser("simulate", parents=[common], help="simulate a setting")
        p.add_argument("--setting", type=int, choices=sorted(models.SETTINGS))
        p.add_argument("--n", type=int, help="realizations per model")
        p.add_argument("--T", type=int, help="series length")
        p.add_argument("--L", type=int, help="basis dimension")

        p = sub.add_parser("similarity", parents=[common], help="pairwise similarity")
        p.add_argument("inputs", nargs="+", metavar="CSV", help="coefficient files")
        p.add_argument("--M", type=int, help="number of blocks")
        p.add_argument("--eta", type=float, help="adjacency scaling")
        p.add_argument("--labels", metavar="JSON", help="labels for the ordered matrix")
        p.add_argument("--center", action="store_const", const=True,
                       help="subtract the mean curve")

        for name, text in (("cluster", "spectral clustering"), ("select-k", "choose k")):
            p = sub.add_parser(name, parents=[common], help=text)
            p.add_argument("inputs", nargs=1, metavar="CSV", help="similarity matrix")
            p.add_argument("--eta", type=float, help="adjacency scaling")
            p.add_argument("--k-method", dest="k_method", choices=cluster.METHODS)
            p.add_argument("--k-max", dest="k_max", type=int, help="largest k tried")
            p.add_argument("--restarts", type=int, help="k-means restarts")
            p.add_argument("--truth", metavar="JSON", help="true labels")
            if name == "cluster":
                p.add_argument("--k", type=int, help="number of clusters")

        p = sub.add_parser("test", parents=[common], help="pairwise equality tests")
        p.add_argument("inputs", nargs="+", metavar="CSV", help="coefficient files")
        p.add_argument("--M", type=int, help="number of blocks")
        p.add_argument("--alpha", type=float, help="level")
        p.add_argument("--sigma2", dest="sigma2_method", choices=equality.SIGMA2_METHODS,
                       help="null variance estimator")
        p.add_argument("--center", action="store_const", const=True,
                       help="subtract the mean curve")

        p = sub.add_parser("bench", parents=[common], help="replicated tables")
        p.add_argument("--kind", choices=bench.KINDS)
        p.add_argument("--setting", type=int, choices=sorted(models.SETTINGS))
        p.add_argument("--n", type=int, help="realizations per model")
        p.add_argument("--T", type=int, help="series length")
        p.add_argument("--M", type=int, help="number of blocks")
        p.add_argument("--L", type=int, help="basis dimension")
        p.add_argument("--replications", type=int)
        p.add_argument("--methods", nargs="+", choices=bench.BENCH_METHODS)
        p.add_argument("--eta", type=float, help="adjacency scaling")
        p.add_argument("--eta-sweep", dest="eta_sweep", nargs="+", type=float)
        p.add_argument("--models", nargs="+", choices=models.MODELS)
        p.add_argument("--k-max", dest="k_max", type=int)
        p.add_argument("--restarts", type=int)
        p.add_argument("--sigma2", dest="sigma2_method", choices=equality.SIGMA2_METHODS)

    def parse(self, argv):
        """
        :param argv:    list of arguments to parse
        :returns:       argparse.NameSpace object
        """
        return self.parser.parse_args(argv)


def resolve(args):
    """
    defaults < config file < flags

    :returns <RunConfig>:
    """
    conf = config.Config(args.config)
    conf.load(required=bool(args.config))
    flags = {k: v for k, v in vars(args).items() if k not in _CONTROL}
    return conf.run.update(flags)


def _output_dir(run):
    out = Path(run.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _plan(run, T):
    M = run.M if run.M else spectra.default_blocks(T)
    return spectra.make_block_plan(T, M)


def load_collection(paths, center=False):
    """every series from every coefficient file, shapes checked with file names"""
    collection = []
    sources = []
    for p in paths:
        for s in convert.read_coefficients(p):
            collection.append(basis.center_series(s) if center else s)
            sources.append(str(p))
    if len(collection) < 2:
        raise FtsDimensionError(f"need at least 2 series, got {len(collection)}")
    first = collection[0]
    for s, source in zip(collection, sources):
        if (s.T, s.L) != (first.T, first.L):
            raise FtsDimensionError(
                f"{source} ({s.id}) has shape {s.T}x{s.L}, "
                f"{sources[0]} ({first.id}) has {first.T}x{first.L}"
            )
    return collection


def cmd_ingest(run):
    log = logging.getLogger(f"{__name__}.ingest")
    out = _output_dir(run)
    spec = basis.BasisSpec(run.ingest_dimension)
    report = []
    for source in run.inputs:
        sample = convert.read_gridded(source, grid_header=run.grid_header)
        fraction = sample.missing_fraction
        kept, skipped = basis.screen_rows(sample, run.missing_cap)
        series = basis.fit_curves(kept, spec, run.missing_cap)
        if run.center:
            series = basis.center_series(series)
        target = out / f"{series.id}.csv"
        convert.write_coefficients(target, series)
        log.info(f"{source} -> {target}: {series.T} curves, L={series.L}")
        report.append(
            {
                "input": str(source),
                "output": str(target),
                "id": series.id,
                "skipped_rows": skipped.tolist(),
                "missing_fraction": fraction,
                "residuals": series.residuals,
            }
        )
    convert.write_json(out / "ingest_report.json", report)
    return report


def cmd_simulate(run):
    if run.T is None:
        raise FtsParameterError("simulate needs --T")
    out = _output_dir(run)
    L = run.L or basis.DEFAULT_SIM_DIMENSION
    collection = models.make_setting(
        run.setting, run.n, run.T, seed=run.seed, L=L, workers=run.workers
    )
    for s in collection.series:
        convert.write_coefficients(out / f"{s.id}.csv", s)
    convert.write_labels(out / "labels.json", collection.ids, collection.labels,
                         collection.models)
    logging.getLogger(__name__).info(
        f"setting {run.setting}: {len(collection.series)} series written to {out}"
    )
    return collection


def cmd_similarity(run):
    out = _output_dir(run)
    collection = load_collection(run.inputs, run.center)
    plan = _plan(run, collection[0].T)
    sim = spectra.similarity_matrix(collection, plan, workers=run.workers)
    W = cluster.adjacency(sim, run.eta)
    convert.write_matrix(out / "similarity.csv", sim.values, sim.ids)
    convert.write_json(out / "similarity.json", convert.similarity_envelope(sim))
    convert.write_matrix(out / "adjacency.csv", W.values, sim.ids)
    if run.labels:
        labels = convert.read_labels(run.labels, sim.ids)
        ordered = sim.reordered(labels)
        convert.write_matrix(out / "similarity_ordered.csv", ordered.values, ordered.ids)
        within, between = (
            "n/a" if m is None else f"{m:.4g}" for m in sim.block_means(labels)
        )
        logging.getLogger(__name__).info(
            f"mean similarity within labels {within}, between {between}"
        )
    return sim


def _truth(run, sim):
    return convert.read_labels(run.truth, sim.ids) if run.truth else None


def _selection(run, sim, method):
    """chosen k and per-k scores of one rule, from a single scoring pass"""
    scores = cluster.score_k(sim, method, run.eta, run.k_max, run.seed, run.restarts,
                             run.workers)
    return {"chosen_k": cluster.k_from_scores(method, scores, run.eta), "scores": scores}


def cmd_select_k(run):
    out = _output_dir(run)
    sim = convert.read_similarity(run.inputs[0])
    methods = [run.k_method] if run.k_method else list(cluster.METHODS)
    report = {method: _selection(run, sim, method) for method in methods}
    convert.write_json(out / "select_k.json", report)
    return report


def cmd_cluster(run):
    out = _output_dir(run)
    sim = convert.read_similarity(run.inputs[0])
    selection = {}
    if run.k is not None:
        k, chosen_by = run.k, "fixed"
    elif run.k_method:
        selection[run.k_method] = _selection(run, sim, run.k_method)
        k, chosen_by = selection[run.k_method]["chosen_k"], run.k_method
    else:
        raise FtsParameterError("cluster needs --k or --k-method")
    outcome = cluster.spectral_cluster(sim, k, eta=run.eta, seed=run.seed,
                                       restarts=run.restarts)
    outcome.selection_method = chosen_by
    report = outcome.to_dict()
    report["ids"] = sim.ids
    report["eta"] = run.eta
    report["selection"] = selection
    truth = _truth(run, sim)
    if truth is not None:
        report["misclustering_rate"] = cluster.misclustering_rate(outcome.labels, truth)
    convert.write_json(out / "cluster_report.json", report)
    convert.write_matrix(
        out / "embedding.csv",
        outcome.embedding.values,
        [f"v{i + 1}" for i in range(outcome.embedding.values.shape[1])],
    )
    logging.getLogger(__name__).info(f"k={k} ({chosen_by}), inertia {outcome.inertia:.4g}")
    return report


def cmd_test(run):
    out = _output_dir(run)
    collection = load_collection(run.inputs, run.center)
    plan = _plan(run, collection[0].T)
    results = equality.pairwise_tests(
        collection, plan, run.alpha, workers=run.workers, method=run.sigma2_method
    )
    convert.write_json(out / "test_report.json", [r.to_dict() for r in results])
    convert.write_matrix(
        out / "pvalues.csv",
        equality.pvalue_matrix(results, len(collection)),
        [s.id for s in collection],
    )
    rejected = sum(r.reject for r in results)
    logging.getLogger(__name__).info(
        f"{rejected}/{len(results)} pairs rejected at alpha={run.alpha}"
    )
    return results


def cmd_bench(run):
    out = _output_dir(run)
    spec = bench.BenchSpec(
        setting=run.setting,
        n=run.n,
        T=run.T or 256,
        M=run.M,
        L=run.L or basis.DEFAULT_SIM_DIMENSION,
        replications=run.replications,
        methods=tuple(run.methods),
        eta=run.eta,
        eta_sweep=tuple(run.eta_sweep),
        k_max=run.k_max,
        restarts=run.restarts,
        models=tuple(run.models),
        seed=run.seed,
        sigma2_method=run.sigma2_method,
        workers=run.workers,
    )
    table = bench.run_bench(spec, run.kind)
    target = out / f"bench_{run.kind}.csv"
    table.to_csv(target, index=False, float_format="%.6g", lineterminator="\n")
    logging.getLogger(__name__).info(f"wrote {target}")
    return table


HANDLERS = {
    "ingest": cmd_ingest,
    "simulate": cmd_simulate,
    "similarity": cmd_similarity,
    "cluster": cmd_cluster,
    "select-k": cmd_select_k,
    "test": cmd_test,
    "bench": cmd_bench,
}


def run_command(argv):
    """
    :param argv <list>:     arguments without the program name
    :returns <int>:         exit code
    """
    logger = logging.getLogger(__name__)
    try:
        args = Parser().parse(argv)
    except SystemExit as exit_:
        # usage errors are input errors
        return 1 if exit_.code else 0
    logger.debug(f"args: {args!r}")
    try:
        run = resolve(args)
        HANDLERS[args.command](run)
        config.save_run_config(run, _output_dir(run))
    except Error as error:
        sys.stderr.write(f"ftscluster {args.command}: {error}\n")
        return error.exit_code
    return 0


def main():
    argv = sys.argv[1:]
    level = logging.INFO
    if "-v" in argv or "--verbose" in argv:
        level = logging.DEBUG
    elif "-q" in argv or "--quiet" in argv:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT)
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
