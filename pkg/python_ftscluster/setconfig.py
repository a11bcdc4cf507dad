#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
python-ftscluster Config
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"


import argparse
import logging
import platform
import sys

from . import config
from .exceptions import Error, FtsConfigError


def default_pref():
    if platform.system() == "Darwin":
        return config.MACOS_PREFS_TILDA
    return config.LINUX_PREFS_TILDA


class Parser:
    def __init__(self):
        pref = default_pref()
        self.parser = argparse.ArgumentParser(
            prog="conf-python-ftscluster",
            description="Write or print the default run parameters",
        )
        self.parser.add_argument("--T", type=int, help="series length")
        self.parser.add_argument("--M", type=int, help="number of blocks")
        self.parser.add_argument("--L", type=int, help="basis dimension")
        self.parser.add_argument("--eta", type=float, help="adjacency scaling")
        self.parser.add_argument("--k-max", dest="k_max", type=int, help="largest k tried")
        self.parser.add_argument("--alpha", type=float, help="test level")
        self.parser.add_argument(
            "--sigma2", dest="sigma2_method", choices=("cross", "plugin"),
            help="null variance estimator",
        )
        self.parser.add_argument("--seed", type=int, help="random seed")
        self.parser.add_argument("--restarts", type=int, help="k-means restarts")
        self.parser.add_argument(
            "--replications", type=int, help="bench replications"
        )
        self.parser.add_argument("--workers", type=int, help="worker threads")
        self.parser.add_argument(
            "-C",
            "--config",
            dest="path",
            metavar="PATH",
            default=pref,
            help=f"Specify config file (default {pref})",
        )
        self.parser.add_argument(
            "-P",
            "--print",
            action="store_true",
            help="Print existing config",
        )
        self.parser.add_argument(
            "-r",
            "--reset",
            action="store_true",
            help="Start from built-in defaults instead of the existing file",
        )

    def parse(self, argv):
        """
        :param argv:    list of arguments to parse
        :returns:       argparse.NameSpace object
        """
        return self.parser.parse_args(argv)


SETTABLE = ("T", "M", "L", "eta", "k_max", "alpha", "sigma2_method", "seed", "restarts",
            "replications", "workers")


def print_config(config_path, out=sys.stdout):
    conf = config.Config(config_path)
    try:
        conf.load()
    except FtsConfigError:
        sys.stderr.write("Could not read config preferences, have you set them yet?\n")
        return 1
    print(conf.config_path, file=out)
    for key, value in sorted(conf.run.to_plist().items()):
        print(f"{key}: {value}", file=out)
    return 0


def write_config(args, config_path):
    conf = config.Config(config_path)
    if not args.reset:
        conf.load(required=False)
    conf.run.update({k: getattr(args, k) for k in SETTABLE})
    conf.save()
    print(f"Check the config by invoking `conf-python-ftscluster -P -C {config_path}`")
    return 0


def setconfig(argv):
    logger = logging.getLogger(__name__)
    args = Parser().parse(argv)
    logger.debug(f"args: {args!r}")
    config_path = config.resolve_config_path(args.path)
    try:
        if args.print:
            return print_config(config_path)
        return write_config(args, config_path)
    except Error as error:
        sys.stderr.write(f"{error}\n")
        return error.exit_code


def main():
    fmt = "%(asctime)s: %(levelname)8s: %(name)s - %(funcName)s(): %(message)s"
    logging.basicConfig(level=logging.INFO, format=fmt)
    sys.exit(setconfig(sys.argv[1:]))


if __name__ == "__main__":
    main()
