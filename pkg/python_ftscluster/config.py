# -*- coding: utf-8 -*-

"""
Configuration for python-ftscluster

Run parameters are stored as property lists. Values resolve as
built-in defaults < config file < command line flags, and every command
saves the resolved values next to its outputs.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import dataclasses
import logging
import plistlib
from dataclasses import dataclass, field
from os import path
from typing import Optional

from .basis import DEFAULT_INGEST_DIMENSION, DEFAULT_MISSING_CAP
from .cluster import DEFAULT_ETA, DEFAULT_K_MAX, DEFAULT_RESTARTS
from .equality import DEFAULT_ALPHA, DEFAULT_SIGMA2_METHOD
from .exceptions import FtsConfigError

LINUX_PREFS_TILDA = "~/.python-ftscluster.plist"
MACOS_PREFS_TILDA = "~/Library/Preferences/org.python-ftscluster.plist"
RUN_CONFIG_NAME = "run_config.plist"
logging.getLogger(__name__).addHandler(logging.NullHandler())

DEFAULT_ETA_SWEEP = [0.5, 2.5, 5.0, 10.0]
DEFAULT_REPLICATIONS = 100


@dataclass
class RunConfig:
    """
    Every parameter a command can take. None means "not set here".
    """

    T: Optional[int] = None
    M: Optional[int] = None
    L: Optional[int] = None
    eta: float = DEFAULT_ETA
    k: Optional[int] = None
    k_method: Optional[str] = None
    k_max: int = DEFAULT_K_MAX
    alpha: float = DEFAULT_ALPHA
    sigma2_method: str = DEFAULT_SIGMA2_METHOD
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    replications: int = DEFAULT_REPLICATIONS
    setting: int = 1
    n: int = 10
    kind: str = "cluster"
    methods: list = field(default_factory=lambda: ["true", "ch", "silhouette", "relgap", "sd1gap"])
    eta_sweep: list = field(default_factory=lambda: list(DEFAULT_ETA_SWEEP))
    models: list = field(default_factory=lambda: ["I", "II", "V", "VI"])
    missing_cap: float = DEFAULT_MISSING_CAP
    ingest_dimension: int = DEFAULT_INGEST_DIMENSION
    grid_header: bool = False
    center: bool = False
    workers: int = 1
    inputs: list = field(default_factory=list)
    output: str = "."
    labels: Optional[str] = None
    truth: Optional[str] = None

    @classmethod
    def fields(cls):
        return [f.name for f in dataclasses.fields(cls)]

    def update(self, values):
        """
        Override with the non-None entries of a mapping, unknown keys rejected

        :param values <dict>:
        :returns <RunConfig>:   self
        """
        known = set(self.fields())
        unknown = sorted(set(values) - known)
        if unknown:
            raise FtsConfigError(f"unknown config keys: {', '.join(unknown)}")
        for key, value in values.items():
            if value is not None:
                setattr(self, key, value)
        return self

    def to_plist(self):
        """dict without None values (plists have no null)"""
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


class Config:
    def __init__(self, config_path=None):
        self.log = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        self.config_path = resolve_config_path(config_path)
        self.run = RunConfig()

    def load(self, required=True):
        """
        Read the config file into self.run

        :param required <bool>:     missing file is an error
        """
        if not path.exists(self.config_path):
            if required:
                raise FtsConfigError(f"Config file does not exist: {self.config_path}")
            self.log.debug(f"no config at {self.config_path}, using defaults")
            return self.run
        with open(self.config_path, "rb") as fptr:
            try:
                prefs = plistlib.load(fptr)
            except (plistlib.InvalidFileException, ValueError) as e:
                raise FtsConfigError(
                    f"Could not load {self.config_path}, is it plist formatted? ({e})"
                ) from None
        if not isinstance(prefs, dict):
            raise FtsConfigError(f"{self.config_path}: top level must be a dictionary")
        self.run.update(prefs)
        self.log.debug(f"loaded: {self.config_path}")
        return self.run

    def save(self, config_path=None):
        config_path = config_path or self.config_path
        self.log.info(f"saving: {config_path}")
        with open(config_path, "wb") as fptr:
            plistlib.dump(self.run.to_plist(), fptr)
        return config_path


def resolve_config_path(config_path=None):
    if not config_path:
        macos_prefs = path.expanduser(MACOS_PREFS_TILDA)
        linux_prefs = path.expanduser(LINUX_PREFS_TILDA)
        if path.exists(macos_prefs):
            config_path = macos_prefs
        elif path.exists(linux_prefs):
            config_path = linux_prefs
        else:
            config_path = linux_prefs
    config_path = str(config_path)
    if config_path[0] == "~":
        config_path = path.expanduser(config_path)
    return config_path


def save_run_config(run, directory):
    """write `run` as run_config.plist in `directory`"""
    conf = Config(path.join(directory, RUN_CONFIG_NAME))
    conf.run = run
    return conf.save()
