#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
python-ftscluster Exceptions
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

# exit codes used by the command line tools
EXIT_INPUT = 1
EXIT_NUMERIC = 2


# pylint: disable=unnecessary-pass
class Error(Exception):
    """just passing through"""

    exit_code = EXIT_INPUT

    def __init__(self, message=None):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return f"{self.message}"


class FtsConfigError(Error):
    """Error with the config file"""


class FtsInputError(Error):
    """Malformed input file"""

    def __init__(self, message=None, path=None, line=None):
        super().__init__(message)
        self.path = path
        self.line = line

    def __str__(self):
        where = ""
        if self.path is not None:
            where = f"{self.path}"
            if self.line is not None:
                where += f", line {self.line}"
            where += ": "
        return f"{where}{self.message}"


class FtsDomainError(Error):
    """Point outside the unit interval"""


class FtsDimensionError(Error):
    """Lengths, shapes or block plans do not agree"""


class FtsPlanError(Error):
    """T does not factor into M blocks of even length"""

    def __init__(self, message=None, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion

    def __str__(self):
        if self.suggestion is not None:
            return f"{self.message} (nearest valid M: {self.suggestion})"
        return f"{self.message}"


class FtsFitError(Error):
    """Least-squares fit of a row failed"""

    def __init__(self, message=None, row=None):
        super().__init__(message)
        self.row = row


class FtsParameterError(Error):
    """Invalid tuning parameter or method name"""


class FtsDegenerateInputError(Error):
    """A denominator vanished, e.g. both series identically zero"""

    exit_code = EXIT_NUMERIC

    def __init__(self, message=None, pair=None):
        super().__init__(message)
        self.pair = pair

    def __str__(self):
        if self.pair is not None:
            return f"{self.pair[0]} / {self.pair[1]}: {self.message}"
        return f"{self.message}"


class FtsGraphError(Error):
    """Graph has a vertex with zero degree"""

    exit_code = EXIT_NUMERIC


class FtsNumericError(Error):
    """Non-finite values where finite ones are required"""

    exit_code = EXIT_NUMERIC
