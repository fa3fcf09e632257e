#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Logging setup for the command-line front end

Library modules only create loggers; handlers are attached here, on stderr,
because stdout carries the serialized results.
"""

import logging
import sys


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def setup_logging(level: str = "WARNING") -> None:
    """Route all log records at or above level to stderr"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_klmi", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._klmi = True
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
