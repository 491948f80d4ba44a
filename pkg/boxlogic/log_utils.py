"""
Additional logging and report output utility methods. Reports are the only
thing written to standard output; everything else goes through `logging`
(standard error).
"""

import json
import logging as log
import os
import sys
from typing import Any, Mapping, Optional, TextIO


def print_report(document: Any, stream: Optional[TextIO] = None) -> None:
    """
    Prints a JSON report on a single line.

    Args:
        document (Any) : A JSON serializable document.
        stream (TextIO, optional) : The target stream (stdout by default).
    """
    stream = stream or sys.stdout
    stream.write(json.dumps(document) + "\n")
    stream.flush()


def set_action_output(values: Mapping[str, Any]) -> bool:
    """
    Appends `key=value` lines to the GitHub Action output file, if the run is
    part of an action.

    Args:
        values (Mapping[str, Any]) : The outputs to set.

    Returns:
        (bool) False if the output file could not be written, True otherwise.
    """
    github_output = os.getenv("GITHUB_OUTPUT")
    if not github_output:
        return True
    log.info("Writing outputs %s to GitHub output file %s",
             ", ".join(values), github_output)
    try:
        with open(github_output, "a", encoding="UTF-8") as f:
            for key, value in values.items():
                f.write(f"{key}={value}\n")
    except OSError as e:
        log.error("Failed to write to %s: %s", github_output, e)
        return False
    return True
