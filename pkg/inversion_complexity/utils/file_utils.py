"""
File utilities for inversion-complexity.

This module reads and writes the JSON documents used for functions, systems,
bases and circuits.
"""

import json
import logging
import os
from typing import Any

from .logging_utils import ParseError

logger = logging.getLogger(__name__)


class FileHandler:
    """Reads and writes input and report files."""

    @staticmethod
    def read_text(path: str) -> str:
        """
        Read a whole text file.

        Args:
            path: File path; ``~`` is expanded

        Returns:
            File contents
        """
        expanded = os.path.expanduser(path)
        try:
            with open(expanded, 'r', encoding='utf-8') as f:
                return f.read()
        except OSError as e:
            raise ParseError(f"Cannot read file: {e.strerror or e}", {"file": path})

    @staticmethod
    def load_json(path: str) -> Any:
        """
        Read and decode a JSON file.

        Args:
            path: File path

        Returns:
            Decoded document
        """
        text = FileHandler.read_text(path)
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON: {e.msg}", {"file": path, "line": e.lineno})

    @staticmethod
    def write_text(path: str, text: str) -> str:
        """
        Write a text file, creating its directory when needed.

        Args:
            path: File path
            text: Contents; a trailing newline is added if missing

        Returns:
            The expanded path written
        """
        expanded = os.path.expanduser(path)
        directory = os.path.dirname(expanded)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        with open(expanded, 'w', encoding='utf-8') as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.debug(f"wrote {expanded}")
        return expanded
