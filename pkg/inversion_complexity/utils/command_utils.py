"""
Command utilities for inversion-complexity.

This module contains helpers for parsing command values and formatting reports.
"""

import json
from typing import Any, Dict, List


class ValueParser:
    """Parser for values typed on the command line."""

    @staticmethod
    def parse(value_str: str) -> Any:
        """
        Parse a string value into an appropriate type.

        Args:
            value_str: Raw value

        Returns:
            JSON value, boolean, number or the string itself
        """
        try:
            return json.loads(value_str)
        except json.JSONDecodeError:
            pass

        if value_str.lower() == 'true':
            return True
        if value_str.lower() == 'false':
            return False

        try:
            return int(value_str)
        except ValueError:
            pass

        try:
            return float(value_str)
        except ValueError:
            return value_str


class CommandFormatter:
    """Formatter for command output."""

    @staticmethod
    def format_table(
        headers: List[str],
        rows: List[List[Any]],
        padding: int = 2
    ) -> str:
        """
        Format a table for display.

        Args:
            headers: List of column headers
            rows: List of rows (each row is a list of column values)
            padding: Padding between columns

        Returns:
            Formatted table string
        """
        col_widths = [len(h) for h in headers]
        for row in rows:
            for i, cell in enumerate(row):
                if i < len(col_widths):
                    col_widths[i] = max(col_widths[i], len(str(cell)))

        gap = " " * padding
        header_line = gap.join(h.ljust(w) for h, w in zip(headers, col_widths)).rstrip()
        separator = "-" * len(header_line)

        formatted_rows = [gap.join(str(cell).ljust(w) for cell, w in zip(row, col_widths)).rstrip()
                          for row in rows]
        return "\n".join([header_line, separator] + formatted_rows)

    @staticmethod
    def format_value(value: Any) -> str:
        """Render a scalar or a list of scalars on one line."""
        if value is None:
            return "-"
        if isinstance(value, bool):
            return "yes" if value else "no"
        if isinstance(value, (list, tuple)):
            return "[" + ", ".join(CommandFormatter.format_value(v) for v in value) + "]"
        return str(value)

    @staticmethod
    def format_key_value(data: Dict[str, Any], indent: int = 0) -> str:
        """
        Format a dictionary as key-value pairs.

        Nested dictionaries are indented; lists of dictionaries become
        ``-`` items; lists of scalars stay on the key's line.

        Args:
            data: Dictionary to format
            indent: Indentation level

        Returns:
            Formatted string
        """
        result = []
        indent_str = " " * indent

        for key, value in data.items():
            if isinstance(value, dict):
                result.append(f"{indent_str}{key}:")
                if value:
                    result.append(CommandFormatter.format_key_value(value, indent + 2))
            elif isinstance(value, list) and any(isinstance(item, dict) for item in value):
                result.append(f"{indent_str}{key}:")
                for item in value:
                    if isinstance(item, dict):
                        block = CommandFormatter.format_key_value(item, indent + 4)
                        result.append(f"{indent_str}  - " + block.lstrip())
                    else:
                        result.append(f"{indent_str}  - {CommandFormatter.format_value(item)}")
            else:
                result.append(f"{indent_str}{key}: {CommandFormatter.format_value(value)}")

        return "\n".join(result)
