# Copyright (c) 2025 The mfvis developers
# All rights reserved.
#
# SPDX-License-Identifier: MIT
#
# Licensed under the MIT License

"""Helpers for building frozen parameter records from JSON objects."""

from __future__ import annotations

import dataclasses
import enum
from collections.abc import Mapping
from typing import Any, TypeVar

from .errors import ValidationError

T = TypeVar("T")
E = TypeVar("E", bound=enum.Enum)


def from_mapping(cls: type[T], data: Any, section: str, **nested: Any) -> T:  # noqa: ANN401
    """Create a dataclass instance from a JSON object, rejecting unknown keys.

    Args:
        cls (type[T]): The dataclass to instantiate.
        data (Any): The decoded JSON object.
        section (str): The name of the configuration section, used in error messages.
        **nested (Any): Fields that are provided by the caller instead of the JSON object.

    Returns:
        T: The created instance.

    Raises:
        ValidationError: If `data` is not an object, contains unknown keys or has invalid values.
    """
    if not isinstance(data, Mapping):
        msg = f"Configuration section '{section}' must be a JSON object."
        raise ValidationError(msg)
    allowed = {f.name for f in dataclasses.fields(cls)} - set(nested)  # type: ignore[arg-type]
    unknown = sorted(set(data) - allowed)
    if unknown:
        msg = f"Unknown key(s) in configuration section '{section}': {', '.join(unknown)}."
        raise ValidationError(msg)
    try:
        return cls(**data, **nested)
    except TypeError as e:
        msg = f"Invalid configuration section '{section}': {e}"
        raise ValidationError(msg) from e


def to_mapping(instance: Any) -> dict[str, Any]:  # noqa: ANN401
    """Convert a parameter record into a JSON-compatible dictionary.

    Enumerations are stored by value, tuples as lists and nested records recursively.

    Args:
        instance (Any): The dataclass instance to convert.

    Returns:
        dict[str, Any]: The JSON-compatible representation.
    """
    return {f.name: _plain(getattr(instance, f.name)) for f in dataclasses.fields(instance)}


def _plain(value: Any) -> Any:  # noqa: ANN401
    if isinstance(value, enum.Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return to_mapping(value)
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def parse_enum(enum_type: type[E], value: E | str, name: str) -> E:
    """Parse an enumeration member from its value, case-insensitively.

    Args:
        enum_type (type[E]): The enumeration type.
        value (E | str): The member or its string value.
        name (str): The parameter name, used in error messages.

    Returns:
        E: The parsed member.

    Raises:
        ValidationError: If the value does not name a member.
    """
    if isinstance(value, enum_type):
        return value
    try:
        return enum_type(str(value).lower())
    except ValueError:
        choices = ", ".join(str(m.value) for m in enum_type)
        msg = f"Invalid {name} '{value}'. Expected one of: {choices}."
        raise ValidationError(msg) from None
