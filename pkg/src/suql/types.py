"""Semantic types, enum domains and value coercion rules shared by every layer."""

from __future__ import annotations

import datetime as dt
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class TypeKind(Enum):
    INT = "INT"
    FLOAT = "FLOAT"
    NUMERIC = "NUMERIC"
    BOOLEAN = "BOOLEAN"
    TEXT = "TEXT"
    DATE = "DATE"
    TIME = "TIME"
    INTERVAL = "INTERVAL"
    FREE_TEXT = "FREE_TEXT"
    ARRAY = "ARRAY"
    ENUM = "ENUM"


class TypeError_(Exception):
    """Raised for type-system violations (bad declarations, illegal casts)."""


class CastError(TypeError_):
    """A value could not be coerced to the requested type."""


@dataclass(frozen=True)
class EnumDomain:
    """Ordered set of permitted values for an enumerated column.

    Order is stable because downstream classifier prompts reference values
    by index.
    """

    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        if not self.values:
            raise TypeError_(f"enum domain {self.name!r} has no values")
        folded = [v.casefold() for v in self.values]
        if len(set(folded)) != len(folded):
            raise TypeError_(f"enum domain {self.name!r} has duplicate values")
        if any(not v for v in self.values):
            raise TypeError_(f"enum domain {self.name!r} has an empty value")

    def contains(self, value: str) -> bool:
        return value.casefold() in (v.casefold() for v in self.values)

    def canonical(self, value: str) -> Optional[str]:
        for v in self.values:
            if v.casefold() == value.casefold():
                return v
        return None


@dataclass(frozen=True)
class SemanticType:
    kind: TypeKind
    precision: Optional[int] = None
    scale: Optional[int] = None
    element: Optional["SemanticType"] = None
    enum: Optional[EnumDomain] = None

    def __post_init__(self):
        if self.kind is TypeKind.ARRAY:
            if self.element is None:
                raise TypeError_("ARRAY type needs an element type")
            if self.element.kind is TypeKind.ARRAY:
                raise TypeError_("nested ARRAY types are not supported")
        if self.kind is TypeKind.ENUM and self.enum is None:
            raise TypeError_("ENUM type needs a domain")

    @property
    def is_free_text(self) -> bool:
        return self.kind is TypeKind.FREE_TEXT or (
            self.kind is TypeKind.ARRAY
            and self.element is not None
            and self.element.kind is TypeKind.FREE_TEXT
        )

    @property
    def is_textual(self) -> bool:
        return self.kind in (TypeKind.TEXT, TypeKind.FREE_TEXT, TypeKind.ENUM)

    @property
    def is_numeric(self) -> bool:
        return self.kind in (TypeKind.INT, TypeKind.FLOAT, TypeKind.NUMERIC)

    def render(self) -> str:
        if self.kind is TypeKind.NUMERIC and self.precision is not None:
            return f"NUMERIC({self.precision},{self.scale})"
        if self.kind is TypeKind.ARRAY:
            return f"{self.element.render()}[]"
        if self.kind is TypeKind.ENUM:
            vals = ", ".join("'%s'" % v.replace("'", "''") for v in self.enum.values)
            return f"ENUM ({vals})"
        return self.kind.value

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind.value}
        if self.precision is not None:
            out["precision"] = self.precision
        if self.scale is not None:
            out["scale"] = self.scale
        if self.element is not None:
            out["element"] = self.element.to_json()
        if self.enum is not None:
            out["enum"] = {"name": self.enum.name, "values": list(self.enum.values)}
        return out

    @staticmethod
    def from_json(data: dict) -> "SemanticType":
        enum = None
        if "enum" in data:
            enum = EnumDomain(data["enum"]["name"], tuple(data["enum"]["values"]))
        element = SemanticType.from_json(data["element"]) if "element" in data else None
        return SemanticType(
            TypeKind(data["kind"]),
            precision=data.get("precision"),
            scale=data.get("scale"),
            element=element,
            enum=enum,
        )


INT = SemanticType(TypeKind.INT)
FLOAT = SemanticType(TypeKind.FLOAT)
BOOLEAN = SemanticType(TypeKind.BOOLEAN)
TEXT = SemanticType(TypeKind.TEXT)
DATE = SemanticType(TypeKind.DATE)
TIME = SemanticType(TypeKind.TIME)
INTERVAL = SemanticType(TypeKind.INTERVAL)
FREE_TEXT = SemanticType(TypeKind.FREE_TEXT)


def array_of(element: SemanticType) -> SemanticType:
    return SemanticType(TypeKind.ARRAY, element=element)


_MONTHS = {
    m.casefold(): i + 1
    for i, m in enumerate(
        [
            "January", "February", "March", "April", "May", "June",
            "July", "August", "September", "October", "November", "December",
        ]
    )
}

_DATE_DMY = re.compile(r"^\s*(\d{1,2})\s+([A-Za-z]+)\s+(\d{4})\s*$")
_DATE_MDY = re.compile(r"^\s*([A-Za-z]+)\s+(\d{1,2})\s*,\s*(\d{4})\s*$")
_DATE_ISO = re.compile(r"^\s*(\d{4})-(\d{2})-(\d{2})\s*$")
_TIME_RE = re.compile(r"^\s*(\d{1,3}):(\d{2})(?::(\d{2}))?\s*$")


def parse_date(text: str) -> dt.date:
    """Parse ISO-8601, "5 September 1892" or "September 5, 1892" dates."""
    m = _DATE_ISO.match(text)
    if m:
        y, mo, d = (int(g) for g in m.groups())
    else:
        m = _DATE_DMY.match(text)
        if m:
            d, mo_name, y = m.group(1), m.group(2), m.group(3)
            d, y = int(d), int(y)
            mo = _MONTHS.get(mo_name.casefold())
        else:
            m = _DATE_MDY.match(text)
            if not m:
                raise CastError(f"cannot parse date from {text!r}")
            mo_name, d, y = m.group(1), int(m.group(2)), int(m.group(3))
            d, y = int(d), int(y)
            mo = _MONTHS.get(mo_name.casefold())
        if mo is None:
            raise CastError(f"unknown month in date {text!r}")
    try:
        return dt.date(y, mo, d)
    except ValueError as exc:
        raise CastError(f"invalid calendar date {text!r}: {exc}") from None


def parse_time(text: str) -> dt.time:
    m = _TIME_RE.match(text)
    if not m:
        raise CastError(f"cannot parse time from {text!r}")
    h, mi = int(m.group(1)), int(m.group(2))
    s = int(m.group(3) or 0)
    try:
        return dt.time(h, mi, s)
    except ValueError as exc:
        raise CastError(f"invalid time {text!r}: {exc}") from None


def parse_interval(text: str) -> dt.timedelta:
    m = _TIME_RE.match(text)
    if not m:
        raise CastError(f"cannot parse interval from {text!r}")
    h, mi = int(m.group(1)), int(m.group(2))
    s = int(m.group(3) or 0)
    if mi >= 60 or s >= 60:
        raise CastError(f"invalid interval {text!r}")
    return dt.timedelta(hours=h, minutes=mi, seconds=s)


def _numeric_fits(value: float, precision: int, scale: int) -> bool:
    limit = 10 ** (precision - scale)
    return abs(value) < limit


def cast_value(value: Any, target: SemanticType) -> Any:
    """SQL-style cast of a native Python value to `target`.

    None casts to None. Text values are parsed; numeric widening is allowed,
    narrowing raises on overflow.
    """
    if value is None:
        return None
    kind = target.kind

    if kind is TypeKind.ARRAY:
        if not isinstance(value, list):
            raise CastError(f"cannot cast {value!r} to array")
        return [cast_value(v, target.element) for v in value]

    if isinstance(value, list):
        raise CastError(f"cannot cast array value to {target.render()}")

    if kind is TypeKind.INT:
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, float):
            if value != int(value):
                raise CastError(f"narrowing {value!r} to INT loses precision")
            return int(value)
        if isinstance(value, str):
            raw = value.strip().replace(",", "")
            try:
                return int(raw)
            except ValueError:
                raise CastError(f"cannot parse integer from {value!r}") from None
        raise CastError(f"cannot cast {value!r} to INT")

    if kind in (TypeKind.FLOAT, TypeKind.NUMERIC):
        if isinstance(value, bool):
            out = float(value)
        elif isinstance(value, (int, float)):
            out = float(value)
        elif isinstance(value, str):
            raw = value.strip().replace(",", "")
            try:
                out = float(raw)
            except ValueError:
                raise CastError(f"cannot parse number from {value!r}") from None
        else:
            raise CastError(f"cannot cast {value!r} to {target.render()}")
        if not math.isfinite(out):
            raise CastError(f"non-finite numeric value {value!r}")
        if kind is TypeKind.NUMERIC and target.precision is not None:
            if not _numeric_fits(out, target.precision, target.scale or 0):
                raise CastError(
                    f"{value!r} overflows NUMERIC({target.precision},{target.scale})"
                )
            out = round(out, target.scale or 0)
        return out

    if kind is TypeKind.BOOLEAN:
        if isinstance(value, bool):
            return value
        if isinstance(value, (int, float)):
            return bool(value)
        if isinstance(value, str):
            low = value.strip().casefold()
            if low in ("true", "t", "yes", "1"):
                return True
            if low in ("false", "f", "no", "0"):
                return False
            raise CastError(f"cannot parse boolean from {value!r}")
        raise CastError(f"cannot cast {value!r} to BOOLEAN")

    if kind in (TypeKind.TEXT, TypeKind.FREE_TEXT):
        return render_value(value)

    if kind is TypeKind.ENUM:
        text = render_value(value)
        canon = target.enum.canonical(text)
        if canon is None:
            raise CastError(
                f"{text!r} is not a permitted value of enum {target.enum.name!r}"
            )
        return canon

    if kind is TypeKind.DATE:
        if isinstance(value, dt.date):
            return value
        if isinstance(value, str):
            return parse_date(value)
        raise CastError(f"cannot cast {value!r} to DATE")

    if kind is TypeKind.TIME:
        if isinstance(value, dt.time):
            return value
        if isinstance(value, str):
            return parse_time(value)
        raise CastError(f"cannot cast {value!r} to TIME")

    if kind is TypeKind.INTERVAL:
        if isinstance(value, dt.timedelta):
            return value
        if isinstance(value, dt.time):
            return dt.timedelta(
                hours=value.hour, minutes=value.minute, seconds=value.second
            )
        if isinstance(value, str):
            return parse_interval(value)
        raise CastError(f"cannot cast {value!r} to INTERVAL")

    raise CastError(f"unsupported cast target {target.render()}")


def render_value(value: Any) -> str:
    """Render a native value back to its text form (ISO for temporal kinds)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dt.timedelta):
        total = int(value.total_seconds())
        sign = "-" if total < 0 else ""
        total = abs(total)
        return f"{sign}{total // 3600}:{total % 3600 // 60:02d}:{total % 60:02d}"
    if isinstance(value, dt.date) and not isinstance(value, dt.datetime):
        return value.isoformat()
    if isinstance(value, dt.time):
        return value.isoformat()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return "; ".join(render_value(v) for v in value)
    return str(value)


def value_to_json(value: Any) -> Any:
    """JSON encoding used by the persistence layer and wire formats."""
    if isinstance(value, dt.timedelta) or isinstance(value, dt.time):
        return render_value(value)
    if isinstance(value, dt.date):
        return value.isoformat()
    if isinstance(value, list):
        return [value_to_json(v) for v in value]
    return value
