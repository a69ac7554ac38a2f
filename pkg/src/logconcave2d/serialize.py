"""Polygon JSON and rational-string helpers shared by the CLI."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import GeometryError
from .geometry import ConvexPolygon, Point


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise GeometryError(f"expected a rational string, got {s!r}")


def scalar_json(x: Fraction) -> dict:
    """Exact and decimal forms of a rational."""
    return {"exact": rational_str(x), "decimal": float(x)}


def polygon_to_json(P: ConvexPolygon) -> dict:
    return {
        "vertices": [[rational_str(v.x), rational_str(v.y)] for v in P.vertices],
        "symmetry": P.symmetry,
    }


def polygon_from_json(obj) -> ConvexPolygon:
    try:
        verts = [Point(parse_rational(x), parse_rational(y)) for x, y in obj["vertices"]]
        symmetry = obj.get("symmetry", "none")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"malformed polygon JSON: {exc}") from exc
    return ConvexPolygon(tuple(verts), symmetry)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
