"""Connected persistence diagrams on commutative ladders.

Spans are stored with inclusive deaths. Plots and exported coordinates use
``d + 1`` so that a bar ``[b, d]`` is drawn from ``b`` to ``d + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from . import field_linalg as fl
from .grid_poset import StaircaseInterval, lower, two_row, upper
from .interval_approx import SignedMultiplicityMap, interval_approximation
from .quiver_rep import Representation

SCHEMA = "cladder.cpd/1"

Span = tuple[int, int]
TwoRow = tuple[int, int, int, int]  # (b2, d2, b1, d1)


@dataclass
class ConnectedPD:
    n: int
    prime: int = fl.DEFAULT_PRIME
    lower: dict[Span, int] = field(default_factory=dict)
    upper: dict[Span, int] = field(default_factory=dict)
    connecting: dict[TwoRow, int] = field(default_factory=dict)
    axis_labels: list[float] | None = None

    def is_empty(self) -> bool:
        return not (self.lower or self.upper or self.connecting)

    def values(self):
        yield from self.lower.values()
        yield from self.upper.values()
        yield from self.connecting.values()

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA,
            "n": self.n,
            "field": self.prime,
            "lower": [{"b": b, "d": d, "m": m} for (b, d), m in sorted(self.lower.items())],
            "upper": [{"b": b, "d": d, "m": m} for (b, d), m in sorted(self.upper.items())],
            "connecting": [
                {"b2": b2, "d2": d2, "b1": b1, "d1": d1, "m": m}
                for (b2, d2, b1, d1), m in sorted(self.connecting.items())
            ],
        }
        if self.axis_labels is not None:
            out["axis_labels"] = list(self.axis_labels)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ConnectedPD":
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise ValueError(f"unsupported cPD schema {obj.get('schema')!r}")
        return cls(
            n=obj["n"],
            prime=obj.get("field", fl.DEFAULT_PRIME),
            lower={(r["b"], r["d"]): r["m"] for r in obj["lower"]},
            upper={(r["b"], r["d"]): r["m"] for r in obj["upper"]},
            connecting={(r["b2"], r["d2"], r["b1"], r["d1"]): r["m"] for r in obj["connecting"]},
            axis_labels=obj.get("axis_labels"),
        )


def tilde_delta(delta: Mapping[StaircaseInterval, int]) -> tuple[dict, dict, dict]:
    """Fold two-row values into the row spans they cover."""
    low: dict[Span, int] = {}
    up: dict[Span, int] = {}
    con: dict[TwoRow, int] = {}
    for I, v in delta.items():
        if not v:
            continue
        s, t = I.rows
        if s == t == 1:
            low[I.spans[0]] = low.get(I.spans[0], 0) + v
        elif s == t == 2:
            up[I.spans[0]] = up.get(I.spans[0], 0) + v
        elif (s, t) == (1, 2):
            (b1, d1), (b2, d2) = I.spans
            con[(b2, d2, b1, d1)] = v
            low[(b1, d1)] = low.get((b1, d1), 0) + v
            up[(b2, d2)] = up.get((b2, d2), 0) + v
        else:
            raise ValueError(f"{I} is not a ladder interval")
    strip = lambda d: {k: v for k, v in d.items() if v}  # noqa: E731
    return strip(low), strip(up), strip(con)


def delta_from_tilde(low: Mapping, up: Mapping, con: Mapping) -> SignedMultiplicityMap:
    """Inverse of ``tilde_delta``."""
    out = SignedMultiplicityMap()
    low, up = dict(low), dict(up)
    for (b2, d2, b1, d1), v in con.items():
        out[two_row(b2, d2, b1, d1)] = v
        low[(b1, d1)] = low.get((b1, d1), 0) - v
        up[(b2, d2)] = up.get((b2, d2), 0) - v
    for (b, d), v in low.items():
        if v:
            out[lower(b, d)] = v
    for (b, d), v in up.items():
        if v:
            out[upper(b, d)] = v
    return out


def cpd_from_delta(delta: Mapping[StaircaseInterval, int], n: int, prime: int = fl.DEFAULT_PRIME,
                   axis_labels: Sequence[float] | None = None) -> ConnectedPD:
    low, up, con = tilde_delta(delta)
    return ConnectedPD(n, prime, low, up, con, list(axis_labels) if axis_labels is not None else None)


def connected_pd(M: Representation, assignment="ss", axis_labels: Sequence[float] | None = None) -> ConnectedPD:
    if not M.shape.is_ladder:
        raise ValueError("connected persistence diagrams need a ladder module")
    delta = interval_approximation(M, assignment)
    return cpd_from_delta(delta, M.shape.p, M.prime, axis_labels)


def has_negative(cpd: ConnectedPD) -> bool:
    return any(v < 0 for v in cpd.connecting.values())


# ---------------------------------------------------------------- plotting


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def render_cpd(cpd: ConnectedPD, style: str = "triangles", size: int = 420) -> str:
    """SVG drawing of a cPD.

    ``triangles``: lower bars as points (d+1, b) below the diagonal, upper bars as
    points (b, d+1) above it, connecting intervals as segments between them.
    ``layered``: both rows above the diagonal, lower row offset in colour, with
    connecting segments drawn between the two layers.
    """
    if style not in ("triangles", "layered"):
        raise ValueError(f"unknown style {style!r}")
    n = cpd.n
    pad = 40
    span = size - 2 * pad
    lo, hi = 1, n + 1

    def sx(v):
        return pad + (v - lo) / max(hi - lo, 1) * span

    def sy(v):
        return size - pad - (v - lo) / max(hi - lo, 1) * span

    vals = [abs(v) for v in cpd.values()] or [1]
    vmax = max(vals)

    def opacity(m):
        return 0.25 + 0.75 * abs(m) / vmax

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{_fmt(sx(lo))}" y1="{_fmt(sy(lo))}" x2="{_fmt(sx(hi))}" y2="{_fmt(sy(lo))}" stroke="black"/>',
        f'<line x1="{_fmt(sx(lo))}" y1="{_fmt(sy(lo))}" x2="{_fmt(sx(lo))}" y2="{_fmt(sy(hi))}" stroke="black"/>',
        f'<line x1="{_fmt(sx(lo))}" y1="{_fmt(sy(lo))}" x2="{_fmt(sx(hi))}" y2="{_fmt(sy(hi))}" '
        'stroke="gray" stroke-dasharray="2,2"/>',
    ]
    labels = cpd.axis_labels
    for i in range(lo, hi + 1):
        text = _fmt(labels[i - 1]) if labels and i - 1 < len(labels) else str(i)
        parts.append(f'<text x="{_fmt(sx(i))}" y="{_fmt(sy(lo) + 16)}" font-size="10" '
                     f'text-anchor="middle">{escape(text)}</text>')
        parts.append(f'<text x="{_fmt(sx(lo) - 8)}" y="{_fmt(sy(i) + 3)}" font-size="10" '
                     f'text-anchor="end">{escape(text)}</text>')

    def lower_pt(b, d):
        return (d + 1, b) if style == "triangles" else (b, d + 1)

    def upper_pt(b, d):
        return (b, d + 1)

    segs = sorted(cpd.connecting.items(), key=lambda kv: (abs(kv[1]), kv[0]))
    for (b2, d2, b1, d1), m in segs:
        (x1, y1), (x2, y2) = upper_pt(b2, d2), lower_pt(b1, d1)
        dash = ' stroke-dasharray="5,3"' if m < 0 else ""
        parts.append(
            f'<line class="connecting" x1="{_fmt(sx(x1))}" y1="{_fmt(sy(y1))}" x2="{_fmt(sx(x2))}" '
            f'y2="{_fmt(sy(y2))}" stroke="purple" stroke-opacity="{opacity(m):.3f}" stroke-width="2"{dash}/>'
        )
    for (b, d), m in sorted(cpd.lower.items(), key=lambda kv: (abs(kv[1]), kv[0])):
        x, y = lower_pt(b, d)
        parts.append(f'<circle class="lower" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="4" '
                     f'fill="#1f77b4" fill-opacity="{opacity(m):.3f}"/>')
    for (b, d), m in sorted(cpd.upper.items(), key=lambda kv: (abs(kv[1]), kv[0])):
        x, y = upper_pt(b, d)
        parts.append(f'<circle class="upper" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="4" '
                     f'fill="#d62728" fill-opacity="{opacity(m):.3f}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
