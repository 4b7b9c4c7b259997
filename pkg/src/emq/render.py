"""Text, CSV, JSON and SVG renderings of coefficient tables."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter

from .coefficients import Window

__all__ = ["group_label", "render_grid", "render_csv", "render_json", "render_svg"]

ACTOR_KEYS = {"a": "a", "u": "u", "omega": "ω", "ω": "ω"}


def group_label(factors) -> str:
    """Compact label such as ``Z``, ``Z/2``, ``Z^2`` or ``Z+Z/2``."""
    if not factors:
        return "0"
    counts = Counter(factors)
    parts = []
    for d in sorted(counts, key=lambda d: (d == 0, d)):
        base = "Z" if d == 0 else f"Z/{d}"
        parts.append(base if counts[d] == 1 else f"{base}^{counts[d]}")
    return "+".join(parts)


def _cells(tab: dict):
    return sorted(tab["pieces"].items(), key=lambda kv: (kv[0][0], kv[0][1]))


def _action_rows(tab: dict):
    for actor in sorted(tab["actions"]):
        for d, amap in sorted(tab["actions"][actor].items()):
            yield actor, d, amap


def render_grid(tab: dict, window: Window) -> str:
    labels = {d: group_label(p.group.invariant_factors) for d, p in tab["pieces"].items()}
    width = max([len(s) for s in labels.values()] + [len(str(window.x0)), len(str(window.x1))])
    ylab = max(len(str(window.y0)), len(str(window.y1)))
    lines = []
    for y in range(window.y1, window.y0 - 1, -1):
        row = " ".join(labels[(x, y)].rjust(width) for x in range(window.x0, window.x1 + 1))
        lines.append(f"{str(y).rjust(ylab)} | {row}")
    lines.append(" " * ylab + "-+-" + "-" * ((width + 1) * (window.x1 - window.x0 + 1) - 1))
    header = " ".join(str(x).rjust(width) for x in range(window.x0, window.x1 + 1))
    lines.append(" " * ylab + "   " + header)
    for actor, d, amap in _action_rows(tab):
        if amap.source.is_zero or amap.target.is_zero:
            continue
        t = amap.target.degree
        lines.append(f"{ACTOR_KEYS[actor]} ({d[0]},{d[1]}) -> ({t[0]},{t[1]}): {amap.classification}")
    return "\n".join(lines) + "\n"


def render_csv(tab: dict) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    actors = sorted(tab["actions"])
    w.writerow(["x", "y", "invariant_factors", "case_tag"] + [f"{ACTOR_KEYS[a]}_map" for a in actors])
    for d, piece in _cells(tab):
        row = [d[0], d[1], ";".join(str(f) for f in piece.group.invariant_factors), piece.case_tag]
        for a in actors:
            amap = tab["actions"][a].get(d)
            row.append("" if amap is None else amap.classification)
        w.writerow(row)
    return out.getvalue()


def render_json(tab: dict, window: Window, name: str) -> str:
    cells = [
        {
            "x": d[0],
            "y": d[1],
            "invariant_factors": list(piece.group.invariant_factors),
            "group": group_label(piece.group.invariant_factors),
            "case_tag": piece.case_tag,
        }
        for d, piece in _cells(tab)
    ]
    actions = [
        {
            "actor": ACTOR_KEYS[actor],
            "source": list(d),
            "target": list(amap.target.degree),
            "classification": amap.classification,
            "rule": amap.rule,
            "matrix": [[int(v) for v in row] for row in amap.map.matrix],
        }
        for actor, d, amap in _action_rows(tab)
    ]
    doc = {
        "functor": name,
        "window": {"x": [window.x0, window.x1], "y": [window.y0, window.y1]},
        "cells": cells,
        "actions": actions,
    }
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def render_svg(tab: dict, window: Window, name: str, cell: int = 24) -> str:
    """Figure in the usual style: dot Z, circle Z/2, diamond Z^2, square Z/4.

    Red segments are nonzero a-maps and blue dashed segments nonzero u-maps.
    Other groups are printed as text.
    """
    margin = 40
    nx, ny = window.x1 - window.x0 + 1, window.y1 - window.y0 + 1
    width = 2 * margin + (nx - 1) * cell
    height = 2 * margin + (ny - 1) * cell + 60

    def pos(x, y):
        return margin + (x - window.x0) * cell, margin + (window.y1 - y) * cell

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="9">',
        f"<title>{name}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if window.x0 <= 0 <= window.x1:
        (ax, ytop), (_, ybot) = pos(0, window.y1), pos(0, window.y0)
        out.append(f'<line x1="{ax}" y1="{ytop}" x2="{ax}" y2="{ybot}" stroke="#bbb"/>')
    if window.y0 <= 0 <= window.y1:
        (xl, ay), (xr, _) = pos(window.x0, 0), pos(window.x1, 0)
        out.append(f'<line x1="{xl}" y1="{ay}" x2="{xr}" y2="{ay}" stroke="#bbb"/>')
    for x in range(window.x0, window.x1 + 1):
        px, _ = pos(x, window.y0)
        out.append(f'<text x="{px}" y="{pos(x, window.y0)[1] + 16}" text-anchor="middle">{x}</text>')
    for y in range(window.y0, window.y1 + 1):
        px, py = pos(window.x0, y)
        out.append(f'<text x="{px - 14}" y="{py + 3}" text-anchor="end">{y}</text>')

    styles = {"a": 'stroke="red" stroke-width="1.5"', "u": 'stroke="blue" stroke-width="1.2" stroke-dasharray="4,3"'}
    for actor, d, amap in _action_rows(tab):
        key = ACTOR_KEYS[actor]
        if key not in styles or amap.map.is_zero():
            continue
        t = amap.target.degree
        if t not in window:
            continue
        (x1, y1), (x2, y2) = pos(*d), pos(*t)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {styles[key]}/>')

    for d, piece in _cells(tab):
        f = piece.group.invariant_factors
        if not f:
            continue
        px, py = pos(*d)
        if f == (0,):
            out.append(f'<circle cx="{px}" cy="{py}" r="4" fill="black"/>')
        elif f == (2,):
            out.append(f'<circle cx="{px}" cy="{py}" r="4" fill="white" stroke="black"/>')
        elif f == (0, 0):
            out.append(f'<polygon points="{px},{py - 6} {px + 6},{py} {px},{py + 6} {px - 6},{py}" fill="white" stroke="black"/>')
        elif f == (4,):
            out.append(f'<rect x="{px - 4}" y="{py - 4}" width="8" height="8" fill="white" stroke="black"/>')
        else:
            out.append(f'<text x="{px}" y="{py + 3}" text-anchor="middle">{group_label(f)}</text>')

    ly = height - 30
    legend = [
        ('<circle cx="{x}" cy="{y}" r="4" fill="black"/>', "Z"),
        ('<circle cx="{x}" cy="{y}" r="4" fill="white" stroke="black"/>', "Z/2"),
        ('<polygon points="{x},{ym} {xp},{y} {x},{yp} {xm},{y}" fill="white" stroke="black"/>', "Z^2"),
        ('<rect x="{xm4}" y="{ym4}" width="8" height="8" fill="white" stroke="black"/>', "Z/4"),
    ]
    for k, (shape, label) in enumerate(legend):
        x = margin + k * 70
        out.append(shape.format(x=x, y=ly, ym=ly - 6, yp=ly + 6, xp=x + 6, xm=x - 6, xm4=x - 4, ym4=ly - 4))
        out.append(f'<text x="{x + 10}" y="{ly + 3}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
