"""Render schedule charts as standalone SVG or as tagged JSON segments."""

from __future__ import annotations

import json

from .decoder import Schedule, gantt_lanes, gantt_segments

SEGMENT_COLORS = {
    "processing": "#c0c0c0",
    "setup": "#d62728",      # red: machine changeover
    "blocking": "#1f77b4",   # blue: finished job stuck on its machine
    "buffer": "#2ca02c",     # green: residence in a buffer
}

_LANE_H = 22
_LEFT = 64
_TOP = 28
_PX_PER_UNIT = 4.0


def chart_json(schedule: Schedule) -> str:
    lanes = gantt_lanes(schedule.instance)
    segments = [
        {"lane": s.lane, "kind": s.kind, "start": s.start, "end": s.end, "job": s.job}
        for s in gantt_segments(schedule)
    ]
    doc = {"lanes": lanes, "segments": segments}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def chart_svg(schedule: Schedule, title: str = "") -> str:
    lanes = gantt_lanes(schedule.instance)
    segments = gantt_segments(schedule)
    span = max((s.end for s in segments), default=1)
    scale = _PX_PER_UNIT
    width = _LEFT + int(span * scale) + 24
    height = _TOP + len(lanes) * _LANE_H + 30
    row = {lane: k for k, lane in enumerate(lanes)}

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="10">',
        f'<text x="{_LEFT}" y="14" font-size="12">{title or schedule.instance.name}</text>',
    ]
    for lane in lanes:
        y = _TOP + row[lane] * _LANE_H
        out.append(f'<text x="4" y="{y + 14}">{lane}</text>')
        out.append(
            f'<line x1="{_LEFT}" y1="{y + _LANE_H - 2}" x2="{width - 12}" '
            f'y2="{y + _LANE_H - 2}" stroke="#dddddd"/>'
        )
    for s in segments:
        x = _LEFT + s.start * scale
        w = max((s.end - s.start) * scale, 1.0)
        y = _TOP + row[s.lane] * _LANE_H + 2
        color = SEGMENT_COLORS[s.kind]
        out.append(
            f'<rect x="{x:.1f}" y="{y}" width="{w:.1f}" height="{_LANE_H - 6}" '
            f'fill="{color}" stroke="#404040" stroke-width="0.4">'
            f'<title>J{s.job} {s.kind} [{s.start}, {s.end}]</title></rect>'
        )
        if s.kind == "processing" and (s.end - s.start) * scale >= 14:
            out.append(
                f'<text x="{x + 2:.1f}" y="{y + 11}" font-size="9">J{s.job}</text>'
            )
    axis_y = _TOP + len(lanes) * _LANE_H + 12
    tick = max(1, round(span / 10))
    t = 0
    while t <= span:
        x = _LEFT + t * scale
        out.append(f'<line x1="{x:.1f}" y1="{axis_y - 8}" x2="{x:.1f}" y2="{axis_y - 4}" stroke="#404040"/>')
        out.append(f'<text x="{x - 4:.1f}" y="{axis_y + 6}">{t}</text>')
        t += tick
    out.append("</svg>")
    return "\n".join(out) + "\n"
