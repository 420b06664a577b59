"""SVG picture of a fan: rays as spokes of the unit circle, cones labelled.

Display only; this is the single place where floats appear.
"""
import math

SIZE = 512


def fan_svg(fan, records):
    c = SIZE / 2
    rad = SIZE * 0.4
    dirs = []
    for x, y in fan.rays:
        n = math.hypot(x, y)
        dirs.append((x / n, y / n))
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
             f'viewBox="0 0 {SIZE} {SIZE}">',
             f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
             f'<circle cx="{c}" cy="{c}" r="{rad:.2f}" fill="none" stroke="#ccc"/>']
    m = len(dirs)
    for i in range(m):
        (x0, y0), (x1, y1) = dirs[i], dirs[(i + 1) % m]
        rec = records[i]
        colour = "#e8f0ff" if rec["smooth"] else ("#ffe8cc" if rec["type"] == "T" else "#ffd0d0")
        parts.append(
            f'<path d="M {c:.2f} {c:.2f} L {c + rad * x0:.2f} {c - rad * y0:.2f} '
            f'A {rad:.2f} {rad:.2f} 0 0 0 {c + rad * x1:.2f} {c - rad * y1:.2f} Z" '
            f'fill="{colour}" stroke="none"/>')
        a0, a1 = math.atan2(y0, x0), math.atan2(y1, x1)
        if a1 <= a0:
            a1 += 2 * math.pi
        mid = (a0 + a1) / 2
        lx, ly = c + 0.6 * rad * math.cos(mid), c - 0.6 * rad * math.sin(mid)
        label = "smooth" if rec["smooth"] else f'1/{rec["volume"]}(1,{rec["k"]}) {rec["type"]}'
        parts.append(f'<text x="{lx:.2f}" y="{ly:.2f}" font-size="12" '
                     f'text-anchor="middle">{label}</text>')
    for (x, y), r, mu in zip(dirs, fan.rays, fan.multiplicities):
        parts.append(f'<line x1="{c}" y1="{c}" x2="{c + rad * x:.2f}" y2="{c - rad * y:.2f}" '
                     f'stroke="black" stroke-width="{1 + mu}"/>')
        tag = f"({r[0]},{r[1]})" + (f" x{mu}" if mu > 1 else "")
        parts.append(f'<text x="{c + 1.1 * rad * x:.2f}" y="{c - 1.1 * rad * y:.2f}" '
                     f'font-size="12" text-anchor="middle">{tag}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
