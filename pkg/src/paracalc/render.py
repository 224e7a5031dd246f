"""Static SVG rendering of a domain membership grid."""

from .regcalc import FLAG_A, FLAG_DU, FLAG_LU, FLAG_N, FLAG_NAMES

PLOT_X, PLOT_Y, PLOT_W, PLOT_H = 70, 20, 400, 400
WIDTH, HEIGHT = 640, 480

LAYER_STYLE = (
    (FLAG_A, "#4c72b0", "D(A): s > 1/p"),
    (FLAG_LU, "#55a868", "D(L_u)"),
    (FLAG_DU, "#8172b2", "D_u = D(A) and D(L_u)"),
    (FLAG_N, "#c44e52", "D(N)"),
)


def _f(x):
    return f"{x:.3f}"


def _runs(mask_row):
    start = None
    for k, v in enumerate(mask_row):
        if v and start is None:
            start = k
        elif not v and start is not None:
            yield start, k
            start = None
    if start is not None:
        yield start, len(mask_row)


def region_svg(grid):
    """SVG 1.1 document text: one layer per flag, axes and legend."""
    rs, rp = grid.flags.shape
    pw = PLOT_W / rp
    ph = PLOT_H / rs
    s_lo, s_hi, ip_lo, ip_hi = grid.window

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    for flag, color, _ in LAYER_STYLE:
        out.append(f'<g id="{FLAG_NAMES[flag]}" fill="{color}" fill-opacity="0.35" stroke="none">')
        mask = grid.layer(flag)
        for i in range(rs):
            y = PLOT_Y + (rs - 1 - i) * ph
            for a, b in _runs(mask[i]):
                out.append(f'<rect x="{_f(PLOT_X + a * pw)}" y="{_f(y)}" '
                           f'width="{_f((b - a) * pw)}" height="{_f(ph)}"/>')
        out.append('</g>')

    out.append('<g id="axes" stroke="#000000" stroke-width="1" fill="none">')
    out.append(f'<rect x="{PLOT_X}" y="{PLOT_Y}" width="{PLOT_W}" height="{PLOT_H}"/>')
    out.append('</g>')
    out.append('<g id="ticks" font-family="sans-serif" font-size="11" fill="#000000">')
    for k in range(5):
        frac = k / 4
        x = PLOT_X + frac * PLOT_W
        y = PLOT_Y + PLOT_H - frac * PLOT_H
        out.append(f'<text x="{_f(x)}" y="{PLOT_Y + PLOT_H + 15}" text-anchor="middle">'
                   f'{ip_lo + frac * (ip_hi - ip_lo):.2f}</text>')
        out.append(f'<text x="{PLOT_X - 6}" y="{_f(y + 4)}" text-anchor="end">'
                   f'{s_lo + frac * (s_hi - s_lo):.2f}</text>')
    out.append(f'<text x="{PLOT_X + PLOT_W / 2:.0f}" y="{PLOT_Y + PLOT_H + 35}" '
               f'text-anchor="middle">1/p</text>')
    out.append(f'<text x="20" y="{PLOT_Y + PLOT_H / 2:.0f}" text-anchor="middle">s</text>')
    out.append('</g>')

    ap = grid.apriori
    out.append('<g id="legend" font-family="sans-serif" font-size="11">')
    lx, ly = PLOT_X + PLOT_W + 15, PLOT_Y + 10
    for k, (flag, color, label) in enumerate(LAYER_STYLE):
        y = ly + 20 * k
        out.append(f'<rect x="{lx}" y="{y}" width="12" height="12" fill="{color}" fill-opacity="0.6"/>')
        out.append(f'<text x="{lx + 18}" y="{y + 10}" fill="#000000">{label}</text>')
    out.append(f'<text x="{lx}" y="{ly + 95}" fill="#000000">s0={ap.s:.4g}, p0={ap.p:.4g}, n={ap.n}</text>')
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
