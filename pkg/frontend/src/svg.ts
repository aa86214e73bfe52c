/** Deterministic SVG line plots: fixed palette, fixed tick layout, fixed
 * number formatting, so identical inputs give byte-identical files. */

export interface Curve {
    label: string;
    x: number[];
    y: number[];
    dashed?: boolean;
}

const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];
const W = 640;
const H = 440;
const ML = 64;
const MR = 16;
const MT = 34;
const MB = 46;

function fmtTick(v: number): string {
    if (v === 0) return '0';
    const a = Math.abs(v);
    if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
    return String(parseFloat(v.toPrecision(4)));
}

function coord(v: number): string {
    return v.toFixed(2);
}

export function linePlot(title: string, xlabel: string, ylabel: string,
                         curves: Curve[]): string {
    if (curves.length === 0) throw new Error('no curves to plot');
    const xs = curves.flatMap(c => c.x);
    const ys = curves.flatMap(c => c.y).filter(v => Number.isFinite(v));
    let x0 = Math.min(...xs), x1 = Math.max(...xs);
    let y0 = Math.min(...ys), y1 = Math.max(...ys);
    if (x1 === x0) { x1 = x0 + 1; }
    if (y1 === y0) { y0 -= 0.5; y1 += 0.5; }
    const pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const sx = (v: number) => ML + (v - x0) / (x1 - x0) * (W - ML - MR);
    const sy = (v: number) => H - MB - (v - y0) / (y1 - y0) * (H - MT - MB);

    const parts: string[] = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`);
    parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
    parts.push(`<text x="${W / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="15">${title}</text>`);
    // axes
    parts.push(`<line x1="${ML}" y1="${H - MB}" x2="${W - MR}" y2="${H - MB}" stroke="black" stroke-width="1"/>`);
    parts.push(`<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${H - MB}" stroke="black" stroke-width="1"/>`);
    for (let i = 0; i <= 5; i++) {
        const xv = x0 + (x1 - x0) * i / 5;
        const yv = y0 + (y1 - y0) * i / 5;
        const px = sx(xv);
        const py = sy(yv);
        parts.push(`<line x1="${coord(px)}" y1="${H - MB}" x2="${coord(px)}" y2="${H - MB + 4}" stroke="black"/>`);
        parts.push(`<text x="${coord(px)}" y="${H - MB + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmtTick(xv)}</text>`);
        parts.push(`<line x1="${ML - 4}" y1="${coord(py)}" x2="${ML}" y2="${coord(py)}" stroke="black"/>`);
        parts.push(`<text x="${ML - 7}" y="${coord(py + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${fmtTick(yv)}</text>`);
    }
    parts.push(`<text x="${(ML + W - MR) / 2}" y="${H - 10}" text-anchor="middle" font-family="sans-serif" font-size="13">${xlabel}</text>`);
    parts.push(`<text x="16" y="${(MT + H - MB) / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 ${(MT + H - MB) / 2})">${ylabel}</text>`);
    // curves
    curves.forEach((c, i) => {
        const color = c.dashed ? '#000000' : PALETTE[i % PALETTE.length];
        const dash = c.dashed ? ' stroke-dasharray="6 4"' : '';
        const pts = c.x.map((xv, j) => `${coord(sx(xv))},${coord(sy(Math.min(Math.max(c.y[j], y0), y1)))}`).join(' ');
        parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"${dash}/>`);
    });
    // legend
    curves.forEach((c, i) => {
        const color = c.dashed ? '#000000' : PALETTE[i % PALETTE.length];
        const y = MT + 16 + 18 * i;
        const dash = c.dashed ? ' stroke-dasharray="6 4"' : '';
        parts.push(`<line x1="${W - MR - 150}" y1="${y - 4}" x2="${W - MR - 120}" y2="${y - 4}" stroke="${color}" stroke-width="1.5"${dash}/>`);
        parts.push(`<text x="${W - MR - 114}" y="${y}" font-family="sans-serif" font-size="12">${c.label}</text>`);
    });
    parts.push('</svg>');
    return parts.join('\n') + '\n';
}
