import { CflResult, EocStudy } from './summaries';

/** Canonical column order: first-order family, then second-order family. */
export const SCHEME_ORDER = [
    'fe', 'mpe-rhoe', 'mpe', 'mpe-s',
    'heun', 'mpheun-rhoe', 'mpheun', 'mpheun-s',
];

const LABELS: Record<string, string> = {
    'fe': 'FE', 'mpe-rhoe': 'MPE-rhoE', 'mpe': 'MPE', 'mpe-s': 'MPE-s',
    'heun': 'Heun', 'mpheun-rhoe': 'MPHeun-rhoE', 'mpheun': 'MPHeun',
    'mpheun-s': 'MPHeun-s',
};

function fmt(v: number | null | undefined, digits = 3): string {
    return v === null || v === undefined || Number.isNaN(v) ? '-' : v.toFixed(digits);
}

function orderStudies(studies: EocStudy[]): EocStudy[] {
    const byScheme = new Map(studies.map(s => [s.scheme, s]));
    return SCHEME_ORDER.filter(s => byScheme.has(s)).map(s => byScheme.get(s)!);
}

/** Markdown EOC table: one row per cell count, one column per scheme. */
export function eocTableMarkdown(studies: EocStudy[], norm: 'eoc_l1' | 'eoc_l2' = 'eoc_l1'): string {
    if (studies.length === 0) throw new Error('no EOC studies found');
    const ordered = orderStudies(studies);
    const cells = ordered[0].rows.map(r => r.cells);
    for (const s of ordered) {
        const own = s.rows.map(r => r.cells).join(',');
        if (own !== cells.join(',')) {
            throw new Error(`cell lists differ between schemes: ${own} vs ${cells.join(',')}`);
        }
        for (let i = 1; i < s.rows.length; i++) {
            if (s.rows[i].cells !== 2 * s.rows[i - 1].cells) {
                throw new Error(`cells must double: got ${s.rows[i - 1].cells} -> ${s.rows[i].cells}`);
            }
        }
    }
    const header = ['N', ...ordered.map(s => LABELS[s.scheme] ?? s.scheme)];
    const lines = [
        `| ${header.join(' | ')} |`,
        `|${header.map(() => '---').join('|')}|`,
    ];
    cells.forEach((n, i) => {
        const row = [String(n), ...ordered.map(s => fmt(s.rows[i][norm]))];
        lines.push(`| ${row.join(' | ')} |`);
    });
    return lines.join('\n') + '\n';
}

/** CSV flavour of the EOC table (same layout, machine-friendly). */
export function eocTableCsv(studies: EocStudy[], norm: 'eoc_l1' | 'eoc_l2' = 'eoc_l1'): string {
    const ordered = orderStudies(studies);
    if (ordered.length === 0) throw new Error('no EOC studies found');
    const cells = ordered[0].rows.map(r => r.cells);
    const lines = ['N,' + ordered.map(s => LABELS[s.scheme] ?? s.scheme).join(',')];
    cells.forEach((n, i) => {
        lines.push([String(n), ...ordered.map(s => fmt(s.rows[i][norm]))].join(','));
    });
    return lines.join('\n') + '\n';
}

/** Markdown stable-CFL table; runtimes are environment-bound, not asserted. */
export function cflTableMarkdown(results: CflResult[]): string {
    if (results.length === 0) throw new Error('no CFL search results found');
    const byScheme = new Map(results.map(r => [r.scheme, r]));
    const ordered = SCHEME_ORDER.filter(s => byScheme.has(s)).map(s => byScheme.get(s)!);
    const lines = [
        '| Method | stable CFL | runtime s (non-normative) |',
        '|---|---|---|',
    ];
    for (const r of ordered) {
        const probe = r.probes.filter(p => p.stable && p.cfl === r.max_stable_cfl)[0];
        lines.push(`| ${LABELS[r.scheme] ?? r.scheme} | ${r.max_stable_cfl} | `
            + `${probe ? probe.runtime_s.toFixed(2) : '-'} |`);
    }
    return lines.join('\n') + '\n';
}

export function cflTableCsv(results: CflResult[]): string {
    if (results.length === 0) throw new Error('no CFL search results found');
    const byScheme = new Map(results.map(r => [r.scheme, r]));
    const ordered = SCHEME_ORDER.filter(s => byScheme.has(s)).map(s => byScheme.get(s)!);
    const lines = ['method,stable_cfl,runtime_s_non_normative'];
    for (const r of ordered) {
        const probe = r.probes.filter(p => p.stable && p.cfl === r.max_stable_cfl)[0];
        lines.push(`${r.scheme},${r.max_stable_cfl},${probe ? probe.runtime_s.toFixed(2) : ''}`);
    }
    return lines.join('\n') + '\n';
}
