import fs from 'node:fs';
import path from 'node:path';
import { column, readSnapshot } from './csv';
import { Curve, linePlot } from './svg';

export interface FigureSpec {
    scenario: string;
    /** variables to plot; density columns, u, p (must exist in the snapshots) */
    variables: string[];
    curves: { label: string; file: string }[];
    /** optional reference curve CSV with columns x,rho,u,p */
    reference?: string;
    out_prefix: string;
}

export function readFigureSpec(file: string): FigureSpec {
    const spec = JSON.parse(fs.readFileSync(file, 'utf8')) as FigureSpec;
    if (!spec.curves || spec.curves.length === 0) {
        throw new Error('figure spec needs at least one (scheme, snapshot) curve');
    }
    if (!spec.variables || spec.variables.length === 0) {
        throw new Error('figure spec needs at least one variable');
    }
    return spec;
}

const REFERENCE_COLUMN: Record<string, string> = { rho: 'rho', u: 'u', p: 'p' };

/** Render one SVG per variable; returns the list of files written. */
export function renderFigure(spec: FigureSpec, baseDir: string): string[] {
    const snaps = spec.curves.map(c => ({
        label: c.label,
        snap: readSnapshot(path.resolve(baseDir, c.file)),
    }));
    const x0 = column(snaps[0].snap, 'x', spec.curves[0].file);
    for (const { snap } of snaps) {
        const x = column(snap, 'x');
        if (x.length !== x0.length || x.some((v, i) => v !== x0[i])) {
            throw new Error('snapshot files do not share the same grid');
        }
    }
    let ref: ReturnType<typeof readSnapshot> | null = null;
    if (spec.reference) {
        ref = readSnapshot(path.resolve(baseDir, spec.reference));
    }
    const written: string[] = [];
    for (const variable of spec.variables) {
        const curves: Curve[] = snaps.map(({ label, snap }) => ({
            label,
            x: column(snap, 'x'),
            y: column(snap, variable),
        }));
        if (ref) {
            const refCol = REFERENCE_COLUMN[variable] ?? variable;
            if (ref.data.has(refCol)) {
                curves.push({
                    label: 'exact', dashed: true,
                    x: column(ref, 'x'), y: column(ref, refCol),
                });
            }
        }
        const svg = linePlot(`${spec.scenario}: ${variable}`, 'x', variable, curves);
        const out = path.resolve(baseDir, `${spec.out_prefix}_${variable}.svg`);
        fs.writeFileSync(out, svg);
        written.push(out);
    }
    return written;
}
