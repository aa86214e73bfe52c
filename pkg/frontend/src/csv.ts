import fs from 'node:fs';

export interface Snapshot {
    meta: Record<string, string>;
    columns: string[];
    /** column name -> values, one entry per cell */
    data: Map<string, number[]>;
}

/** Parse a solver snapshot: '#key=value' metadata lines, a header row, data rows. */
export function readSnapshot(path: string): Snapshot {
    const meta: Record<string, string> = {};
    let columns: string[] = [];
    const rows: number[][] = [];
    for (const raw of fs.readFileSync(path, 'utf8').split('\n')) {
        if (raw.startsWith('#')) {
            const idx = raw.indexOf('=');
            if (idx > 0) meta[raw.slice(1, idx)] = raw.slice(idx + 1);
        } else if (raw.trim() === '') {
            continue;
        } else if (columns.length === 0) {
            columns = raw.split(',');
        } else {
            rows.push(raw.split(',').map(Number));
        }
    }
    if (columns.length === 0) throw new Error(`no header row in ${path}`);
    const data = new Map<string, number[]>();
    columns.forEach((name, j) => data.set(name, rows.map(r => r[j])));
    return { meta, columns, data };
}

export function column(snap: Snapshot, name: string, path = '<snapshot>'): number[] {
    const values = snap.data.get(name);
    if (!values) throw new Error(`column ${name} missing from ${path}`);
    return values;
}
