import fs from 'node:fs';
import path from 'node:path';

export interface EocRow {
    cells: number;
    l1: number;
    l2: number;
    eoc_l1: number | null;
    eoc_l2: number | null;
}

export interface EocStudy {
    scenario: string;
    scheme: string;
    order: number;
    cfl: number;
    rows: EocRow[];
}

export interface CflProbe {
    cfl: number;
    stable: boolean;
    steps: number;
    runtime_s: number;
}

export interface CflResult {
    scenario: string;
    scheme: string;
    cells: number;
    max_stable_cfl: number;
    probes: CflProbe[];
}

function readJson(file: string): unknown {
    return JSON.parse(fs.readFileSync(file, 'utf8'));
}

/** Load every eoc_*.json / cfl_*.json found in a study directory. */
export function loadStudyDir(dir: string): { eoc: EocStudy[]; cfl: CflResult[] } {
    const eoc: EocStudy[] = [];
    const cfl: CflResult[] = [];
    for (const name of fs.readdirSync(dir).sort()) {
        if (name.startsWith('eoc_') && name.endsWith('.json')) {
            eoc.push(readJson(path.join(dir, name)) as EocStudy);
        } else if (name.startsWith('cfl_') && name.endsWith('.json')) {
            cfl.push(readJson(path.join(dir, name)) as CflResult);
        }
    }
    return { eoc, cfl };
}
