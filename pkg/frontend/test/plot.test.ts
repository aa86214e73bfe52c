import assert from 'node:assert/strict';
import { execFileSync } from 'node:child_process';
import fs from 'node:fs';
import os from 'node:os';
import path from 'node:path';
import { test } from 'node:test';
import { readFigureSpec, renderFigure } from '../src/figspec';
import { main } from '../src/cli';

// the solver is consumed through its CLI and file formats only
function solver(args: string[], cwd: string): void {
    execFileSync('python3', ['-m', 'mprkfv.cli', ...args], { cwd, stdio: 'pipe' });
}

function makeRuns(): string {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'mprkfv-plot-'));
    for (const scheme of ['fe', 'mpe-s']) {
        solver(['run', '--scenario', 'vacuum', '--scheme', scheme, '--cells', '100',
            '--cfl', '1.0', '--safety', '0.7', '--out', path.join(dir, `vac-${scheme}`)], dir);
        solver(['run', '--scenario', 'contact', '--scheme', scheme, '--cells', '100',
            '--cfl', '1.0', '--safety', '0.7', '--tend', '2e-4',
            '--out', path.join(dir, `con-${scheme}`)], dir);
    }
    solver(['compare', '--snapshot', path.join(dir, 'vac-fe', 'snap_final.csv'),
        '--out', path.join(dir, 'vac-errors.json'),
        '--reference-out', path.join(dir, 'vac-reference.csv')], dir);
    return dir;
}

const dir = makeRuns();

test('profile plots render for the vacuum scenario with an exact reference', () => {
    const spec = {
        scenario: 'vacuum',
        variables: ['rho', 'u', 'p'],
        curves: [
            { label: 'FE', file: 'vac-fe/snap_final.csv' },
            { label: 'MPE-s', file: 'vac-mpe-s/snap_final.csv' },
        ],
        reference: 'vac-reference.csv',
        out_prefix: 'fig_vacuum',
    };
    const specFile = path.join(dir, 'vacuum.figspec.json');
    fs.writeFileSync(specFile, JSON.stringify(spec));
    const rc = main(['plot', '--spec', specFile]);
    assert.equal(rc, 0);
    for (const variable of spec.variables) {
        const file = path.join(dir, `fig_vacuum_${variable}.svg`);
        const svg = fs.readFileSync(file, 'utf8');
        assert.match(svg, /^<svg /);
        assert.ok(svg.trimEnd().endsWith('</svg>'));
        // two scheme curves plus the dashed reference
        assert.equal((svg.match(/<polyline /g) ?? []).length, 3);
        assert.match(svg, /stroke-dasharray/);
    }
});

test('profile plots render for the contact scenario', () => {
    const spec = {
        scenario: 'contact',
        variables: ['rho', 'u', 'p'],
        curves: [
            { label: 'FE', file: 'con-fe/snap_final.csv' },
            { label: 'MPE-s', file: 'con-mpe-s/snap_final.csv' },
        ],
        out_prefix: 'fig_contact',
    };
    const specFile = path.join(dir, 'contact.figspec.json');
    fs.writeFileSync(specFile, JSON.stringify(spec));
    const written = renderFigure(readFigureSpec(specFile), dir);
    assert.equal(written.length, 3);
    const rho = fs.readFileSync(written[0], 'utf8');
    assert.equal((rho.match(/<polyline /g) ?? []).length, 2);
});

test('plots are byte-deterministic', () => {
    const specFile = path.join(dir, 'vacuum.figspec.json');
    const before = fs.readFileSync(path.join(dir, 'fig_vacuum_rho.svg'), 'utf8');
    main(['plot', '--spec', specFile]);
    const after = fs.readFileSync(path.join(dir, 'fig_vacuum_rho.svg'), 'utf8');
    assert.equal(before, after);
});

test('mismatched grids are rejected', () => {
    solver(['run', '--scenario', 'vacuum', '--scheme', 'fe', '--cells', '50',
        '--cfl', '1.0', '--safety', '0.7', '--tend', '1e-4',
        '--out', path.join(dir, 'vac-coarse')], dir);
    const spec = {
        scenario: 'vacuum',
        variables: ['rho'],
        curves: [
            { label: 'a', file: 'vac-fe/snap_final.csv' },
            { label: 'b', file: 'vac-coarse/snap_final.csv' },
        ],
        out_prefix: 'fig_bad',
    };
    const specFile = path.join(dir, 'bad.figspec.json');
    fs.writeFileSync(specFile, JSON.stringify(spec));
    assert.throws(() => renderFigure(readFigureSpec(specFile), dir), /same grid/);
});

test('empty curve list is rejected', () => {
    const specFile = path.join(dir, 'empty.figspec.json');
    fs.writeFileSync(specFile, JSON.stringify({
        scenario: 'x', variables: ['rho'], curves: [], out_prefix: 'nope',
    }));
    assert.throws(() => readFigureSpec(specFile), /at least one/);
});
