import fs from 'node:fs';
import path from 'node:path';
import { readFigureSpec, renderFigure } from './figspec';
import { loadStudyDir } from './summaries';
import { cflTableCsv, cflTableMarkdown, eocTableCsv, eocTableMarkdown } from './tables';

function usage(): never {
    console.error('usage: cli tables --study <dir> --out <dir>');
    console.error('       cli plot --spec <figure-spec.json>');
    process.exit(2);
}

function argValue(args: string[], flag: string): string {
    const i = args.indexOf(flag);
    if (i < 0 || i + 1 >= args.length) usage();
    return args[i + 1];
}

export function main(argv: string[]): number {
    const [command, ...args] = argv;
    if (command === 'tables') {
        const study = argValue(args, '--study');
        const out = argValue(args, '--out');
        const { eoc, cfl } = loadStudyDir(study);
        fs.mkdirSync(out, { recursive: true });
        if (eoc.length > 0) {
            fs.writeFileSync(path.join(out, 'eoc_l1_table.md'), eocTableMarkdown(eoc, 'eoc_l1'));
            fs.writeFileSync(path.join(out, 'eoc_l1_table.csv'), eocTableCsv(eoc, 'eoc_l1'));
            fs.writeFileSync(path.join(out, 'eoc_l2_table.md'), eocTableMarkdown(eoc, 'eoc_l2'));
        }
        if (cfl.length > 0) {
            fs.writeFileSync(path.join(out, 'cfl_table.md'), cflTableMarkdown(cfl));
            fs.writeFileSync(path.join(out, 'cfl_table.csv'), cflTableCsv(cfl));
        }
        if (eoc.length === 0 && cfl.length === 0) {
            console.error(`no eoc_*.json or cfl_*.json files in ${study}`);
            return 1;
        }
        return 0;
    }
    if (command === 'plot') {
        const specFile = argValue(args, '--spec');
        const spec = readFigureSpec(specFile);
        const written = renderFigure(spec, path.dirname(path.resolve(specFile)));
        for (const f of written) console.log(f);
        return 0;
    }
    usage();
}

if (require.main === module) {
    try {
        process.exit(main(process.argv.slice(2)));
    } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        process.exit(1);
    }
}
