#!/usr/bin/env node
/**
 * scmix-extract: mean-pooled vision embeddings in the scmix exchange format.
 *
 *   extract --manifest <path> --encoder <id> --out <path> [--append]
 *   list-encoders
 *
 * Exit codes: 0 success, 1 partial per-image failures, 2 usage errors.
 */

import { extract } from './extract.js';
import { listEncoderRows } from './registry.js';

const USAGE = `usage:
  extract --manifest <path> --encoder <id> --out <path> [--append]
  list-encoders`;

function parseFlags(argv: string[]): Map<string, string | boolean> {
  const flags = new Map<string, string | boolean>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith('--')) {
      throw new Error(`unexpected argument ${JSON.stringify(arg)}`);
    }
    const name = arg.slice(2);
    if (name === 'append') {
      flags.set(name, true);
    } else {
      const value = argv[++i];
      if (value === undefined) {
        throw new Error(`flag --${name} needs a value`);
      }
      flags.set(name, value);
    }
  }
  return flags;
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  if (command === 'list-encoders') {
    for (const row of await listEncoderRows()) {
      console.log(row);
    }
    return 0;
  }
  if (command !== 'extract') {
    console.error(USAGE);
    return 2;
  }
  let flags: Map<string, string | boolean>;
  try {
    flags = parseFlags(rest);
  } catch (err) {
    console.error(String(err));
    console.error(USAGE);
    return 2;
  }
  const manifest = flags.get('manifest');
  const encoder = flags.get('encoder');
  const out = flags.get('out');
  if (
    typeof manifest !== 'string' ||
    typeof encoder !== 'string' ||
    typeof out !== 'string'
  ) {
    console.error('extract needs --manifest, --encoder and --out');
    console.error(USAGE);
    return 2;
  }
  try {
    const result = await extract({
      manifestPath: manifest,
      encoderId: encoder,
      outPath: out,
      append: flags.get('append') === true,
    });
    for (const failure of result.failures) {
      console.error(`error: ${failure.imageId}: ${failure.error}`);
    }
    console.log(
      `wrote ${result.written} records (${result.failures.length} failures)`,
    );
    return result.failures.length > 0 ? 1 : 0;
  } catch (err) {
    console.error(String(err));
    return 2;
  }
}

const isDirectRun =
  process.argv[1] && import.meta.url.endsWith(process.argv[1].split('/').pop()!);
if (isDirectRun) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
