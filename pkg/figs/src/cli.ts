#!/usr/bin/env node
/** Usage: arcwalk-render render <kind> <csv...> -o <path.svg> */

import { SchemaError } from "./csv";
import { KINDS, render } from "./figures";

function usage(): string {
  return [
    "usage: render <kind> <csv...> -o <output.svg>",
    `kinds: ${Object.keys(KINDS).join(", ")}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  if (argv.length === 0 || argv[0] !== "render") {
    console.error(usage());
    return 2;
  }
  const rest = argv.slice(1);
  const flag = rest.indexOf("-o");
  if (flag < 0 || flag === rest.length - 1 || rest.length < 3) {
    console.error(usage());
    return 2;
  }
  const out = rest[flag + 1];
  const [kind, ...inputs] = rest.slice(0, flag).concat(rest.slice(flag + 2));
  try {
    render(kind, inputs, out);
    console.log(`wrote ${out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException).code) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
