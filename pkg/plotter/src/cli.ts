#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { plotCdf } from "./render.js";

export function main(argv: string[]): void {
  yargs(argv)
    .command(
      "plot",
      "render empirical CDF curves from a run directory",
      (y) =>
        y
          .option("in", { type: "string", demandOption: true,
                          describe: "run directory (or a single CSV file)" })
          .option("metric", { type: "string", demandOption: true,
                              choices: ["sum_se", "eps"] as const,
                              describe: "which metric to pool per curve" })
          .option("out", { type: "string", demandOption: true,
                           describe: "output image (.png or .pdf)" })
          .option("logx", { type: "boolean", default: false,
                            describe: "logarithmic x axis" })
          .option("vline", { type: "number",
                             describe: "vertical reference line at this x" }),
      (args) => {
        const out = plotCdf({
          input: args.in,
          metric: args.metric,
          out: args.out,
          logx: args.logx,
          vline: args.vline,
        });
        console.log(out);
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(err ? `error: ${err.message}` : msg);
      process.exit(1);
    })
    .parseSync();
}

main(hideBin(process.argv));
