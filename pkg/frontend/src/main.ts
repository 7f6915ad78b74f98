/** Figure CLI for exported runs:
 *
 *   node dist/main.js poles  --run DIR --out poles.svg
 *   node dist/main.js sphere --run DIR --out sphere.svg [--times t1,t2,...]
 *   node dist/main.js energy --run DIR --out energy.svg [--times t1,t2,...]
 *
 * Consumes only the documented CSV/JSON exports; no physics is recomputed.
 */
import { readdirSync, writeFileSync } from "fs";
import { join } from "path";
import { loadEnergy, renderEnergy, sliceAt } from "./energy.js";
import { loadPoleData, renderPoles } from "./poles.js";
import { loadFieldCurve, renderSphere } from "./sphere.js";

function arg(flags: string[], name: string): string | undefined {
  const i = flags.indexOf(name);
  return i >= 0 && i + 1 < flags.length ? flags[i + 1] : undefined;
}

export function run(argv: string[]): number {
  const [cmd, ...rest] = argv;
  const runDir = arg(rest, "--run");
  const out = arg(rest, "--out");
  if (!cmd || !runDir || !out) {
    console.error("usage: main.js poles|sphere|energy --run DIR --out FILE.svg [--times a,b,c]");
    return 2;
  }
  try {
    if (cmd === "poles") {
      const data = loadPoleData(join(runDir, "trajectory.csv"), join(runDir, "initial_state.json"));
      writeFileSync(out, renderPoles(data));
    } else if (cmd === "sphere") {
      const files = readdirSync(runDir)
        .filter((f) => f.startsWith("fields_t") && f.endsWith(".csv"))
        .sort((a, b) => tagTime(a) - tagTime(b));
      if (files.length === 0) throw new Error("no fields_t*.csv exports in run directory");
      const wanted = arg(rest, "--times");
      const selected = wanted
        ? wanted.split(",").map((t) => nearest(files, Number(t)))
        : files;
      const curves = selected.map((f) => loadFieldCurve(join(runDir, f), `t = ${tagTime(f).toFixed(3)}`));
      writeFileSync(out, renderSphere(curves));
    } else if (cmd === "energy") {
      const slices = loadEnergy(join(runDir, "energy.csv"));
      const wanted = arg(rest, "--times");
      const selected = wanted ? wanted.split(",").map((t) => sliceAt(slices, Number(t))) : defaultEnergyPanels(slices);
      writeFileSync(out, renderEnergy(selected));
    } else {
      console.error(`unknown figure kind ${cmd}`);
      return 2;
    }
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  console.log(`wrote ${out}`);
  return 0;
}

function tagTime(fname: string): number {
  const m = fname.match(/fields_t(m?[0-9.]+)\.csv/);
  if (!m) return NaN;
  return Number(m[1].replace("m", "-"));
}

function nearest(files: string[], t: number): string {
  let best = files[0];
  for (const f of files) if (Math.abs(tagTime(f) - t) < Math.abs(tagTime(best) - t)) best = f;
  return best;
}

/** Four panels at 0, T/4, T/2, 3T/4 of the exported span. */
function defaultEnergyPanels(slices: ReturnType<typeof loadEnergy>) {
  const t0 = slices[0].t;
  const T = slices[slices.length - 1].t - t0;
  return [0, 0.25, 0.5, 0.75].map((f) => sliceAt(slices, t0 + f * T));
}

const isMain = process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
