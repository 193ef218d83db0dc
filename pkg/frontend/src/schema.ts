/**
 * Parsing and validation of the simulator's diagnostics CSV schema.
 *
 * Column contract (fixed order, written by the simulator's `simulate`
 * command):
 *
 *   t, mass_1..mass_N, energy_total, energy_biharmonic, energy_gradient,
 *   energy_potential, h2_1..h2_N, lq_<q>..., boundary_mass,
 *   morawetz_action[, interaction_action]
 *
 * Files whose header deviates from this layout are refused: silent column
 * drift is how plots end up lying.
 */

export class SchemaError extends Error {}

const ENERGY_COLUMNS = [
  "energy_total",
  "energy_biharmonic",
  "energy_gradient",
  "energy_potential",
] as const;

export interface SeriesBundle {
  columns: string[];
  /** rows[i][j] is the value of columns[j] at sample i */
  rows: number[][];
  componentCount: number;
  qValues: string[];
  hasInteraction: boolean;
  /** flat key paths from the sidecar config copy, e.g. "system.p" -> "2.0" */
  metadata: Record<string, string>;
}

export interface ScatterReport {
  times: number[];
  cauchyToNext: number[];
  scatteringError: number[];
}

function countPrefixed(columns: string[], start: number, prefix: string): number {
  let n = 0;
  while (start + n < columns.length && columns[start + n] === `${prefix}${n + 1}`) {
    n += 1;
  }
  return n;
}

/** Validate the header layout and return the structural facts it encodes. */
export function validateHeader(columns: string[]): {
  componentCount: number;
  qValues: string[];
  hasInteraction: boolean;
} {
  if (columns[0] !== "t") {
    throw new SchemaError(`first column must be 't', got '${columns[0] ?? ""}'`);
  }
  let at = 1;
  const componentCount = countPrefixed(columns, at, "mass_");
  if (componentCount === 0) {
    throw new SchemaError("expected mass_1.. after 't'");
  }
  at += componentCount;
  for (const name of ENERGY_COLUMNS) {
    if (columns[at] !== name) {
      throw new SchemaError(`expected '${name}' at column ${at}, got '${columns[at] ?? ""}'`);
    }
    at += 1;
  }
  const h2Count = countPrefixed(columns, at, "h2_");
  if (h2Count !== componentCount) {
    throw new SchemaError(
      `expected ${componentCount} h2_* columns to match mass_*, found ${h2Count}`,
    );
  }
  at += h2Count;
  const qValues: string[] = [];
  while (at < columns.length && columns[at].startsWith("lq_")) {
    qValues.push(columns[at].slice(3));
    at += 1;
  }
  if (columns[at] !== "boundary_mass") {
    throw new SchemaError(`expected 'boundary_mass', got '${columns[at] ?? ""}'`);
  }
  at += 1;
  if (columns[at] !== "morawetz_action") {
    throw new SchemaError(`expected 'morawetz_action', got '${columns[at] ?? ""}'`);
  }
  at += 1;
  let hasInteraction = false;
  if (at < columns.length) {
    if (columns[at] !== "interaction_action" || at !== columns.length - 1) {
      throw new SchemaError(`unexpected trailing columns: ${columns.slice(at).join(",")}`);
    }
    hasInteraction = true;
  }
  return { componentCount, qValues, hasInteraction };
}

export function parseSeriesCsv(text: string, metadata: Record<string, string> = {}): SeriesBundle {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new SchemaError("CSV needs a header and at least one data row");
  }
  const columns = lines[0].split(",");
  const shape = validateHeader(columns);
  const rows = lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(`row ${i + 1} has ${parts.length} fields, expected ${columns.length}`);
    }
    const values = parts.map(Number);
    if (values.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`row ${i + 1} contains a non-numeric field`);
    }
    return values;
  });
  return { columns, rows, metadata, ...shape };
}

export function column(bundle: SeriesBundle, name: string): number[] {
  const idx = bundle.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column '${name}' not present (have: ${bundle.columns.join(",")})`);
  }
  return bundle.rows.map((r) => r[idx]);
}

export function parseScatterCsv(text: string): ScatterReport {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 1 || lines[0] !== "t,cauchy_to_next,scattering_error") {
    throw new SchemaError("not a scatter report (expected header t,cauchy_to_next,scattering_error)");
  }
  if (lines.length < 2) {
    throw new SchemaError("scatter report has no rows");
  }
  const times: number[] = [];
  const cauchyToNext: number[] = [];
  const scatteringError: number[] = [];
  for (const line of lines.slice(1)) {
    const [t, c, e] = line.split(",").map(Number);
    if ([t, c, e].some((v) => Number.isNaN(v))) {
      throw new SchemaError("scatter report contains a non-numeric field");
    }
    times.push(t);
    cauchyToNext.push(c);
    scatteringError.push(e);
  }
  return { times, cauchyToNext, scatteringError };
}

/**
 * Flatten the two-level YAML sidecar written next to each series into
 * "section.key" -> raw string. Only the subset the simulator emits is
 * handled (scalars and inline lists); anything deeper is kept verbatim.
 */
export function parseSidecarConfig(text: string): Record<string, string> {
  const out: Record<string, string> = {};
  let section = "";
  for (const raw of text.split(/\r?\n/)) {
    if (!raw.trim() || raw.trimStart().startsWith("#")) continue;
    const indent = raw.length - raw.trimStart().length;
    const body = raw.trim();
    const colon = body.indexOf(":");
    if (colon < 0) continue;
    const key = body.slice(0, colon).trim();
    const value = body.slice(colon + 1).trim();
    if (indent === 0) {
      section = key;
      if (value) out[key] = value;
    } else if (value) {
      out[`${section}.${key}`] = value;
    }
  }
  return out;
}
