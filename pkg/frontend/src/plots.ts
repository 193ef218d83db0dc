/**
 * The three figure builders: conservation drift, L^q decay with fitted tail
 * slope, and scattering Cauchy-difference decay. No physics is recomputed
 * here; everything is read straight from the simulator's CSV columns.
 */

import { ScatterReport, SchemaError, SeriesBundle, column } from "./schema.js";
import { FigureSpec, Series, renderFigure } from "./svg.js";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface Figure {
  svg: string;
  /** headline numbers, e.g. fitted slope or max drift */
  stats: Record<string, number>;
}

function relativeDrift(values: number[]): number[] {
  const ref = values[0];
  const denom = Math.max(Math.abs(ref), Number.MIN_VALUE);
  return values.map((v) => Math.abs(v - ref) / denom);
}

function subtitleFromMetadata(meta: Record<string, string>): string | undefined {
  const keys = ["grid.d", "grid.n", "system.N", "system.p", "system.kappa", "time.dt"];
  const parts = keys.filter((k) => k in meta).map((k) => `${k.split(".")[1]}=${meta[k]}`);
  return parts.length ? parts.join("  ") : undefined;
}

/** Drift of each conserved quantity relative to t=0, on a log scale. */
export function plotConservation(bundle: SeriesBundle): Figure {
  if (bundle.rows.length < 2) {
    throw new SchemaError("conservation plot needs at least 2 rows");
  }
  const t = column(bundle, "t");
  const series: Series[] = [];
  const names: string[] = [];
  for (let mu = 1; mu <= bundle.componentCount; mu += 1) names.push(`mass_${mu}`);
  names.push("energy_total");
  let worst = 0;
  names.forEach((name, i) => {
    const drift = relativeDrift(column(bundle, name));
    worst = Math.max(worst, ...drift.slice(1));
    series.push({ label: `${name} drift`, x: t, y: drift, color: PALETTE[i % PALETTE.length] });
  });
  const spec: FigureSpec = {
    title: "Conserved-quantity drift",
    subtitle: subtitleFromMetadata(bundle.metadata),
    xLabel: "t",
    yLabel: "relative drift (log)",
    yLog: true,
    series,
    annotations: [`max drift ${worst.toExponential(2)}`],
  };
  return { svg: renderFigure(spec), stats: { maxDrift: worst } };
}

/** Least-squares slope of log(y) against log(t) over the tail window. */
export function fitTailSlope(t: number[], y: number[]): number {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < t.length; i += 1) {
    if (t[i] > 0 && y[i] > 0) pts.push([Math.log(t[i]), Math.log(y[i])]);
  }
  const tail = pts.slice(Math.floor(pts.length / 2));
  if (tail.length < 2) return NaN;
  const n = tail.length;
  const mx = tail.reduce((a, p) => a + p[0], 0) / n;
  const my = tail.reduce((a, p) => a + p[1], 0) / n;
  let num = 0;
  let den = 0;
  for (const [x, yv] of tail) {
    num += (x - mx) * (yv - my);
    den += (x - mx) * (x - mx);
  }
  return den === 0 ? 0 : num / den;
}

/** log-log L^q norm against time with the fitted tail slope annotated. */
export function plotDecay(bundle: SeriesBundle, q: string): Figure {
  const name = `lq_${q}`;
  if (!bundle.columns.includes(name)) {
    throw new SchemaError(
      `no '${name}' column; this run recorded q in {${bundle.qValues.join(", ")}}`,
    );
  }
  const t = column(bundle, "t");
  const y = column(bundle, name);
  const slope = fitTailSlope(t, y);
  const positive = t.map((tv, i) => [tv, y[i]] as const).filter(([tv]) => tv > 0);
  const spec: FigureSpec = {
    title: `L^${q} norm decay`,
    subtitle: subtitleFromMetadata(bundle.metadata),
    xLabel: "t (log)",
    yLabel: `||u(t)||_${q} (log)`,
    xLog: true,
    yLog: true,
    series: [
      {
        label: name,
        x: positive.map(([tv]) => tv),
        y: positive.map(([, yv]) => yv),
        color: PALETTE[0],
      },
    ],
    annotations: [`fitted tail slope ${Number.isNaN(slope) ? "n/a" : slope.toFixed(3)}`],
  };
  return { svg: renderFigure(spec), stats: { tailSlope: slope } };
}

/** Consecutive pullback Cauchy differences against checkpoint time. */
export function plotScattering(report: ScatterReport): Figure {
  if (report.times.length === 0) {
    throw new SchemaError("scatter report is empty");
  }
  const keep = report.times
    .map((t, i) => [t, report.cauchyToNext[i]] as const)
    .filter(([, c]) => c > 0);
  const atFloor = keep.length === 0;
  const series: Series[] = [
    {
      label: "||v(t_{i+1}) - v(t_i)||_H2",
      x: atFloor ? report.times : keep.map(([t]) => t),
      y: atFloor ? report.cauchyToNext.map(() => 0) : keep.map(([, c]) => c),
      color: PALETTE[1],
      markers: true,
    },
    {
      label: "scattering error",
      x: report.times,
      y: report.scatteringError,
      color: PALETTE[0],
      markers: true,
    },
  ];
  const last = keep.length ? keep[keep.length - 1][1] : 0;
  const spec: FigureSpec = {
    title: "Scattering: pullback Cauchy differences",
    xLabel: "checkpoint time",
    yLabel: "H2 difference (log)",
    yLog: true,
    series,
    annotations: atFloor
      ? ["all differences at numerical floor"]
      : [`final difference ${last.toExponential(2)}`],
  };
  return { svg: renderFigure(spec), stats: { finalDifference: last } };
}
