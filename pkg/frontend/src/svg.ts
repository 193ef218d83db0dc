/**
 * Minimal hand-rolled SVG line figures: linear or log axes, multiple series,
 * legend, annotations. The plotted arrays are embedded verbatim in a
 * <metadata> block so a figure is a pure function of its input data.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  markers?: boolean;
}

export interface FigureSpec {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
  series: Series[];
  annotations?: string[];
}

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 20, top: 48, bottom: 52 };
/** floor for log-scale values that are exactly zero */
const LOG_FLOOR = 1e-18;

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function transform(values: number[], log: boolean): number[] {
  return log ? values.map((v) => Math.log10(Math.max(Math.abs(v), LOG_FLOOR))) : values;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

function ticks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    out.push(v);
  }
  return out;
}

function fmtTick(v: number, log: boolean): string {
  if (log) return `1e${Math.round(v)}`;
  if (v === 0) return "0";
  const a = Math.abs(v);
  return a >= 1e4 || a < 1e-3 ? v.toExponential(1) : String(Number(v.toPrecision(6)));
}

export function renderFigure(spec: FigureSpec): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const allX = transform(spec.series.flatMap((s) => s.x), spec.xLog ?? false);
  const allY = transform(spec.series.flatMap((s) => s.y), spec.yLog ?? false);
  const [x0, x1] = extent(allX);
  const [y0, y1] = extent(allY);
  const sx = (v: number) => MARGIN.left + ((v - x0) / (x1 - x0)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  const embedded = {
    title: spec.title,
    series: spec.series.map((s) => ({ label: s.label, x: s.x, y: s.y })),
  };
  parts.push(`<metadata id="figure-data">${esc(JSON.stringify(embedded))}</metadata>`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="16" font-weight="bold">${esc(spec.title)}</text>`,
  );
  if (spec.subtitle) {
    parts.push(
      `<text x="${WIDTH / 2}" y="40" text-anchor="middle" font-size="11" fill="#555">${esc(spec.subtitle)}</text>`,
    );
  }

  for (const tx of ticks(x0, x1)) {
    const px = sx(tx);
    parts.push(`<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${MARGIN.top + plotH}" stroke="#eee"/>`);
    parts.push(
      `<text x="${px}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" font-size="11">${fmtTick(tx, spec.xLog ?? false)}</text>`,
    );
  }
  for (const ty of ticks(y0, y1)) {
    const py = sy(ty);
    parts.push(`<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + plotW}" y2="${py}" stroke="#eee"/>`);
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmtTick(ty, spec.yLog ?? false)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  );

  spec.series.forEach((s, i) => {
    const xs = transform(s.x, spec.xLog ?? false);
    const ys = transform(s.y, spec.yLog ?? false);
    const pts = xs.map((x, j) => `${sx(x).toFixed(2)},${sy(ys[j]).toFixed(2)}`);
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${s.color}" stroke-width="1.6"/>`,
    );
    if (s.markers) {
      for (const p of pts) {
        const [px, py] = p.split(",");
        parts.push(`<circle cx="${px}" cy="${py}" r="3.5" fill="${s.color}"/>`);
      }
    }
    parts.push(
      `<text x="${MARGIN.left + plotW - 8}" y="${MARGIN.top + 16 + 15 * i}" text-anchor="end" font-size="12" fill="${s.color}">${esc(s.label)}</text>`,
    );
  });

  (spec.annotations ?? []).forEach((a, i) => {
    parts.push(
      `<text x="${MARGIN.left + 8}" y="${MARGIN.top + 16 + 14 * i}" font-size="11" fill="#333">${esc(a)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n");
}

/** The data arrays embedded by renderFigure, for purity checks and --format json. */
export function embeddedData(svg: string): string {
  const m = svg.match(/<metadata id="figure-data">([\s\S]*?)<\/metadata>/);
  if (!m) throw new Error("figure has no embedded data block");
  return m[1].replace(/&amp;/g, "&").replace(/&lt;/g, "<").replace(/&gt;/g, ">");
}
