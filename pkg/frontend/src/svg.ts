/** Tiny deterministic SVG assembly: scales, axes, and a string builder. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 28, right: 160, bottom: 44, left: 58 };

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  map(x: number): number {
    const span = this.d1 - this.d0;
    const t = span === 0 ? 0.5 : (x - this.d0) / span;
    return this.r0 + t * (this.r1 - this.r0);
  }

  ticks(count = 5): number[] {
    const span = this.d1 - this.d0;
    if (span === 0) return [this.d0];
    const step = niceStep(span / count);
    const start = Math.ceil(this.d0 / step) * step;
    const out: number[] = [];
    for (let v = start; v <= this.d1 + 1e-9 * Math.abs(step); v += step) {
      out.push(roundTo(v, step));
    }
    return out;
  }
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(raw))));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

function roundTo(value: number, step: number): number {
  const digits = Math.max(0, -Math.floor(Math.log10(Math.abs(step))) + 1);
  return Number(value.toFixed(digits + 2));
}

export function padDomain(lo: number, hi: number, frac = 0.06): [number, number] {
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * frac;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * frac;
  return [lo - pad, hi + pad];
}

export function fmt(value: number): string {
  if (Number.isInteger(value)) return String(value);
  return String(Number(value.toPrecision(6)));
}

// Paul Tol's bright palette: distinguishable and print-safe.
const PALETTE = [
  "#4477AA",
  "#EE6677",
  "#228833",
  "#CCBB44",
  "#66CCEE",
  "#AA3377",
  "#BBBBBB",
  "#222255",
  "#999933",
  "#882255",
];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  element(tag: string, attrs: Record<string, string | number>, text?: string): this {
    const rendered = Object.entries(attrs)
      .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : escapeAttr(v)}"`)
      .join(" ");
    if (text === undefined) {
      this.parts.push(`<${tag} ${rendered}/>`);
    } else {
      this.parts.push(`<${tag} ${rendered}>${escapeText(text)}</${tag}>`);
    }
    return this;
  }

  axes(
    x: LinearScale,
    y: LinearScale,
    margin: Margin,
    xLabel: string,
    yLabel: string,
  ): this {
    const x0 = margin.left;
    const x1 = this.width - margin.right;
    const y0 = this.height - margin.bottom;
    const y1 = margin.top;
    this.element("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#333" });
    this.element("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#333" });
    for (const tick of x.ticks()) {
      const px = x.map(tick);
      if (px < x0 - 1e-6 || px > x1 + 1e-6) continue;
      this.element("line", { x1: px, y1: y0, x2: px, y2: y0 + 4, stroke: "#333" });
      this.element(
        "text",
        { x: px, y: y0 + 16, "text-anchor": "middle", fill: "#333" },
        fmt(tick),
      );
    }
    for (const tick of y.ticks()) {
      const py = y.map(tick);
      if (py > y0 + 1e-6 || py < y1 - 1e-6) continue;
      this.element("line", { x1: x0 - 4, y1: py, x2: x0, y2: py, stroke: "#333" });
      this.element(
        "text",
        { x: x0 - 7, y: py + 3, "text-anchor": "end", fill: "#333" },
        fmt(tick),
      );
    }
    this.element(
      "text",
      { x: (x0 + x1) / 2, y: this.height - 8, "text-anchor": "middle", fill: "#111" },
      xLabel,
    );
    this.element(
      "text",
      {
        x: 14,
        y: (y0 + y1) / 2,
        "text-anchor": "middle",
        fill: "#111",
        transform: `rotate(-90 14 ${fmt((y0 + y1) / 2)})`,
      },
      yLabel,
    );
    return this;
  }

  legend(methods: string[], margin: Margin): this {
    const x = this.width - margin.right + 14;
    methods.forEach((method, idx) => {
      const y = margin.top + 8 + idx * 18;
      this.element("rect", {
        x,
        y: y - 8,
        width: 10,
        height: 10,
        fill: colorFor(idx),
        class: "legend-swatch",
      });
      this.element("text", { x: x + 15, y, fill: "#111" }, method);
    });
    return this;
  }

  title(text: string): this {
    this.element(
      "text",
      { x: this.width / 2, y: 16, "text-anchor": "middle", "font-size": 13, fill: "#111" },
      text,
    );
    return this;
  }

  render(): string {
    return [...this.parts, "</svg>"].join("\n") + "\n";
  }
}

function escapeAttr(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/"/g, "&quot;").replace(/</g, "&lt;");
}

function escapeText(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
