// Tiny deterministic SVG writer. Every figure is assembled as a string so
// that the same rows always produce the same bytes: no timestamps, no
// random ids, numbers formatted through one routine.

export type Attrs = Record<string, string | number | undefined>;

// Compact, stable number format: integers verbatim, everything else
// rounded to 6 significant digits with trailing zeros trimmed.
export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  if (Number.isInteger(x) && Math.abs(x) < 1e15) return String(x);
  const s = x.toPrecision(6);
  return s.includes("e") ? s : s.replace(/\.?0+$/, "");
}

function attrText(attrs: Attrs): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(attrs)) {
    if (value === undefined) continue;
    const text = typeof value === "number" ? fmt(value) : value;
    parts.push(` ${key}="${text}"`);
  }
  return parts.join("");
}

export function el(tag: string, attrs: Attrs, body?: string): string {
  if (body === undefined) return `<${tag}${attrText(attrs)}/>`;
  return `<${tag}${attrText(attrs)}>${body}</${tag}>`;
}

export function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function textEl(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el("text", { x, y, ...attrs }, escapeText(content));
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return el("line", { x1, y1, x2, y2, ...attrs });
}

export function polylinePath(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
    .join("");
}

export function group(attrs: Attrs, children: string[]): string {
  return el("g", attrs, children.join(""));
}

export function svgDocument(width: number, height: number, children: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`;
  const background = el("rect", {
    x: 0,
    y: 0,
    width,
    height,
    fill: "#ffffff",
  });
  return `${head}${background}${children.join("")}</svg>\n`;
}
