/** Dependency-free SVG charts for the stats view. */

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

export interface BarDatum {
  label: string;
  value: number;
}

/** Horizontal bar chart; one `rect.bar` per datum. */
export function barChart(data: BarDatum[], width = 420, rowHeight = 24): SVGSVGElement {
  const max = Math.max(...data.map((d) => d.value), 1);
  const labelWidth = 120;
  const svg = svgEl("svg", {
    width,
    height: data.length * rowHeight + 4,
    role: "img",
  });
  data.forEach((d, i) => {
    const y = i * rowHeight;
    const barWidth = ((width - labelWidth - 40) * d.value) / max;
    const label = svgEl("text", { x: labelWidth - 6, y: y + 16, "text-anchor": "end" });
    label.textContent = d.label;
    const bar = svgEl("rect", {
      class: "bar",
      x: labelWidth,
      y: y + 4,
      width: Math.max(barWidth, 1),
      height: rowHeight - 8,
    });
    const value = svgEl("text", { x: labelWidth + barWidth + 6, y: y + 16 });
    value.textContent = String(d.value);
    svg.append(label, bar, value);
  });
  return svg;
}

/** Daily time series as vertical bars; one `rect.day` per day. */
export function timeSeriesChart(
  byDay: Record<string, number>,
  width = 420,
  height = 140,
): SVGSVGElement {
  const days = Object.keys(byDay).sort();
  const max = Math.max(...days.map((d) => byDay[d]), 1);
  const svg = svgEl("svg", { width, height: height + 20, role: "img" });
  const slot = width / Math.max(days.length, 1);
  days.forEach((day, i) => {
    const barHeight = (height * byDay[day]) / max;
    const bar = svgEl("rect", {
      class: "day",
      x: i * slot + 2,
      y: height - barHeight,
      width: Math.max(slot - 4, 1),
      height: Math.max(barHeight, 1),
    });
    const title = svgEl("title");
    title.textContent = `${day}: ${byDay[day]}`;
    bar.appendChild(title);
    svg.appendChild(bar);
  });
  if (days.length > 0) {
    const first = svgEl("text", { x: 2, y: height + 16 });
    first.textContent = days[0].slice(5);
    const last = svgEl("text", { x: width - 40, y: height + 16 });
    last.textContent = days[days.length - 1].slice(5);
    svg.append(first, last);
  }
  return svg;
}

/** Donut chart of a share distribution; one `path.slice` per entry. */
export function donutChart(
  distribution: Record<string, number>,
  size = 160,
): SVGSVGElement {
  const entries = Object.entries(distribution).filter(([, share]) => share > 0);
  const svg = svgEl("svg", { width: size + 180, height: size, role: "img" });
  const r = size / 2 - 4;
  const cx = size / 2;
  const cy = size / 2;
  let angle = -Math.PI / 2;
  entries.forEach(([name, share], i) => {
    const sweep = share * 2 * Math.PI;
    // full-circle arcs degenerate; cap the sweep just under 2π
    const end = angle + Math.min(sweep, 2 * Math.PI - 1e-4);
    const x0 = cx + r * Math.cos(angle);
    const y0 = cy + r * Math.sin(angle);
    const x1 = cx + r * Math.cos(end);
    const y1 = cy + r * Math.sin(end);
    const large = sweep > Math.PI ? 1 : 0;
    const path = svgEl("path", {
      class: `slice slice-${i}`,
      d: `M ${cx} ${cy} L ${x0} ${y0} A ${r} ${r} 0 ${large} 1 ${x1} ${y1} Z`,
    });
    const title = svgEl("title");
    title.textContent = `${name}: ${(share * 100).toFixed(1)}%`;
    path.appendChild(title);
    svg.appendChild(path);

    const legend = svgEl("text", { x: size + 16, y: 20 + i * 20, class: `legend-${i}` });
    legend.textContent = `${name} ${(share * 100).toFixed(1)}%`;
    svg.appendChild(legend);
    angle = end;
  });
  const hole = svgEl("circle", { cx, cy, r: r * 0.55, class: "donut-hole" });
  svg.appendChild(hole);
  return svg;
}
