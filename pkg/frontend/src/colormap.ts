/** Fixed-stop perceptual colormap (viridis anchors, linear interpolation). */

const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

function hex2(v: number): string {
  return Math.round(v).toString(16).padStart(2, "0");
}

/** Map u in [0, 1] to a #rrggbb color; out-of-range values are clamped. */
export function viridis(u: number): string {
  if (Number.isNaN(u)) return "#bbbbbb";
  const clamped = Math.min(1, Math.max(0, u));
  const scaled = clamped * (STOPS.length - 1);
  const lo = Math.min(STOPS.length - 2, Math.floor(scaled));
  const frac = scaled - lo;
  const [r0, g0, b0] = STOPS[lo];
  const [r1, g1, b1] = STOPS[lo + 1];
  return (
    "#" +
    hex2(r0 + frac * (r1 - r0)) +
    hex2(g0 + frac * (g1 - g0)) +
    hex2(b0 + frac * (b1 - b0))
  );
}

export const SERIES_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];
