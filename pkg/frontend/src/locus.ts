/**
 * Published fitted optimal-chirp loci beta_plus(beta_minus), in ns^2.
 *
 * Overlay data only: the two amplitude cases are the exponential pair
 * 415 exp(-+b/91) + 32.5 (amp = pi) and the piecewise logistic form with an
 * identity middle branch on (-113, 113) ns^2 (amp = 1.75 pi). Values match
 * the simulator's own evaluation; nothing is recomputed from physics.
 */

export type LocusCase = "pi" | "1.75pi";

export interface Branch {
  lo: number;
  hi: number;
  f: (b: number) => number;
}

export function locusBranches(kind: LocusCase): Branch[] {
  if (kind === "pi") {
    return [
      { lo: -1000, hi: -1e-9, f: (b) => 415 * Math.exp(-b / 91) + 32.5 },
      { lo: 1e-9, hi: 1000, f: (b) => -415 * Math.exp(b / 91) + 32.5 },
    ];
  }
  const y1 = (b: number) => 157.44 / (1 + Math.pow(10, 0.0074 * (-321.6 - b)));
  const y2 = (b: number) => -1040.44 / (1 + Math.pow(10, 0.025 * (-167 - b)));
  return [
    { lo: -1000 + 1e-9, hi: -113 - 1e-9, f: (b) => 163 + y1(b) + y2(b) },
    { lo: -113 + 1e-9, hi: 113 - 1e-9, f: (b) => b },
    { lo: 113 + 1e-9, hi: 1000 - 1e-9, f: (b) => -(163 + y1(b) + y2(b)) },
  ];
}

export function evalLocus(kind: LocusCase, betaMinus: number): number {
  for (const branch of locusBranches(kind)) {
    if (betaMinus >= branch.lo && betaMinus <= branch.hi) {
      return branch.f(betaMinus);
    }
  }
  throw new Error(`beta_minus=${betaMinus} ns^2 outside the fitted branches`);
}
