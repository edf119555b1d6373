/** One spectrum curve keyed by its legend role. */
export interface Curve {
  role: string;
  path: string;
  freqs: number[];
  amps: number[];
}

/** Where to look for the designated peak and how tall it must be. */
export interface PeakSearch {
  minFreqThz: number;
  maxFreqThz: number;
  prominenceFrac: number;
}

export const defaultPeakSearch: PeakSearch = {
  minFreqThz: 0.8,
  maxFreqThz: 6.0,
  prominenceFrac: 0.1,
};

/**
 * Designated peak bin: the lowest-frequency local maximum in the search band
 * that is at least `prominenceFrac` of the tallest local maximum there.
 * The floor skips leakage ripple without missing the tallest line itself.
 */
export function designatedPeakBin(
  freqs: number[],
  amps: number[],
  search: PeakSearch = defaultPeakSearch,
): number {
  const maxima: number[] = [];
  for (let i = 1; i < amps.length - 1; i++) {
    if (freqs[i] < search.minFreqThz || freqs[i] > search.maxFreqThz) continue;
    if (amps[i] > amps[i - 1] && amps[i] >= amps[i + 1]) maxima.push(i);
  }
  if (maxima.length === 0) {
    throw new Error(
      `no local maximum between ${search.minFreqThz} and ${search.maxFreqThz} THz`,
    );
  }
  let tallest = 0;
  for (const i of maxima) tallest = Math.max(tallest, amps[i]);
  const floor = search.prominenceFrac * tallest;
  const bin = maxima.find((i) => amps[i] >= floor);
  if (bin === undefined) throw new Error("peak floor excluded every maximum");
  return bin;
}

export interface NormalizedCurves {
  bin: number;
  freqThz: number;
  curves: Curve[];
}

/**
 * Scale each curve by its own amplitude at the reference curve's designated
 * peak bin. Every scaled curve then reads exactly 1.0 at that bin, so the
 * overlaid amplitudes coincide to machine precision. The first curve is the
 * reference; all curves must share one frequency grid.
 */
export function normalizeFirstPeak(
  curves: Curve[],
  search: PeakSearch = defaultPeakSearch,
): NormalizedCurves {
  if (curves.length === 0) throw new Error("no curves to normalize");
  const ref = curves[0];
  for (const c of curves.slice(1)) {
    const same =
      c.freqs.length === ref.freqs.length &&
      c.freqs.every((f, i) => f === ref.freqs[i]);
    if (!same) {
      throw new Error(`frequency grids differ: ${ref.path} vs ${c.path}`);
    }
  }
  const bin = designatedPeakBin(ref.freqs, ref.amps, search);
  const scaled = curves.map((c) => {
    const scale = c.amps[bin];
    if (scale === 0) {
      throw new Error(`${c.path}: zero amplitude at the designated peak bin`);
    }
    return { ...c, amps: c.amps.map((a) => a / scale) };
  });
  return { bin, freqThz: ref.freqs[bin], curves: scaled };
}
