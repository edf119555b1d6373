export {
  column,
  CsvError,
  parseSeriesCsv,
  readSeriesFile,
  type SeriesFile,
} from "./csv.js";
export {
  FigureError,
  figureJobSchema,
  figureStyles,
  normalizations,
  validateJob,
  type FigureInput,
  type FigureJob,
  type FigureStyle,
  type Normalization,
} from "./figure.js";
export {
  defaultPeakSearch,
  designatedPeakBin,
  normalizeFirstPeak,
  type Curve,
  type NormalizedCurves,
  type PeakSearch,
} from "./normalize.js";
export {
  buildFigure,
  render,
  SPECTRUM_AXIS_MAX_THZ,
} from "./render.js";
export { PALETTE, renderPlot, type PlotSeries, type PlotOptions } from "./svg.js";
