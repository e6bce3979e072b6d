export {
  CONVERGENCE_COLUMNS,
  HISTOGRAM_COLUMNS,
  SUMMARY_COLUMNS,
  SchemaError,
  parseCsv,
  readTable,
} from "./csv.js";
export { FigureKind, FigureSpec, inferBinWidth, renderFigure } from "./figures.js";
export { main } from "./cli.js";
