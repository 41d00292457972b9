export { empiricalCdf, groupCdfs } from "./cdf.js";
export { loadRows, resolveInput, EXPECTED_COLUMNS } from "./csv.js";
export { plotCdf, readEmbeddedSeries, buildPayload, PAYLOAD_KEY } from "./render.js";
export type { PlotSpec, Row, Series, SeriesPayload } from "./types.js";
