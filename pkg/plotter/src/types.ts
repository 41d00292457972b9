/** One parsed row of a run-directory CSV (results.csv or blocks.csv). */
export interface Row {
  drop: number;
  ue: number;
  class: string;
  strategy: string;
  precoder: string;
  policy: string;
  metric: string;
  value: number;
  seed: string;
}

/** What to plot. */
export interface PlotSpec {
  /** Run directory (containing results.csv/blocks.csv) or a single CSV file. */
  input: string;
  /** Which metric column values to pool per group, e.g. "sum_se" or "eps". */
  metric: string;
  /** Row keys that define a curve; defaults to strategy/precoder/policy. */
  groupBy?: (keyof Row)[];
  /** Output image path; extension selects the format (.png or .pdf). */
  out: string;
  logx?: boolean;
  /** Optional vertical reference line at this x (e.g. an error target). */
  vline?: number;
  xlabel?: string;
  ylabel?: string;
  width?: number;
  height?: number;
}

/** Empirical CDF of one group: y[i] is the fraction of samples <= x[i]. */
export interface Series {
  key: string;
  x: number[];
  y: number[];
}

/** The payload embedded verbatim into every rendered image. */
export interface SeriesPayload {
  metric: string;
  logx: boolean;
  vline: number | null;
  groups: Series[];
}
