/** Payload shapes of the measures service. */

export type AssetClassKey = "stocks" | "exchange_rates" | "futures";

export interface AssetEntry {
  symbol: string;
  name: string;
  sector: string | null;
  first_date: string | null;
  first_stored: string | null;
  last_stored: string | null;
}

export type Catalogue = Record<AssetClassKey, AssetEntry[]>;

export interface SeriesRow {
  date: string;
  values: Record<string, number>;
  annualized: Record<string, number>;
}

export interface SeriesResponse {
  symbol: string;
  rows: SeriesRow[];
}

export interface SummaryStats {
  avg_vol: number | null;
  vol_of_vol: number | null;
  avg_return: number | null;
  avg_volume: number | null;
}

export interface ParameterRow {
  name: string;
  estimate: number;
  std_error: number | null;
  z: number | null;
  p_value: number | null;
}

export interface FitReport {
  family: string;
  measure: string;
  scale: string;
  n_obs: number;
  parameters: ParameterRow[];
  r_squared: number | null;
  loglik: number | null;
  sigma2_hat: number | null;
  diagnostics: Record<string, number>;
  fitted_dates: string[];
  annualized_fitted: (number | null)[];
}

export interface ForecastReport {
  horizon: number;
  point: number[];
  ci_low: number[];
  ci_high: number[];
  actuals: number[];
  mse: number;
  qlike: number | null;
  dates: string[];
  annualized: { point: number[]; ci_low: number[]; ci_high: number[] };
}

export interface EstimateResponse {
  fit: FitReport;
  forecast: ForecastReport | null;
  notice: string | null;
}

export const MODEL_FAMILIES = ["har", "harq", "mem11", "amem11", "amem21"] as const;
export type ModelFamily = (typeof MODEL_FAMILIES)[number];

export const MODEL_LABELS: Record<ModelFamily, string> = {
  har: "HAR",
  harq: "HAR-Q",
  mem11: "MEM(1,1)",
  amem11: "AMEM(1,1)",
  amem21: "AMEM(2,1)",
};
