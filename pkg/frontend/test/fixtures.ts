/** Canned service responses mirroring the HTTP schema. */

import type { Catalogue, EstimateResponse, SeriesResponse, SummaryStats } from "../src/types.js";

export const catalogue: Catalogue = {
  stocks: [
    {
      symbol: "MSFT",
      name: "Microsoft",
      sector: "Information Technology",
      first_date: "2015-01-02",
      first_stored: "2020-01-01",
      last_stored: "2023-03-01",
    },
    {
      symbol: "AAPL",
      name: "Apple Inc.",
      sector: "Information Technology",
      first_date: "2015-01-02",
      first_stored: "2020-01-01",
      last_stored: "2023-03-01",
    },
  ],
  exchange_rates: [
    {
      symbol: "EURUSD",
      name: "Euro / US dollar",
      sector: null,
      first_date: "2009-09-25",
      first_stored: "2020-01-01",
      last_stored: "2023-03-01",
    },
  ],
  futures: [],
};

const sampleDates = ["2022-01-03", "2022-01-04", "2022-01-05", "2022-01-06", "2022-01-07"];

export const series: SeriesResponse = {
  symbol: "MSFT",
  rows: sampleDates.map((date, i) => ({
    date,
    values: { rv1: 1e-4 + i * 1e-6, bv1: 0.9e-4 + i * 1e-6 },
    annualized: { rv1: 15 + i * 0.3, bv1: 14 + i * 0.3 },
  })),
};

export const summary: SummaryStats = {
  avg_vol: 15.6,
  vol_of_vol: 0.45,
  avg_return: 0.0003,
  avg_volume: 1_000_000,
};

export const estimateAmem21: EstimateResponse = {
  fit: {
    family: "amem21",
    measure: "rv1",
    scale: "annualized_vol",
    n_obs: 800,
    parameters: [
      { name: "omega", estimate: 0.55, std_error: 0.08, z: 6.9, p_value: 0.0 },
      { name: "alpha1", estimate: 0.54, std_error: 0.03, z: 18.0, p_value: 0.0 },
      { name: "alpha2", estimate: -0.36, std_error: 0.04, z: -9.0, p_value: 0.0 },
      { name: "beta1", estimate: 0.79, std_error: 0.03, z: 26.3, p_value: 0.0 },
      { name: "gamma1", estimate: 0.014, std_error: 0.008, z: 1.75, p_value: 0.08 },
    ],
    r_squared: null,
    loglik: -812.4,
    sigma2_hat: 0.24,
    diagnostics: {
      lags: 5,
      lb_stat: 4.1, lb_pvalue: 0.53,
      lb2_stat: 3.2, lb2_pvalue: 0.67,
      arch_stat: 3.4, arch_pvalue: 0.63,
    },
    fitted_dates: sampleDates.slice(0, 4),
    annualized_fitted: [15.1, 15.2, 15.4, 15.3],
  },
  forecast: {
    horizon: 5,
    point: [15.2, 15.3, 15.4, 15.4, 15.5],
    ci_low: [13.0, 13.1, 13.1, 13.2, 13.2],
    ci_high: [18.0, 18.1, 18.2, 18.2, 18.3],
    actuals: [15.4, 15.2, 15.6, 15.3, 15.5],
    mse: 0.021,
    qlike: 0.0001,
    dates: ["2022-01-10", "2022-01-11", "2022-01-12", "2022-01-13", "2022-01-14"],
    annualized: {
      point: [15.2, 15.3, 15.4, 15.4, 15.5],
      ci_low: [13.0, 13.1, 13.1, 13.2, 13.2],
      ci_high: [18.0, 18.1, 18.2, 18.2, 18.3],
    },
  },
  notice: null,
};

export const under750Detail =
  "estimation needs at least 750 observations of rv1; the window holds 220";

export function jsonResponse(body: unknown, status = 200) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: () => Promise.resolve(body),
  };
}
