/** Measure names served by the variance endpoints, in display order. */

export const MEASURE_NAMES = [
  "pr", "gkr", "rr5",
  "rv1", "rv5", "rv5_ss",
  "rq1", "rq5", "rq5_ss",
  "bv1", "bv5", "bv5_ss",
  "rsp1", "rsp5", "rsp5_ss",
  "rsn1", "rsn5", "rsn5_ss",
  "medrv1", "medrv5", "medrv5_ss",
  "minrv1", "minrv5", "minrv5_ss",
  "rk",
] as const;
