/** Workflow state machine: asset class, then symbol, then date range, then
 * measures, then results. A step only advances once the prior selection is
 * valid, so the results step can never be reached without a complete
 * (class, symbol, range, measure) tuple. */

import type { AssetClassKey } from "./types.js";

export type Step = "class" | "symbol" | "range" | "measure" | "results";

const ORDER: Step[] = ["class", "symbol", "range", "measure", "results"];

export interface Selections {
  assetClass: AssetClassKey | null;
  symbol: string | null;
  from: string | null;
  to: string | null;
  measures: string[];
}

export class WorkflowState {
  step: Step = "class";
  selections: Selections = { assetClass: null, symbol: null, from: null, to: null, measures: [] };
  overlayedModels: string[] = [];

  chooseClass(assetClass: AssetClassKey): void {
    this.selections = { assetClass, symbol: null, from: null, to: null, measures: [] };
    this.overlayedModels = [];
    this.step = "symbol";
  }

  chooseSymbol(symbol: string): void {
    this.requireAtLeast("symbol");
    if (!symbol) throw new Error("symbol must be non-empty");
    this.selections.symbol = symbol;
    this.step = "range";
  }

  chooseRange(from: string, to: string): void {
    this.requireAtLeast("range");
    if (!from || !to || from > to) throw new Error(`invalid date range ${from}..${to}`);
    this.selections.from = from;
    this.selections.to = to;
    this.step = "measure";
  }

  toggleMeasure(name: string): void {
    this.requireAtLeast("measure");
    const ms = this.selections.measures;
    const at = ms.indexOf(name);
    if (at >= 0) ms.splice(at, 1);
    else ms.push(name);
  }

  /** Advance to results; requires at least one selected measure. */
  showResults(): void {
    this.requireAtLeast("measure");
    if (this.selections.measures.length === 0) {
      throw new Error("select at least one measure first");
    }
    this.step = "results";
  }

  /** Measures added from the results view extend the chart without leaving it. */
  addComparisonMeasure(name: string): void {
    if (this.step !== "results") throw new Error("comparison measures are added from the results view");
    if (!this.selections.measures.includes(name)) this.selections.measures.push(name);
  }

  addOverlay(fitId: string): void {
    if (this.step !== "results") throw new Error("estimate from the results view");
    if (!this.overlayedModels.includes(fitId)) this.overlayedModels.push(fitId);
  }

  removeOverlay(fitId: string): void {
    this.overlayedModels = this.overlayedModels.filter((f) => f !== fitId);
  }

  backTo(step: Step): void {
    if (ORDER.indexOf(step) >= ORDER.indexOf(this.step)) {
      throw new Error(`can only go back, not from ${this.step} to ${step}`);
    }
    this.step = step;
  }

  get resultsReady(): boolean {
    const s = this.selections;
    return Boolean(s.assetClass && s.symbol && s.from && s.to && s.measures.length > 0);
  }

  private requireAtLeast(step: Step): void {
    if (ORDER.indexOf(this.step) < ORDER.indexOf(step)) {
      throw new Error(`complete the ${this.step} step first`);
    }
  }
}
