import { AggregateResponse, RankingsResponse } from "./api.js";

export interface SourceCell {
  source: string;
  known: number | null;
  extended: number;
}

export interface TableRow {
  /** 1-based average position; ties share a fractional value like 1.5. */
  rank: number;
  item: string;
  rawScore: number;
  perSource: SourceCell[];
}

/**
 * Join an aggregate response with the per-source known/extended ranks into
 * display rows, best consensus rank first.
 */
export function buildTableRows(
  aggregate: AggregateResponse,
  rankings: RankingsResponse,
  sources: string[],
): TableRow[] {
  const bySource = new Map(rankings.items.map((row) => [row.item, row]));
  const n = aggregate.order.length;
  return aggregate.order.map((item) => {
    const info = bySource.get(item);
    return {
      rank: aggregate.ranks[item] * (n + 1),
      item,
      rawScore: aggregate.raw_scores[item],
      perSource: sources.map((source) => ({
        source,
        known: info ? info.known[source] : null,
        extended: info ? info.extended[source] : NaN,
      })),
    };
  });
}

export function formatRank(rank: number): string {
  const rounded = Math.round(rank * 2) / 2;
  return Number.isInteger(rounded) ? String(rounded) : rounded.toFixed(1);
}

export function formatRho(rho: number): string {
  return rho.toFixed(4);
}
