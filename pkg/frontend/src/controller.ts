import { AggregateResponse, validateAggregateResponse } from "./api.js";
import { debounce, Debounced } from "./debounce.js";

export interface AggregateTransport {
  aggregate(weights: number[]): Promise<AggregateResponse>;
}

export interface ExplorerEvents {
  /** A newer-than-anything-applied response arrived. */
  onAggregate(response: AggregateResponse, weights: number[]): void;
  /** A request failed; the last good table should stay visible. */
  onError(message: string): void;
}

export const WEIGHT_MIN = 0;
export const WEIGHT_MAX = 3;
export const WEIGHT_STEP = 0.05;
export const DEBOUNCE_MS = 150;

/**
 * Holds the slider weights and serializes aggregate requests.
 *
 * Slider changes are debounced; every request carries a sequence number
 * and a response is applied only if no newer response has been applied,
 * so a slow early reply can never overwrite a fresh table.
 */
export class ExplorerController {
  readonly weights: number[];
  private nextSeq = 0;
  private appliedSeq = 0;
  private readonly scheduleSend: Debounced<[]>;

  constructor(
    private readonly transport: AggregateTransport,
    defaultWeights: number[],
    private readonly events: ExplorerEvents,
    debounceMs: number = DEBOUNCE_MS,
  ) {
    this.weights = [...defaultWeights];
    this.scheduleSend = debounce(() => {
      void this.send();
    }, debounceMs);
  }

  setWeight(expertIndex: number, value: number): void {
    if (expertIndex < 0 || expertIndex >= this.weights.length) {
      throw new Error(`no expert at index ${expertIndex}`);
    }
    this.weights[expertIndex] = value;
    this.scheduleSend();
  }

  /** Immediate request with the current weights (startup, retry). */
  async refresh(): Promise<void> {
    this.scheduleSend.cancel();
    await this.send();
  }

  private async send(): Promise<void> {
    const seq = ++this.nextSeq;
    const weights = [...this.weights];
    try {
      const body = await this.transport.aggregate(weights);
      const response = validateAggregateResponse(body);
      if (seq <= this.appliedSeq) {
        return; // stale: a newer response has already been applied
      }
      this.appliedSeq = seq;
      this.events.onAggregate(response, weights);
    } catch (error) {
      if (seq > this.appliedSeq) {
        this.events.onError(error instanceof Error ? error.message : String(error));
      }
    }
  }
}
