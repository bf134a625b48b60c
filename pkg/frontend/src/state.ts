/** Console state plus stale-response protection: at most one in-flight
 * query wins; answers to superseded requests are dropped. */
import type { QueryResponse } from "./api.js";

export interface ConsoleState {
  queryText: string;
  selectedPlayer: string;
  lastResponse: QueryResponse | null;
  histogramGroup: string | null;
}

export function initialState(): ConsoleState {
  return {
    queryText: "",
    selectedPlayer: "",
    lastResponse: null,
    histogramGroup: null,
  };
}

export class RequestSequencer {
  private issued = 0;
  private accepted = 0;

  begin(): number {
    this.issued += 1;
    return this.issued;
  }

  /** True when `id` is still the newest request; older answers are stale. */
  accept(id: number): boolean {
    if (id < this.issued || id <= this.accepted) {
      return false;
    }
    this.accepted = id;
    return true;
  }
}
