/**
 * Console state: one active session, its result history, and the selection.
 *
 * Invariants kept here: the selected result is always inside the history;
 * the config mirror only ever holds server-echoed values; at most one upload
 * is in flight (the session contract is strictly sequential).
 */

import type { ImageRecord, SessionConfig, SessionInfo } from "./api.js";

export class ConsoleState {
  sessionId: string | null = null;
  config: SessionConfig | null = null;
  history: ImageRecord[] = [];
  selectedIndex: number | null = null;
  uploadInFlight = false;
  lastError: string | null = null;

  startSession(info: SessionInfo): void {
    this.sessionId = info.id;
    this.config = info.config;
    this.history = [];
    this.selectedIndex = null;
    this.uploadInFlight = false;
    this.lastError = null;
  }

  /** Echo the server's view of the config (never set locally-guessed values). */
  applyConfigEcho(config: SessionConfig): void {
    this.config = config;
  }

  /** Acquire the upload lock; false means an upload is already running. */
  beginUpload(): boolean {
    if (this.uploadInFlight || this.sessionId === null) {
      return false;
    }
    this.uploadInFlight = true;
    return true;
  }

  completeUpload(record: ImageRecord): void {
    this.history.push(record);
    this.selectedIndex = this.history.length - 1;
    this.uploadInFlight = false;
    this.lastError = null;
  }

  failUpload(message: string): void {
    this.uploadInFlight = false;
    this.lastError = message;
  }

  /** Select a history entry; out-of-range indices are ignored. */
  selectResult(index: number): boolean {
    if (!Number.isInteger(index) || index < 0 || index >= this.history.length) {
      return false;
    }
    this.selectedIndex = index;
    return true;
  }

  get selected(): ImageRecord | null {
    if (this.selectedIndex === null) {
      return null;
    }
    return this.history[this.selectedIndex] ?? null;
  }
}
