// Latest-value mailbox between the socket and the render loop: the
// renderer only ever draws the newest state, never a backlog.

import type { SceneState } from "./protocol.js";

export type ConnectionStatus =
  | "connecting"
  | "connected"
  | "reconnecting"
  | "version-mismatch";

export class ViewModel {
  state: SceneState | null = null;
  status: ConnectionStatus = "connecting";
  banner: string | null = null;
  dropped = 0;
  onchange: (() => void) | null = null;

  private bump(): void {
    this.onchange?.();
  }

  setState(state: SceneState): void {
    this.state = state;
    this.bump();
  }

  setStatus(status: ConnectionStatus, banner: string | null = null): void {
    this.status = status;
    this.banner = banner;
    this.bump();
  }

  countDropped(): void {
    this.dropped++;
    this.bump();
  }
}
