// Browser entry point: connect, render the latest state, wire controls.
// Server URL via ?server=ws://host:port/ws, loopback default.

import { bindControls } from "./controls.js";
import { CanvasRaster } from "./raster.js";
import { renderScene } from "./scene.js";
import { BridgeSocket } from "./socket.js";
import { ViewModel } from "./viewmodel.js";

const DEFAULT_URL = "ws://127.0.0.1:8777/ws";

function serverUrl(): string {
  const param = new URLSearchParams(window.location.search).get("server");
  return param ?? DEFAULT_URL;
}

function text(id: string, value: string): void {
  const el = document.getElementById(id);
  if (el) el.textContent = value;
}

function main(): void {
  const canvas = document.getElementById("scene") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas unavailable");
  const raster = new CanvasRaster(ctx, canvas.width, canvas.height);

  const vm = new ViewModel();
  const socket = new BridgeSocket(serverUrl(), vm);

  vm.onchange = () => {
    const banner = document.getElementById("banner");
    if (banner) {
      banner.textContent = vm.banner ?? "";
      banner.hidden = vm.banner === null;
    }
    text("status", vm.status);
    document.body.dataset.status = vm.status;
    if (vm.state) {
      text("season", vm.state.season);
      text("readout", `${vm.state.temperature_c.toFixed(1)} °C · ` +
        `${vm.state.humidity_pct.toFixed(0)} % RH`);
      text("dropped", vm.dropped ? `${vm.dropped} dropped` : "");
    }
  };

  bindControls(document, socket);
  socket.connect();

  const frame = (timeMs: number): void => {
    if (vm.state) {
      renderScene(vm.state, raster, timeMs);
    }
    window.requestAnimationFrame(frame);
  };
  window.requestAnimationFrame(frame);
}

main();
