// Steering controls: sliders are the virtual hands warming the sensor,
// the lighter button is momentary (flame on while held).

import type { BridgeSocket } from "./socket.js";

export function bindControls(root: Document, socket: BridgeSocket): void {
  const temperature = root.getElementById("temperature") as HTMLInputElement | null;
  const humidity = root.getElementById("humidity") as HTMLInputElement | null;
  const lighter = root.getElementById("lighter") as HTMLButtonElement | null;

  temperature?.addEventListener("input", () => {
    socket.steer("temperature", Number(temperature.value));
    const label = root.getElementById("temperature-value");
    if (label) label.textContent = `${temperature.value} °C`;
  });

  humidity?.addEventListener("input", () => {
    socket.steer("humidity", Number(humidity.value));
    const label = root.getElementById("humidity-value");
    if (label) label.textContent = `${humidity.value} %`;
  });

  if (lighter) {
    const down = () => {
      lighter.classList.add("held");
      socket.steer("flame", 1);
    };
    const up = () => {
      lighter.classList.remove("held");
      socket.steer("flame", 0);
    };
    lighter.addEventListener("pointerdown", down);
    lighter.addEventListener("pointerup", up);
    lighter.addEventListener("pointerleave", up);
    lighter.addEventListener("pointercancel", up);
  }
}
