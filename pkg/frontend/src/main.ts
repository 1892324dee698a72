/** Console wiring: session controls, capture/upload, polling, rendering. */

import { ConsoleApi, ServiceError } from "./api.js";
import { ConsoleState } from "./state.js";
import { el, renderHistory, renderMemoryPanel, renderPanels, renderSegmentTable, setBanner } from "./ui.js";

const MEMORY_POLL_MS = 2000;

const state = new ConsoleState();
let api: ConsoleApi | null = null;
let memoryTimer: number | null = null;
let cameraStream: MediaStream | null = null;

function requireApi(): ConsoleApi {
  if (!api) {
    throw new Error("not connected");
  }
  return api;
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    return `${err.kind}: ${err.message}`;
  }
  return err instanceof Error ? err.message : String(err);
}

function renderSelected(): void {
  const record = state.selected;
  if (!record || !api) {
    return;
  }
  renderPanels(record, (p) => requireApi().absolute(p));
  renderSegmentTable(record);
  renderHistory(state.history, state.selectedIndex,
                (p) => requireApi().absolute(p),
                (index) => {
                  // History replay: re-render exactly the stored record.
                  if (state.selectResult(index)) {
                    renderSelected();
                  }
                });
}

async function refreshMemory(): Promise<void> {
  if (!api || !state.sessionId) {
    return;
  }
  try {
    renderMemoryPanel(await api.getMemory(state.sessionId), false);
  } catch {
    el<HTMLSpanElement>("memory-stale").style.display = "inline";
  }
}

async function newSession(): Promise<void> {
  const service = requireApi();
  const theta = Number(el<HTMLInputElement>("theta-slider").value);
  const mode = el<HTMLSelectElement>("mode-select").value as "novelty" | "interest" | "both";
  try {
    const info = await service.createSession({ theta_deg: theta, mode });
    state.startSession(info);
    el<HTMLSpanElement>("session-id").textContent = info.id;
    el<HTMLTableSectionElement>("segment-rows").replaceChildren();
    el<HTMLDivElement>("history-strip").replaceChildren();
    setBanner(null);
    await refreshMemory();
  } catch (err) {
    setBanner(`could not create session: ${describe(err)}`);
  }
}

async function uploadBytes(bytes: Blob): Promise<void> {
  const service = requireApi();
  if (!state.beginUpload()) {
    return;
  }
  const button = el<HTMLButtonElement>("capture-button");
  const picker = el<HTMLInputElement>("file-input");
  button.disabled = picker.disabled = true;
  try {
    const record = await service.submitImage(state.sessionId!, bytes);
    state.completeUpload(record);
    setBanner(null);
    renderSelected();
    await refreshMemory();
  } catch (err) {
    state.failUpload(describe(err));
    setBanner(`upload failed: ${describe(err)}`);
  } finally {
    button.disabled = picker.disabled = false;
  }
}

async function onThetaCommit(): Promise<void> {
  const theta = Number(el<HTMLInputElement>("theta-slider").value);
  const applyToCurrent = el<HTMLInputElement>("apply-current").checked;
  if (applyToCurrent && state.sessionId) {
    try {
      // Override on the live session; the service logs it. Memory semantics
      // change with segmentation, which is why a new session is the default.
      const info = await requireApi().updateConfig(state.sessionId, { theta_deg: theta });
      state.applyConfigEcho(info.config);
      setBanner(null);
    } catch (err) {
      setBanner(`config update failed: ${describe(err)}`);
    }
  } else {
    await newSession();
  }
}

async function toggleCamera(): Promise<void> {
  const video = el<HTMLVideoElement>("camera-preview");
  if (cameraStream) {
    cameraStream.getTracks().forEach((t) => t.stop());
    cameraStream = null;
    video.style.display = "none";
    el<HTMLButtonElement>("camera-button").textContent = "Start camera";
    return;
  }
  try {
    cameraStream = await navigator.mediaDevices.getUserMedia({ video: true });
    video.srcObject = cameraStream;
    video.style.display = "block";
    await video.play();
    el<HTMLButtonElement>("camera-button").textContent = "Stop camera";
  } catch (err) {
    setBanner(`camera unavailable: ${describe(err)}`);
  }
}

function captureFrame(): void {
  const video = el<HTMLVideoElement>("camera-preview");
  if (!cameraStream || video.videoWidth === 0) {
    setBanner("start the camera first, or pick a file");
    return;
  }
  const canvas = document.createElement("canvas");
  canvas.width = video.videoWidth;
  canvas.height = video.videoHeight;
  canvas.getContext("2d")!.drawImage(video, 0, 0);
  canvas.toBlob((blob) => {
    if (blob) {
      void uploadBytes(blob);
    }
  }, "image/png");
}

function connect(): void {
  const base = el<HTMLInputElement>("service-url").value.trim();
  api = new ConsoleApi(base);
  if (memoryTimer !== null) {
    window.clearInterval(memoryTimer);
  }
  memoryTimer = window.setInterval(() => void refreshMemory(), MEMORY_POLL_MS);
  void newSession();
}

export function init(): void {
  el<HTMLButtonElement>("connect-button").onclick = () => connect();
  el<HTMLButtonElement>("new-session-button").onclick = () => void newSession();
  el<HTMLButtonElement>("reset-button").onclick = async () => {
    if (!api || !state.sessionId) {
      return;
    }
    try {
      await api.resetMemory(state.sessionId);
      await refreshMemory();
    } catch (err) {
      setBanner(`reset failed: ${describe(err)}`);
    }
  };
  el<HTMLInputElement>("file-input").onchange = (event) => {
    const files = (event.target as HTMLInputElement).files;
    if (files && files[0]) {
      void uploadBytes(files[0]);
    }
  };
  const slider = el<HTMLInputElement>("theta-slider");
  slider.oninput = () => {
    el<HTMLSpanElement>("theta-value").textContent = slider.value;
  };
  slider.onchange = () => void onThetaCommit();
  el<HTMLButtonElement>("camera-button").onclick = () => void toggleCamera();
  el<HTMLButtonElement>("capture-button").onclick = () => captureFrame();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", init);
}
