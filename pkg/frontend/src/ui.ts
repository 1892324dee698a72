/** DOM rendering helpers. All data comes from service responses. */

import type { ImageRecord, MemorySnapshot, SegmentRecord } from "./api.js";
import { patternSwatchColor } from "./pattern.js";

export function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

export function setBanner(message: string | null): void {
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

export function renderPanels(record: ImageRecord, absolute: (p: string) => string): void {
  const panels: Array<[string, string]> = [
    ["panel-original", "original"],
    ["panel-segmentation", "segmentation"],
    ["panel-novelty", "novelty"],
    ["panel-overlay", "overlay"],
  ];
  for (const [elementId, key] of panels) {
    const img = el<HTMLImageElement>(elementId);
    const url = record.map_urls[key];
    if (url) {
      img.src = absolute(url);
      img.style.visibility = "visible";
    } else {
      img.removeAttribute("src");
      img.style.visibility = "hidden";
    }
  }
  el<HTMLSpanElement>("result-title").textContent =
    `image #${record.image_index} (${record.segment_count} segments)`;
}

function segmentRow(seg: SegmentRecord): HTMLTableRowElement {
  const row = document.createElement("tr");
  const mean = `${seg.mean_h.toFixed(3)} / ${seg.mean_s.toFixed(3)} / ${seg.mean_i.toFixed(3)}`;
  const energy = seg.energy === undefined ? "-" : seg.energy.toFixed(3);
  const verdict = seg.novel === undefined ? "-" : seg.novel ? "NOVEL" : "familiar";
  const swatch = seg.pattern ? patternSwatchColor(seg.pattern) : "transparent";
  row.innerHTML =
    `<td><span class="swatch" style="background:${swatch}"></span>${seg.segment_id}</td>` +
    `<td>${seg.pixel_count}</td><td>${mean}</td><td>${energy}</td>` +
    `<td class="${seg.novel ? "novel" : ""}">${verdict}</td>`;
  return row;
}

export function renderSegmentTable(record: ImageRecord): void {
  const body = el<HTMLTableSectionElement>("segment-rows");
  body.replaceChildren(...record.segments.map(segmentRow));
}

export function renderMemoryPanel(snapshot: MemorySnapshot, stale: boolean): void {
  el<HTMLSpanElement>("memory-count").textContent = String(snapshot.stored_count);
  el<HTMLSpanElement>("memory-stale").style.display = stale ? "inline" : "none";
  const box = el<HTMLDivElement>("memory-swatches");
  const swatches = (snapshot.patterns ?? []).map((bits) => {
    const s = document.createElement("span");
    s.className = "swatch big";
    s.style.background = patternSwatchColor(bits);
    s.title = bits;
    return s;
  });
  box.replaceChildren(...swatches);
}

export function renderHistory(history: ImageRecord[], selected: number | null,
                              absolute: (p: string) => string,
                              onSelect: (index: number) => void): void {
  const strip = el<HTMLDivElement>("history-strip");
  const thumbs = history.map((record, index) => {
    const img = document.createElement("img");
    img.className = "thumb" + (index === selected ? " selected" : "");
    img.src = absolute(record.map_urls["original"] ?? record.map_urls["segmentation"]);
    img.title = `image #${record.image_index}`;
    img.onclick = () => onSelect(index);
    return img;
  });
  strip.replaceChildren(...thumbs);
}
