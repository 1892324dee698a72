/**
 * Decode the 18-bit color patterns stored by the Hopfield memory back into
 * display colors for the memory panel: three 6-bit values (hue, saturation,
 * intensity, MSB-first) whose bin centers convert to RGB via the inverse of
 * the service's HSI formula.
 */

export function patternToBins(bits: string): [number, number, number] {
  if (!/^[01]{18}$/.test(bits)) {
    throw new Error(`expected an 18-character bitstring, got ${JSON.stringify(bits)}`);
  }
  const field = (start: number) => parseInt(bits.slice(start, start + 6), 2);
  return [field(0), field(6), field(12)];
}

/** Center of 6-bit bin q as a [0, 1] value. */
export function binCenter(q: number): number {
  return q / 63;
}

function sector(theta: number, s: number, i: number): [number, number] {
  const rad = (d: number) => (d * Math.PI) / 180;
  const low = i * (1 - s);
  const peak = i * (1 + (s * Math.cos(rad(theta))) / Math.cos(rad(60 - theta)));
  return [low, peak];
}

/** Inverse HSI conversion (sector formula), matching the service exactly. */
export function hsiToRgb(h: number, s: number, i: number): [number, number, number] {
  const theta = (((h % 1) + 1) % 1) * 360;
  let rr: number;
  let gg: number;
  let bb: number;
  if (theta < 120) {
    const [low, peak] = sector(theta, s, i);
    rr = peak;
    bb = low;
    gg = 3 * i - (rr + bb);
  } else if (theta < 240) {
    const [low, peak] = sector(theta - 120, s, i);
    gg = peak;
    rr = low;
    bb = 3 * i - (rr + gg);
  } else {
    const [low, peak] = sector(theta - 240, s, i);
    bb = peak;
    gg = low;
    rr = 3 * i - (gg + bb);
  }
  const to8 = (v: number) => Math.min(255, Math.max(0, Math.floor(v * 255 + 0.5)));
  return [to8(rr), to8(gg), to8(bb)];
}

/** CSS color of a stored pattern, via its quantized bin centers. */
export function patternSwatchColor(bits: string): string {
  const [qh, qs, qi] = patternToBins(bits);
  const [r, g, b] = hsiToRgb(binCenter(qh), binCenter(qs), binCenter(qi));
  return `rgb(${r}, ${g}, ${b})`;
}
