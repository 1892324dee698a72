/**
 * Minimal PNG decoder for tests (8-bit gray/RGB/RGBA, non-interlaced):
 * enough to verify rendered map pixels without pulling in an image library.
 */

import { inflateSync } from "node:zlib";

export interface DecodedPng {
  width: number;
  height: number;
  channels: number;
  pixels: Uint8Array; // row-major, `channels` bytes per pixel
}

const SIGNATURE = [137, 80, 78, 71, 13, 10, 26, 10];

export function decodePng(data: Uint8Array): DecodedPng {
  for (let i = 0; i < 8; i++) {
    if (data[i] !== SIGNATURE[i]) {
      throw new Error("not a PNG file");
    }
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  let pos = 8;
  let width = 0;
  let height = 0;
  let colorType = -1;
  const idat: Buffer[] = [];
  while (pos + 8 <= data.length) {
    const length = view.getUint32(pos);
    const type = String.fromCharCode(data[pos + 4], data[pos + 5], data[pos + 6], data[pos + 7]);
    if (type === "IHDR") {
      width = view.getUint32(pos + 8);
      height = view.getUint32(pos + 12);
      const bitDepth = data[pos + 16];
      colorType = data[pos + 17];
      const interlace = data[pos + 20];
      if (bitDepth !== 8 || ![0, 2, 6].includes(colorType) || interlace !== 0) {
        throw new Error(`unsupported PNG layout: depth ${bitDepth}, color ${colorType}`);
      }
    } else if (type === "IDAT") {
      idat.push(Buffer.from(data.subarray(pos + 8, pos + 8 + length)));
    } else if (type === "IEND") {
      break;
    }
    pos += 12 + length;
  }
  const channels = colorType === 2 ? 3 : colorType === 6 ? 4 : 1;
  const raw = inflateSync(Buffer.concat(idat));
  const stride = width * channels;
  const pixels = new Uint8Array(stride * height);
  let rp = 0;
  for (let y = 0; y < height; y++) {
    const filter = raw[rp++];
    const row = pixels.subarray(y * stride, (y + 1) * stride);
    const prev = y > 0 ? pixels.subarray((y - 1) * stride, y * stride) : null;
    for (let x = 0; x < stride; x++) {
      const value = raw[rp + x];
      const left = x >= channels ? row[x - channels] : 0;
      const up = prev ? prev[x] : 0;
      const upLeft = prev && x >= channels ? prev[x - channels] : 0;
      let out: number;
      switch (filter) {
        case 0:
          out = value;
          break;
        case 1:
          out = value + left;
          break;
        case 2:
          out = value + up;
          break;
        case 3:
          out = value + ((left + up) >> 1);
          break;
        case 4: {
          const p = left + up - upLeft;
          const pa = Math.abs(p - left);
          const pb = Math.abs(p - up);
          const pc = Math.abs(p - upLeft);
          out = value + (pa <= pb && pa <= pc ? left : pb <= pc ? up : upLeft);
          break;
        }
        default:
          throw new Error(`unknown PNG filter ${filter}`);
      }
      row[x] = out & 0xff;
    }
    rp += stride;
  }
  return { width, height, channels, pixels };
}

/** True when every RGB sample is zero (alpha ignored). */
export function isAllBlack(png: DecodedPng): boolean {
  const colorChannels = png.channels === 4 ? 3 : png.channels;
  for (let i = 0; i < png.pixels.length; i += png.channels) {
    for (let c = 0; c < colorChannels; c++) {
      if (png.pixels[i + c] !== 0) {
        return false;
      }
    }
  }
  return true;
}
