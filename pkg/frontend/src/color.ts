// Stable politician -> palette mapping so the same speaker always renders
// with the same color, and topic badges stay readable.

export const PALETTE_SIZE = 8;

export function hashString(value: string): number {
  let h = 2166136261;
  for (let i = 0; i < value.length; i++) {
    h ^= value.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

export function politicianColorIndex(name: string): number {
  return hashString(name) % PALETTE_SIZE;
}
