/** Exact rational coordinate strings on the editor lattice.
 *
 * The drawing file format carries coordinates as rational strings.  The
 * editor only ever *creates* coordinates on a lattice with denominator
 * 2^16, stored as integer lattice units (safe in a double up to 2^53),
 * so hand-drawn documents stay exact; coordinates loaded from a file are
 * kept verbatim unless the user moves them.
 */

export const LATTICE = 65536;

const RATIONAL_RE = /^[+-]?\d+(\/\d+)?$/;

export function isRational(text: string): boolean {
  if (!RATIONAL_RE.test(text)) return false;
  const slash = text.indexOf("/");
  return slash < 0 || Number(text.slice(slash + 1)) !== 0;
}

/** Approximate numeric value for rendering. */
export function toNumber(text: string): number {
  const slash = text.indexOf("/");
  if (slash < 0) return Number(text);
  return Number(text.slice(0, slash)) / Number(text.slice(slash + 1));
}

function gcd(a: number, b: number): number {
  a = Math.abs(a);
  b = Math.abs(b);
  while (b) {
    [a, b] = [b, a % b];
  }
  return a || 1;
}

/** Exact rational string for a lattice coordinate (units of 1/LATTICE). */
export function latticeToRational(units: number): string {
  if (!Number.isInteger(units)) throw new Error(`non-integer lattice units ${units}`);
  const g = gcd(units, LATTICE);
  const num = units / g;
  const den = LATTICE / g;
  return den === 1 ? String(num) : `${num}/${den}`;
}

/** Snap an arbitrary screen-space value to the lattice. */
export function snapToLattice(value: number): number {
  return Math.round(value * LATTICE);
}

/** Lattice units for a rational string when it lies on the lattice exactly,
 * otherwise null (the coordinate is kept as an opaque exact string). */
export function rationalToLattice(text: string): number | null {
  const slash = text.indexOf("/");
  const num = Number(slash < 0 ? text : text.slice(0, slash));
  const den = slash < 0 ? 1 : Number(text.slice(slash + 1));
  if (!Number.isInteger(num) || !Number.isInteger(den) || den <= 0) return null;
  if (LATTICE % den !== 0) return null;
  const units = num * (LATTICE / den);
  return Number.isSafeInteger(units) ? units : null;
}
