/** Number formatting that byte-matches the backend's report serialization:
 * shortest-form significant-digit output with C-style exponents. */

/** Format with up to `digits` significant digits, trimming trailing zeros,
 * using two-digit signed exponents (e.g. "2.5e-05") past the fixed range. */
export function formatSig(value: number, digits = 6): string {
  if (!Number.isFinite(value)) return String(value);
  if (value === 0) return "0";
  const exp = Math.floor(Math.log10(Math.abs(value)));
  if (exp < -4 || exp >= digits) {
    const [mantissa, e] = value.toExponential(digits - 1).split("e") as [
      string,
      string,
    ];
    const m = trimZeros(mantissa);
    const eNum = parseInt(e, 10);
    const sign = eNum < 0 ? "-" : "+";
    return `${m}e${sign}${String(Math.abs(eNum)).padStart(2, "0")}`;
  }
  return trimZeros(value.toPrecision(digits));
}

function trimZeros(s: string): string {
  if (!s.includes(".")) return s;
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

/** The report CSV's float formatting: 10 significant digits. */
export function formatCsv(value: number | null): string {
  if (value === null) return "";
  return formatSig(value, 10);
}
