// Multi-value cells: the segment under the caret gets its own completion
// context, so typing the delimiter starts a fresh query without touching the
// committed part of the cell.

export interface Segment {
  start: number; // inclusive offset into the raw text
  end: number; // exclusive
  text: string; // trimmed value
}

export function splitSegments(raw: string, delimiter: string): Segment[] {
  const segments: Segment[] = [];
  let start = 0;
  let inQuotes = false;
  for (let i = 0; i <= raw.length; i++) {
    const ch = raw[i];
    if (ch === '"') inQuotes = !inQuotes;
    if (i === raw.length || (ch === delimiter && !inQuotes)) {
      segments.push({ start, end: i, text: raw.slice(start, i).trim() });
      start = i + 1;
    }
  }
  return segments;
}

export function activeSegment(raw: string, caret: number, delimiter: string): Segment {
  const segments = splitSegments(raw, delimiter);
  for (const segment of segments) {
    if (caret <= segment.end) return segment;
  }
  return segments[segments.length - 1];
}

/** Replace the active segment with a chosen value, preserving the rest. */
export function replaceSegment(raw: string, segment: Segment, value: string): string {
  const before = raw.slice(0, segment.start);
  const after = raw.slice(segment.end);
  const lead = segment.start > 0 ? " " : "";
  return before + lead + value + after;
}
