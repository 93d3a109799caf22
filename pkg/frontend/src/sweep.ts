// What-if sweeps: vary Miles or the listing month across a range and
// batch every step into a single multi-record scoring request.

import type { ScoreRecord } from "./api";

export type SweepAxis = "Miles" | "Date";

export interface WhatIfQuery {
  model: string;
  year: string;
  battery: string;
  miles: string;
  date?: string;
}

export interface SweepSpec {
  axis: SweepAxis;
  start: number; // miles, or month offset from the base date
  end: number;
  step: number;
}

export const MAX_SWEEP_POINTS = 200;

export function sweepValues(spec: SweepSpec): number[] {
  const { start, end, step } = spec;
  if (!Number.isFinite(start) || !Number.isFinite(end) || !Number.isFinite(step)) {
    throw new Error("sweep range must be finite");
  }
  if (step <= 0) throw new Error("sweep step must be positive");
  if (end < start) throw new Error("sweep end must not precede start");
  const count = Math.floor((end - start) / step) + 1;
  if (count > MAX_SWEEP_POINTS) {
    throw new Error(`sweep would need ${count} points; the limit is ${MAX_SWEEP_POINTS}`);
  }
  return Array.from({ length: count }, (_, i) => start + i * step);
}

export function addMonths(isoDate: string, months: number): string {
  const match = /^(\d{4})-(\d{2})(?:-(\d{2}))?$/.exec(isoDate);
  if (!match) throw new Error(`Date must be YYYY-MM-DD, got ${isoDate}`);
  const total = Number(match[1]) * 12 + (Number(match[2]) - 1) + months;
  const year = Math.floor(total / 12);
  const month = (total % 12) + 1;
  const day = match[3] ?? "01";
  return `${String(year).padStart(4, "0")}-${String(month).padStart(2, "0")}-${day}`;
}

function baseRecord(query: WhatIfQuery): ScoreRecord {
  const record: ScoreRecord = {
    Model: query.model,
    Year: query.year,
    Battery: query.battery,
    Price: "0", // the target is never an input; the service echoes it back
    Miles: query.miles,
  };
  if (query.date) record.Date = query.date;
  return record;
}

export function buildQueryRecord(query: WhatIfQuery): ScoreRecord {
  return baseRecord(query);
}

/** One record per sweep step, all other fields held fixed. */
export function buildSweepRecords(query: WhatIfQuery, spec: SweepSpec): ScoreRecord[] {
  const values = sweepValues(spec);
  return values.map((value) => {
    const record = baseRecord(query);
    if (spec.axis === "Miles") {
      record.Miles = String(value);
    } else {
      if (!query.date) throw new Error("a Date sweep needs a base Date");
      record.Date = addMonths(query.date, value);
    }
    return record;
  });
}

/** The x coordinate each sweep record plots at. */
export function sweepAxisValue(axis: SweepAxis, record: ScoreRecord, base: WhatIfQuery): number {
  if (axis === "Miles") return Number(record.Miles);
  if (!record.Date || !base.date) throw new Error("Date sweep records must carry a Date");
  const toMonths = (iso: string) => Number(iso.slice(0, 4)) * 12 + Number(iso.slice(5, 7));
  return toMonths(record.Date) - toMonths(base.date);
}
