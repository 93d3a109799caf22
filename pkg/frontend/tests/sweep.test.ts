import { describe, expect, it } from "vitest";

import {
  addMonths,
  buildSweepRecords,
  sweepValues,
  MAX_SWEEP_POINTS,
  type WhatIfQuery,
} from "../src/sweep";

const QUERY: WhatIfQuery = {
  model: "Model X",
  year: "2017",
  battery: "75",
  miles: "19000",
  date: "2019-01-01",
};

describe("sweepValues", () => {
  it("produces 13 points for 0..60000 step 5000, ends inclusive", () => {
    const values = sweepValues({ axis: "Miles", start: 0, end: 60000, step: 5000 });
    expect(values).toHaveLength(13);
    expect(values[0]).toBe(0);
    expect(values[12]).toBe(60000);
  });

  it("rejects non-positive steps", () => {
    expect(() => sweepValues({ axis: "Miles", start: 0, end: 10, step: 0 })).toThrow(/step/);
    expect(() => sweepValues({ axis: "Miles", start: 0, end: 10, step: -1 })).toThrow(/step/);
  });

  it("rejects more than the point budget", () => {
    expect(() =>
      sweepValues({ axis: "Miles", start: 0, end: MAX_SWEEP_POINTS, step: 1 }),
    ).toThrow(/limit/);
  });

  it("rejects infinite ranges and reversed ranges", () => {
    expect(() => sweepValues({ axis: "Miles", start: 0, end: Infinity, step: 1 })).toThrow(/finite/);
    expect(() => sweepValues({ axis: "Miles", start: 10, end: 0, step: 1 })).toThrow(/precede/);
  });
});

describe("buildSweepRecords", () => {
  it("varies Miles and holds every other field fixed", () => {
    const records = buildSweepRecords(QUERY, { axis: "Miles", start: 0, end: 60000, step: 5000 });
    expect(records).toHaveLength(13);
    expect(records.map((r) => r.Miles)).toEqual(
      ["0", "5000", "10000", "15000", "20000", "25000", "30000", "35000", "40000", "45000", "50000", "55000", "60000"],
    );
    for (const record of records) {
      expect(record.Model).toBe("Model X");
      expect(record.Year).toBe("2017");
      expect(record.Price).toBe("0");
      expect(record.Date).toBe("2019-01-01");
    }
  });

  it("varies the listing month on a Date sweep", () => {
    const records = buildSweepRecords(QUERY, { axis: "Date", start: 0, end: 2, step: 1 });
    expect(records.map((r) => r.Date)).toEqual(["2019-01-01", "2019-02-01", "2019-03-01"]);
    expect(new Set(records.map((r) => r.Miles))).toEqual(new Set(["19000"]));
  });

  it("needs a base date for a Date sweep", () => {
    expect(() =>
      buildSweepRecords({ ...QUERY, date: undefined }, { axis: "Date", start: 0, end: 2, step: 1 }),
    ).toThrow(/Date/);
  });
});

describe("addMonths", () => {
  it("carries across year boundaries", () => {
    expect(addMonths("2019-01-01", 0)).toBe("2019-01-01");
    expect(addMonths("2019-11-15", 3)).toBe("2020-02-15");
    expect(addMonths("2019-01-01", 24)).toBe("2021-01-01");
  });

  it("rejects malformed dates", () => {
    expect(() => addMonths("January 2019", 1)).toThrow(/YYYY-MM-DD/);
  });
});
