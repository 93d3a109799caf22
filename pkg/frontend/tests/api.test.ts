import { afterEach, describe, expect, it, vi } from "vitest";

import {
  BadRequestError,
  NetworkError,
  ScoringClient,
  UnauthorizedError,
  buildScoreRequest,
  validateScoreRequest,
  type ScoreRecord,
} from "../src/api";
import { buildSweepRecords } from "../src/sweep";

const RECORD: ScoreRecord = {
  Model: "Model X",
  Year: "2017",
  Battery: "75",
  Price: "0",
  Miles: "19000",
  Date: "2019-01-01",
};

function jsonResponse(status: number, doc: unknown) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => doc,
  } as Response;
}

function outputFor(body: string) {
  const parsed = JSON.parse(body) as { Inputs: { input1: ScoreRecord[] } };
  return parsed.Inputs.input1.map((r, i) => ({ ...r, "Scored Labels": String(80000 - i) }));
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("validateScoreRequest", () => {
  it("accepts the documented shape", () => {
    expect(() => validateScoreRequest(buildScoreRequest([RECORD]))).not.toThrow();
  });

  it("rejects empty input1, extra keys and non-string values", () => {
    expect(() => validateScoreRequest({ Inputs: { input1: [] }, GlobalParameters: {} })).toThrow(/non-empty/);
    expect(() =>
      validateScoreRequest({ Inputs: { input1: [RECORD] }, GlobalParameters: {}, extra: 1 }),
    ).toThrow(/exactly/);
    expect(() =>
      validateScoreRequest({ Inputs: { input1: [{ ...RECORD, Miles: 19000 }] }, GlobalParameters: {} }),
    ).toThrow(/string/);
    expect(() =>
      validateScoreRequest({ Inputs: { input1: [{ ...RECORD, Wheels: "alloy" }] }, GlobalParameters: {} }),
    ).toThrow(/Wheels/);
  });
});

describe("ScoringClient", () => {
  it("batches a 13-step sweep into one request with input1 length 13", async () => {
    const calls: { url: string; init: RequestInit }[] = [];
    vi.stubGlobal("fetch", async (url: string, init: RequestInit) => {
      calls.push({ url, init });
      return jsonResponse(200, { Results: { output1: outputFor(init.body as string) } });
    });

    const records = buildSweepRecords(
      { model: "Model X", year: "2017", battery: "75", miles: "19000", date: "2019-01-01" },
      { axis: "Miles", start: 0, end: 60000, step: 5000 },
    );
    const client = new ScoringClient("http://svc:8080", "tok");
    const scored = await client.score(records);

    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("http://svc:8080/api/v2/score?api-version=2");
    const headers = calls[0].init.headers as Record<string, string>;
    expect(headers.Authorization).toBe("Bearer tok");
    expect(headers["Content-Type"]).toBe("application/json");
    const body = JSON.parse(calls[0].init.body as string);
    expect(() => validateScoreRequest(body)).not.toThrow();
    expect(body.Inputs.input1).toHaveLength(13);
    expect(scored).toHaveLength(13);
    expect(scored[0]["Scored Labels"]).toBe("80000");
  });

  it("maps 401 to UnauthorizedError", async () => {
    vi.stubGlobal("fetch", async () => jsonResponse(401, { error: "unauthorized" }));
    const client = new ScoringClient("http://svc", "bad");
    await expect(client.score([RECORD])).rejects.toBeInstanceOf(UnauthorizedError);
  });

  it("maps 400 to BadRequestError carrying the server detail", async () => {
    vi.stubGlobal("fetch", async () => jsonResponse(400, { error: "input1[0] lacks required field 'Miles'" }));
    const client = new ScoringClient("http://svc", "tok");
    const failure = await client.score([RECORD]).catch((e) => e);
    expect(failure).toBeInstanceOf(BadRequestError);
    expect((failure as BadRequestError).detail).toContain("Miles");
  });

  it("maps connection failures to NetworkError", async () => {
    vi.stubGlobal("fetch", async () => {
      throw new TypeError("fetch failed");
    });
    const client = new ScoringClient("http://svc", "tok");
    await expect(client.score([RECORD])).rejects.toBeInstanceOf(NetworkError);
  });

  it("lets aborts fly through untouched", async () => {
    vi.stubGlobal("fetch", async () => {
      throw new DOMException("aborted", "AbortError");
    });
    const client = new ScoringClient("http://svc", "tok");
    const failure = await client.score([RECORD]).catch((e) => e);
    expect(failure).toBeInstanceOf(DOMException);
    expect((failure as DOMException).name).toBe("AbortError");
  });

  it("rejects responses whose output1 does not match the request", async () => {
    vi.stubGlobal("fetch", async () => jsonResponse(200, { Results: { output1: [] } }));
    const client = new ScoringClient("http://svc", "tok");
    await expect(client.score([RECORD])).rejects.toThrow(/output1/);
  });
});
