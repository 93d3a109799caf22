// Client for the price-scoring HTTP API. The request/response shapes are
// fixed by the service contract; buildScoreRequest and
// validateScoreRequest exist so tests can assert every outgoing body
// matches the wire shape exactly.

export interface ScoreRecord {
  Model: string;
  Year: string;
  Battery: string;
  Price: string;
  Miles: string;
  Date?: string;
}

export interface ScoreRequest {
  Inputs: { input1: ScoreRecord[] };
  GlobalParameters: Record<string, never>;
}

export interface ScoredRecord extends ScoreRecord {
  DateCreated?: string;
  "Scored Labels": string;
}

export interface ScoreResponse {
  Results: { output1: ScoredRecord[] };
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class UnauthorizedError extends ApiError {
  constructor() {
    super(401, "unauthorized: check the bearer token in settings");
  }
}

export class BadRequestError extends ApiError {
  constructor(readonly detail: string) {
    super(400, detail);
  }
}

export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${cause instanceof Error ? cause.message : String(cause)}`);
  }
}

export function buildScoreRequest(records: ScoreRecord[]): ScoreRequest {
  return { Inputs: { input1: records.map((r) => ({ ...r })) }, GlobalParameters: {} };
}

const RECORD_KEYS = new Set(["Model", "Year", "Battery", "Price", "Miles", "Date"]);
const REQUIRED_KEYS = ["Model", "Year", "Battery", "Price", "Miles"];

/** Throws unless the document is exactly the documented request shape. */
export function validateScoreRequest(doc: unknown): asserts doc is ScoreRequest {
  if (typeof doc !== "object" || doc === null) throw new Error("request must be an object");
  const keys = Object.keys(doc as object).sort();
  if (keys.join(",") !== "GlobalParameters,Inputs") {
    throw new Error(`request must have exactly Inputs and GlobalParameters, got ${keys.join(",")}`);
  }
  const anyDoc = doc as Record<string, unknown>;
  const inputs = anyDoc.Inputs as Record<string, unknown>;
  if (typeof inputs !== "object" || inputs === null || Object.keys(inputs).join(",") !== "input1") {
    throw new Error("Inputs must carry exactly input1");
  }
  const records = inputs.input1;
  if (!Array.isArray(records) || records.length === 0) {
    throw new Error("input1 must be a non-empty array");
  }
  for (const record of records) {
    if (typeof record !== "object" || record === null) throw new Error("records must be objects");
    for (const key of Object.keys(record)) {
      if (!RECORD_KEYS.has(key)) throw new Error(`unexpected record field ${key}`);
      if (typeof (record as Record<string, unknown>)[key] !== "string") {
        throw new Error(`record field ${key} must be a string`);
      }
    }
    for (const key of REQUIRED_KEYS) {
      if (!(key in record)) throw new Error(`record lacks field ${key}`);
    }
  }
  const globals = anyDoc.GlobalParameters;
  if (typeof globals !== "object" || globals === null || Object.keys(globals as object).length !== 0) {
    throw new Error("GlobalParameters must be an empty object");
  }
}

export class ScoringClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
  ) {}

  scoreUrl(): string {
    return `${this.baseUrl.replace(/\/$/, "")}/api/v2/score?api-version=2`;
  }

  /** Scores a batch of records in one request; order is preserved. */
  async score(records: ScoreRecord[], signal?: AbortSignal): Promise<ScoredRecord[]> {
    const body = buildScoreRequest(records);
    validateScoreRequest(body);
    let response: Response;
    try {
      response = await fetch(this.scoreUrl(), {
        method: "POST",
        headers: {
          "Content-Type": "application/json",
          Authorization: `Bearer ${this.token}`,
        },
        body: JSON.stringify(body),
        signal,
      });
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") throw err;
      throw new NetworkError(err);
    }
    if (response.status === 401) throw new UnauthorizedError();
    if (response.status === 400) {
      const detail = await response
        .json()
        .then((doc) => String((doc as { error?: string }).error ?? "bad request"))
        .catch(() => "bad request");
      throw new BadRequestError(detail);
    }
    if (!response.ok) throw new ApiError(response.status, `scoring failed: HTTP ${response.status}`);
    const doc = (await response.json()) as ScoreResponse;
    const output = doc?.Results?.output1;
    if (!Array.isArray(output) || output.length !== records.length) {
      throw new ApiError(response.status, "response output1 does not match the request records");
    }
    return output;
  }
}
