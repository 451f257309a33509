/** Typed client for the assessment service HTTP API.
 *
 * Every mutating call carries the expected revision; a stale value makes
 * the service answer 409, which surfaces here as ConflictError so the app
 * can reload and retry. Invalid payloads surface as ValidationError with
 * per-field messages for inline display.
 */

import type {
  AssessmentDoc,
  CatalogDoc,
  CreatedDoc,
  EffectsDoc,
  MutationDoc,
  ScoreDoc,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ConflictError extends ApiError {
  constructor(
    message: string,
    readonly expectedRevision: number,
    readonly currentRevision: number,
  ) {
    super(409, message);
    this.name = "ConflictError";
  }
}

export class ValidationError extends ApiError {
  /** Field path (empty string for whole-request problems) to message. */
  constructor(
    message: string,
    readonly fieldErrors: Record<string, string>,
  ) {
    super(422, message);
    this.name = "ValidationError";
  }
}

export interface ResponsePayload {
  satisfaction: string;
  partial_value: number | null;
  satisfying_statement: string;
  names: string[];
  validation_tools: string[];
  hipaa_types: string[];
  recorded_by: string;
  expected_revision: number;
}

export interface MethodSpecPayload {
  depth: string | null;
  coverage: string | null;
  evidence: { kind: string; description: string }[];
}

export interface MethodMatrixPayload {
  examine: MethodSpecPayload;
  interview: MethodSpecPayload;
  test: MethodSpecPayload;
  expected_revision: number;
}

function conflictFrom(detail: unknown): ConflictError | null {
  if (
    detail !== null &&
    typeof detail === "object" &&
    typeof (detail as Record<string, unknown>).current_revision === "number"
  ) {
    const record = detail as Record<string, unknown>;
    return new ConflictError(
      String(record.message ?? "stale revision"),
      Number(record.expected_revision),
      Number(record.current_revision),
    );
  }
  return null;
}

function fieldErrorsFrom(detail: unknown): Record<string, string> {
  if (typeof detail === "string") {
    return { "": detail };
  }
  if (Array.isArray(detail)) {
    const out: Record<string, string> = {};
    for (const item of detail) {
      const entry = item as { loc?: unknown[]; msg?: unknown };
      const loc = Array.isArray(entry.loc)
        ? entry.loc.filter((part) => part !== "body").join(".")
        : "";
      out[loc] = String(entry.msg ?? "invalid value");
    }
    return out;
  }
  return { "": "invalid request" };
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike,
    readonly base: string = "",
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { Accept: "application/json" } };
    if (body !== undefined) {
      init.headers = { ...(init.headers as Record<string, string>), "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    const raw = await response.text();
    let data: unknown = null;
    if (raw !== "") {
      try {
        data = JSON.parse(raw);
      } catch {
        data = raw;
      }
    }
    if (!response.ok) {
      const detail =
        data !== null && typeof data === "object" && "detail" in (data as object)
          ? (data as { detail: unknown }).detail
          : data;
      if (response.status === 409) {
        const conflict = conflictFrom(detail);
        if (conflict !== null) {
          throw conflict;
        }
        throw new ApiError(409, typeof detail === "string" ? detail : "conflict", detail);
      }
      if (response.status === 422) {
        const fields = fieldErrorsFrom(detail);
        throw new ValidationError(Object.values(fields).join("; "), fields);
      }
      const message = typeof detail === "string" ? detail : `request failed (${response.status})`;
      throw new ApiError(response.status, message, detail);
    }
    return data as T;
  }

  getCatalog(level: string): Promise<CatalogDoc> {
    return this.request("GET", `/api/catalog?level=${encodeURIComponent(level)}`);
  }

  createAssessment(level: string, organization: string, threshold?: number): Promise<CreatedDoc> {
    const body: Record<string, unknown> = { level, organization };
    if (threshold !== undefined) {
      body.threshold = threshold;
    }
    return this.request("POST", "/api/assessments", body);
  }

  getAssessment(assessmentId: string): Promise<AssessmentDoc> {
    return this.request("GET", `/api/assessments/${assessmentId}`);
  }

  patchResponse(
    assessmentId: string,
    requirementId: string,
    payload: ResponsePayload,
  ): Promise<MutationDoc> {
    return this.request(
      "PATCH",
      `/api/assessments/${assessmentId}/responses/${requirementId}`,
      payload,
    );
  }

  putOdp(
    assessmentId: string,
    requirementId: string,
    ordinal: number,
    value: string,
    expectedRevision: number,
  ): Promise<MutationDoc> {
    return this.request("PUT", `/api/assessments/${assessmentId}/odp/${requirementId}/${ordinal}`, {
      value,
      expected_revision: expectedRevision,
    });
  }

  putMethods(
    assessmentId: string,
    requirementId: string,
    payload: MethodMatrixPayload,
  ): Promise<MutationDoc> {
    return this.request(
      "PUT",
      `/api/assessments/${assessmentId}/methods/${requirementId}`,
      payload,
    );
  }

  getScore(assessmentId: string): Promise<ScoreDoc> {
    return this.request("GET", `/api/assessments/${assessmentId}/score`);
  }

  getEffects(assessmentId: string): Promise<EffectsDoc> {
    return this.request("GET", `/api/assessments/${assessmentId}/effects`);
  }

  radarUrl(assessmentId: string, revision: number): string {
    return `${this.base}/api/assessments/${assessmentId}/radar.svg?rev=${revision}`;
  }
}
