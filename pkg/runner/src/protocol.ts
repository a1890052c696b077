// Wire protocol: one JSON object per line in each direction.
// Request:  {tag, code, timeout_s}
// Response: {status, value, message}

export type Status = "ok" | "runtime_error" | "infeasible_model" | "timeout";

export interface RunRequest {
  tag: string;
  code: string;
  timeout_s: number;
}

export interface RunResponse {
  status: Status;
  value: number | null;
  message: string;
}

export function parseRequest(line: string): RunRequest {
  const raw = JSON.parse(line);
  if (typeof raw !== "object" || raw === null) {
    throw new Error("request is not an object");
  }
  const { tag, code, timeout_s } = raw as Record<string, unknown>;
  if (typeof tag !== "string" || typeof code !== "string") {
    throw new Error("request needs string fields: tag, code");
  }
  if (typeof timeout_s !== "number" || !(timeout_s > 0)) {
    throw new Error("request needs a positive timeout_s");
  }
  return { tag, code, timeout_s };
}

export function serializeResponse(response: RunResponse): string {
  return JSON.stringify({
    status: response.status,
    value: response.value,
    message: response.message,
  });
}
