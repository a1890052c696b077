import { spawn, spawnSync } from "child_process";
import fs from "fs/promises";
import os from "os";
import path from "path";

import type { RunRequest, RunResponse } from "./protocol";

const PYTHON = process.env.MILPFORGE_RUNNER_PYTHON || "python3";
const MAX_OUTPUT = 1 << 20; // 1 MiB per stream is plenty for solver logs
const MESSAGE_LIMIT = 2000;

// The five modeling ecosystems the pipeline targets. Any other tag is run as
// plain python with no import check.
const ECOSYSTEM_MODULES: Record<string, string> = {
  pyomo: "pyomo",
  gurobipy: "gurobipy",
  docplex: "docplex",
  cvxpy: "cvxpy",
  pyscipopt: "pyscipopt",
};

const availabilityCache = new Map<string, boolean>();

export function ecosystemAvailable(tag: string): boolean {
  const moduleName = ECOSYSTEM_MODULES[tag];
  if (moduleName === undefined) {
    return true;
  }
  const cached = availabilityCache.get(moduleName);
  if (cached !== undefined) {
    return cached;
  }
  const probe = spawnSync(PYTHON, ["-c", `import ${moduleName}`], {
    timeout: 30_000,
  });
  const available = probe.status === 0;
  availabilityCache.set(moduleName, available);
  return available;
}

// Matches the output contract of generated scripts: the result is announced
// on an "Optimal value: <number>" line; the last such line wins because
// debug prints may precede it.
const OPTIMAL_LINE = /^\s*Optimal value:\s*(-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*$/;

export function parseOptimalValue(stdout: string): number | null {
  let value: number | null = null;
  for (const line of stdout.split("\n")) {
    const match = OPTIMAL_LINE.exec(line);
    if (match) {
      const parsed = Number(match[1]);
      if (Number.isFinite(parsed)) {
        value = parsed;
      }
    }
  }
  return value;
}

interface ProcessOutcome {
  stdout: string;
  stderr: string;
  exitCode: number | null;
  timedOut: boolean;
  spawnError: string | null;
}

function executeScript(
  scriptPath: string,
  cwd: string,
  timeoutMs: number
): Promise<ProcessOutcome> {
  return new Promise((resolve) => {
    const child = spawn(PYTHON, [scriptPath], { cwd, stdio: ["ignore", "pipe", "pipe"] });
    const state: ProcessOutcome = {
      stdout: "",
      stderr: "",
      exitCode: null,
      timedOut: false,
      spawnError: null,
    };

    const timer = setTimeout(() => {
      state.timedOut = true;
      child.kill("SIGKILL");
    }, timeoutMs);

    child.stdout.on("data", (data: Buffer) => {
      if (state.stdout.length < MAX_OUTPUT) {
        state.stdout += data.toString();
      }
    });
    child.stderr.on("data", (data: Buffer) => {
      if (state.stderr.length < MAX_OUTPUT) {
        state.stderr += data.toString();
      }
    });
    child.on("error", (err) => {
      clearTimeout(timer);
      state.spawnError = String(err);
      resolve(state);
    });
    child.on("close", (code) => {
      clearTimeout(timer);
      state.exitCode = code;
      resolve(state);
    });
  });
}

function tail(text: string): string {
  const trimmed = text.trim();
  return trimmed.length > MESSAGE_LIMIT ? trimmed.slice(-MESSAGE_LIMIT) : trimmed;
}

export async function run(request: RunRequest): Promise<RunResponse> {
  if (!ecosystemAvailable(request.tag)) {
    return { status: "runtime_error", value: null, message: "ecosystem unavailable" };
  }

  let tmpDir: string | null = null;
  try {
    tmpDir = await fs.mkdtemp(path.join(os.tmpdir(), "milpforge-run-"));
    const scriptPath = path.join(tmpDir, "payload.py");
    await fs.writeFile(scriptPath, request.code, "utf-8");

    const outcome = await executeScript(scriptPath, tmpDir, request.timeout_s * 1000);

    if (outcome.spawnError !== null) {
      return { status: "runtime_error", value: null, message: outcome.spawnError };
    }
    if (outcome.timedOut) {
      return {
        status: "timeout",
        value: null,
        message: `killed after ${request.timeout_s}s`,
      };
    }

    const value = parseOptimalValue(outcome.stdout);
    if (value !== null) {
      return { status: "ok", value, message: "" };
    }
    // a solver reporting infeasibility usually says so without printing a value
    if (/infeasible/i.test(outcome.stdout) || /infeasible/i.test(outcome.stderr)) {
      return {
        status: "infeasible_model",
        value: null,
        message: tail(outcome.stdout + "\n" + outcome.stderr),
      };
    }
    if (outcome.exitCode !== 0) {
      return {
        status: "runtime_error",
        value: null,
        message: tail(outcome.stderr) || `exit code ${outcome.exitCode}`,
      };
    }
    return {
      status: "runtime_error",
      value: null,
      message: "no 'Optimal value:' line in output",
    };
  } catch (err) {
    return { status: "runtime_error", value: null, message: String(err) };
  } finally {
    if (tmpDir !== null) {
      await fs.rm(tmpDir, { recursive: true, force: true }).catch(() => undefined);
    }
  }
}
