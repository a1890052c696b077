// Line-JSON loop: one request line in, exactly one response line out, in
// order, for arbitrary payloads. The process itself never crashes on bad
// input.

import readline from "readline";

import { parseRequest, serializeResponse } from "./protocol";
import { run } from "./runner";

async function handle(line: string): Promise<string> {
  try {
    const request = parseRequest(line);
    const response = await run(request);
    return serializeResponse(response);
  } catch (err) {
    return serializeResponse({
      status: "runtime_error",
      value: null,
      message: `bad request: ${String(err)}`,
    });
  }
}

async function main(): Promise<void> {
  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  let chain: Promise<void> = Promise.resolve();

  rl.on("line", (line) => {
    if (!line.trim()) {
      return;
    }
    chain = chain.then(async () => {
      const response = await handle(line);
      process.stdout.write(response + "\n");
    });
  });

  await new Promise<void>((resolve) => rl.on("close", resolve));
  await chain;
}

main();
