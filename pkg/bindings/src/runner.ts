import { execFile } from "node:child_process";
import { errorForExit } from "./errors";

export interface RunnerOptions {
  /**
   * Command used to launch the CLI, e.g. ["lexbridge"] or
   * ["python3", "-m", "lexbridge.cli"]. Defaults to the
   * LEXBRIDGE_CLI environment variable (whitespace-split) when set,
   * then the `lexbridge` console script, falling back to the module
   * entry point when the script is not on PATH.
   */
  command?: string[];
  /** Hard per-invocation timeout in milliseconds (default: none). */
  timeoutMs?: number;
}

const FALLBACK = ["python3", "-m", "lexbridge.cli"];

function defaultCommand(): string[] {
  const env = process.env.LEXBRIDGE_CLI;
  if (env && env.trim()) return env.trim().split(/\s+/);
  return ["lexbridge"];
}

function spawnOnce(
  command: string[],
  args: string[],
  timeoutMs?: number,
): Promise<{ code: number | null; stdout: string; stderr: string; spawnFailed: boolean }> {
  return new Promise((resolve) => {
    execFile(
      command[0],
      [...command.slice(1), ...args],
      { maxBuffer: 64 * 1024 * 1024, timeout: timeoutMs },
      (err, stdout, stderr) => {
        if (err && (err as NodeJS.ErrnoException).code === "ENOENT") {
          resolve({ code: null, stdout: "", stderr: "", spawnFailed: true });
          return;
        }
        const code = err ? ((err as { code?: number | string }).code ?? null) : 0;
        resolve({
          code: typeof code === "number" ? code : null,
          stdout,
          stderr,
          spawnFailed: false,
        });
      },
    );
  });
}

/**
 * Run one CLI invocation and return its stdout. Non-zero exits become
 * typed errors carrying the CLI diagnostic.
 */
export async function runCli(
  args: string[],
  options: RunnerOptions = {},
): Promise<string> {
  const commands = options.command ? [options.command] : [defaultCommand(), FALLBACK];
  let last = { code: null as number | null, stdout: "", stderr: "", spawnFailed: true };
  for (const command of commands) {
    last = await spawnOnce(command, args, options.timeoutMs);
    if (!last.spawnFailed) break;
  }
  if (last.spawnFailed) {
    throw errorForExit(null, "lexbridge CLI not found (set LEXBRIDGE_CLI)");
  }
  if (last.code !== 0) {
    throw errorForExit(last.code, last.stderr);
  }
  return last.stdout;
}
