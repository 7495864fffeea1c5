/**
 * Typed errors mirroring the CLI's exit-code contract:
 * 1 usage, 2 data, 3 provider. The message carries the CLI's own
 * stderr diagnostic verbatim, so callers see identical text whether
 * they drive the tool from a shell or from here.
 */

export class CliError extends Error {
  constructor(
    message: string,
    readonly exitCode: number,
    readonly stderr: string,
  ) {
    super(message);
    this.name = new.target.name;
  }
}

/** Bad flags, missing required arguments, contradictory options. */
export class UsageError extends CliError {}

/** Missing or malformed input files, unknown ids, empty overlap. */
export class DataError extends CliError {}

/** The LLM endpoint failed for every subject. */
export class ProviderError extends CliError {}

/** The process died without a recognised exit code (signal, OOM, ...). */
export class ProcessError extends CliError {}

export function errorForExit(
  code: number | null,
  stderr: string,
): CliError {
  const message = stderr.trim() || `exited with code ${code}`;
  switch (code) {
    case 1:
      return new UsageError(message, 1, stderr);
    case 2:
      return new DataError(message, 2, stderr);
    case 3:
      return new ProviderError(message, 3, stderr);
    default:
      return new ProcessError(message, code ?? -1, stderr);
  }
}
