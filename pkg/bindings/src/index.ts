/**
 * Node bindings for the lexbridge retrieval engine.
 *
 * Each bound operation mirrors one CLI subcommand and talks to the
 * engine exclusively through its public interfaces: the command line,
 * exit codes, and the documented file formats. Values cross the
 * boundary as plain scalars, strings, and lists; non-zero exits become
 * typed errors carrying the CLI's own diagnostic text.
 */

import { readFile, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { runCli, RunnerOptions } from "./runner";
import {
  BuildOptions,
  BuildStats,
  EnrichOptions,
  EnrichSummary,
  EvalOptions,
  EvalReport,
  ResultRow,
  SearchOptions,
} from "./types";
import { DataError } from "./errors";

export * from "./errors";
export * from "./types";
export { runCli, RunnerOptions } from "./runner";

type Flag = [name: string, value: string | number | undefined];

function flags(pairs: Flag[]): string[] {
  const args: string[] = [];
  for (const [name, value] of pairs) {
    if (value !== undefined) args.push(name, String(value));
  }
  return args;
}

function toggle(name: string, value: boolean | undefined): string[] {
  if (value === undefined) return [];
  return [value ? `--${name}` : `--no-${name}`];
}

function matchNumber(pattern: RegExp, text: string, what: string): number {
  const m = text.match(pattern);
  if (!m) {
    throw new DataError(`could not find ${what} in CLI output`, 2, text);
  }
  return Number(m[1]);
}

/** Build an index file from a JSONL corpus; returns the build figures. */
export async function boundBuild(
  options: BuildOptions,
  runner: RunnerOptions = {},
): Promise<BuildStats> {
  const out = await runCli(
    [
      "build",
      ...flags([
        ["--corpus", options.corpus],
        ["--index", options.index],
        ["--config", options.config],
        ["--slot-count", options.slotCount],
        ["--ngram-min", options.ngramMin],
        ["--ngram-max", options.ngramMax],
        ["--stopwords", options.stopwords],
      ]),
    ],
    runner,
  );
  return {
    nDocs: matchNumber(/indexed (\d+) documents/, out, "document count"),
    avgdl: matchNumber(/avgdl ([\d.]+)/, out, "avgdl"),
    unigramTerms: matchNumber(/unigram terms (\d+)/, out, "unigram term count"),
    occupiedSlots: matchNumber(/occupied hash slots (\d+)/, out, "slot count"),
  };
}

/** Enrich document vocabulary in an index file (in place by default). */
export async function boundEnrich(
  options: EnrichOptions,
  runner: RunnerOptions = {},
): Promise<EnrichSummary> {
  const out = await runCli(
    [
      "enrich",
      ...flags([
        ["--index", options.index],
        ["--config", options.config],
        ["--stub", options.stub],
        ["--output", options.output],
        ["--report", options.report],
        ["--tau", options.tau],
        ["--max-phrases", options.maxPhrases],
        ["--max-workers", options.maxWorkers],
        ["--task", options.task],
      ]),
    ],
    runner,
  );
  const m = out.match(
    /enriched (\d+)\/(\d+) documents, registered (\d+) slots, (\d+) provider failures/,
  );
  if (!m) {
    throw new DataError("could not parse enrichment summary", 2, out);
  }
  return {
    enrichedSubjects: Number(m[1]),
    totalSubjects: Number(m[2]),
    registeredSlots: Number(m[3]),
    providerFailures: Number(m[4]),
  };
}

function parseRows(jsonl: string): ResultRow[] {
  return jsonl
    .split("\n")
    .filter((line) => line.trim())
    .map((line) => {
      const row = JSON.parse(line) as {
        query_id: string;
        rank: number;
        doc_id: string;
        score: number;
      };
      return {
        queryId: row.query_id,
        rank: row.rank,
        docId: row.doc_id,
        score: row.score,
      };
    });
}

/** Run retrieval (optionally expanded and reranked); returns run rows. */
export async function boundSearch(
  options: SearchOptions,
  runner: RunnerOptions = {},
): Promise<ResultRow[]> {
  const out = await runCli(
    [
      "search",
      ...flags([
        ["--index", options.index],
        ["--config", options.config],
        ["--query", options.query],
        ["--queries", options.queries],
        ["--output", options.output],
        ["--k", options.k],
        ["--depth", options.depth],
        ["--weight", options.weight],
        ["--k1", options.k1],
        ["--b", options.b],
        ["--stub", options.stub],
        ["--judge-script", options.judgeScript],
        ["--tau", options.tau],
        ["--max-phrases", options.maxPhrases],
        ["--task", options.task],
      ]),
      ...toggle("expand", options.expand),
      ...toggle("rerank", options.rerank),
    ],
    runner,
  );
  if (options.output) {
    return parseRows(await readFile(options.output, "utf-8"));
  }
  return parseRows(out);
}

/** Score a run against qrels; returns the full report object. */
export async function boundEval(
  options: EvalOptions,
  runner: RunnerOptions = {},
): Promise<EvalReport> {
  const reportPath =
    options.report ??
    join(tmpdir(), `lexbridge-eval-${process.pid}-${Date.now()}.json`);
  try {
    await runCli(
      [
        "eval",
        ...flags([
          ["--results", options.results],
          ["--qrels", options.qrels],
          ["--answers", options.answers],
          ["--index", options.index],
          ["--k", options.k?.join(",")],
          ["--config", options.config],
          ["--report", reportPath],
        ]),
        ...(options.exponentialGain ? ["--exponential-gain"] : []),
      ],
      runner,
    );
    return JSON.parse(await readFile(reportPath, "utf-8")) as EvalReport;
  } finally {
    if (!options.report) {
      await rm(reportPath, { force: true });
    }
  }
}
