/** One row of a search run (the results-file record, camel-cased). */
export interface ResultRow {
  queryId: string;
  rank: number;
  docId: string;
  score: number;
}

/** Figures printed by a successful build. */
export interface BuildStats {
  nDocs: number;
  avgdl: number;
  unigramTerms: number;
  occupiedSlots: number;
}

/** Summary line of an enrichment pass. */
export interface EnrichSummary {
  enrichedSubjects: number;
  totalSubjects: number;
  registeredSlots: number;
  providerFailures: number;
}

/**
 * The evaluation report exactly as the CLI writes it (snake_case keys
 * preserved so the object deep-equals the JSON report file).
 */
export interface EvalReport {
  averages: Record<string, number>;
  per_query: Record<string, Record<string, number>>;
  evaluated: number;
  excluded: string[];
  missing_from_run: string[];
  missing_from_qrels: string[];
  metadata: Record<string, unknown>;
}

export interface BuildOptions {
  corpus: string;
  index: string;
  config?: string;
  slotCount?: number;
  ngramMin?: number;
  ngramMax?: number;
  stopwords?: string;
}

export interface SearchOptions {
  index: string;
  /** Single ad-hoc query text (reported under query id "adhoc"). */
  query?: string;
  /** Path to a JSONL query file; exactly one of query/queries. */
  queries?: string;
  /** When set, results are also written to this path. */
  output?: string;
  config?: string;
  k?: number;
  depth?: number;
  weight?: number;
  k1?: number;
  b?: number;
  expand?: boolean;
  rerank?: boolean;
  /** Scripted provider replies (JSON file) for offline expansion. */
  stub?: string;
  /** Scripted judge replies for offline reranking. */
  judgeScript?: string;
  tau?: number;
  maxPhrases?: number;
  task?: string;
}

export interface EnrichOptions {
  index: string;
  config?: string;
  stub?: string;
  output?: string;
  report?: string;
  tau?: number;
  maxPhrases?: number;
  maxWorkers?: number;
  task?: string;
}

export interface EvalOptions {
  results: string;
  qrels: string;
  answers?: string;
  /** Needed with `answers`: document text comes from the index file. */
  index?: string;
  k?: number[];
  exponentialGain?: boolean;
  /** When set, the report is also left at this path. */
  report?: string;
  config?: string;
}
