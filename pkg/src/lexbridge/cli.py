"""Command-line surface: build, enrich, search, eval.

Configuration may come from flags, from a TOML-style manifest
(``--config``), or from built-in defaults — in that order of
precedence. Secrets never travel through flags or files: the HTTP
provider reads its token from an environment variable.

Exit codes: 0 success, 1 usage error, 2 data error, 3 provider error.
"""

import argparse
import json
import sys
from dataclasses import replace

from .config import ConfigError, load_config
from .enrichment import (
    DEFAULT_TAU,
    FilterConfig,
    enrich_corpus,
    expand_query,
)
from .evaluation import evaluate_run, load_answers, load_qrels, load_queries, load_run
from .index import IndexConfig, IndexError_, InvertedIndex, read_corpus_jsonl
from .providers import (
    DEFAULT_MAX_PHRASES,
    EndpointConfig,
    HttpProvider,
    ProviderError,
    StubProvider,
)
from .rerank import DEFAULT_FINAL_K, rerank
from .scoring import (
    DEFAULT_B,
    DEFAULT_DELTA,
    DEFAULT_DEPTH,
    DEFAULT_K1,
    DEFAULT_WEIGHT,
    ScoringParams,
    WeightedQuery,
    weighted_search,
)
from .templating import PromptConfig
from .tokenizer import load_stopwords

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the usage exit code is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cfg_get(cfg, section, key, default=None):
    return cfg.get(section, {}).get(key, default)


def _pick(flag_value, cfg, section, key, default):
    if flag_value is not None:
        return flag_value
    value = _cfg_get(cfg, section, key)
    return default if value is None else value


def _load_cfg(args):
    if getattr(args, "config", None) is None:
        return {}
    try:
        return load_config(args.config)
    except OSError as exc:
        raise DataError(f"cannot read config: {exc}") from None
    except ConfigError as exc:
        raise DataError(str(exc)) from None


def _load_index(path) -> InvertedIndex:
    try:
        return InvertedIndex.load(path)
    except OSError as exc:
        raise DataError(f"cannot read index: {exc}") from None
    except IndexError_ as exc:
        raise DataError(str(exc)) from None


def _scoring_params(args, cfg) -> ScoringParams:
    try:
        return ScoringParams(
            k1=_pick(args.k1, cfg, "scoring", "k1", DEFAULT_K1),
            b=_pick(args.b, cfg, "scoring", "b", DEFAULT_B),
            delta=_cfg_get(cfg, "scoring", "delta", DEFAULT_DELTA),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _build_provider(args, cfg, section="provider"):
    stub_flag = getattr(args, "stub", None)
    if stub_flag is not None:
        try:
            return StubProvider.from_file(stub_flag)
        except (OSError, ValueError) as exc:
            raise DataError(f"stub script: {exc}") from None
    kind = _cfg_get(cfg, section, "kind")
    if kind == "stub":
        script = _cfg_get(cfg, section, "script")
        if not script:
            raise DataError(f"[{section}] kind=stub needs a script path")
        try:
            return StubProvider.from_file(script)
        except (OSError, ValueError) as exc:
            raise DataError(f"stub script: {exc}") from None
    if kind == "http":
        url = _cfg_get(cfg, section, "url")
        model = _cfg_get(cfg, section, "model")
        if not url or not model:
            raise DataError(f"[{section}] kind=http needs url and model")
        endpoint = EndpointConfig(url=url, model=model)
        for key in ("temperature", "max_tokens", "timeout", "retries", "backoff",
                    "token_env"):
            value = _cfg_get(cfg, section, key)
            if value is not None:
                endpoint = replace(endpoint, **{key: value})
        return HttpProvider(endpoint)
    if kind is None:
        return None
    raise DataError(f"[{section}] unknown provider kind {kind!r}")


def _judge_provider(args, cfg):
    script_path = getattr(args, "judge_script", None) or _cfg_get(
        cfg, "judge", "script"
    )
    if script_path is not None:
        try:
            with open(script_path, encoding="utf-8") as fh:
                nested = json.load(fh)
        except (OSError, ValueError) as exc:
            raise DataError(f"judge script: {exc}") from None
        if not isinstance(nested, dict):
            raise DataError("judge script must be a JSON object")
        flat = {}
        for qid, docs in nested.items():
            if not isinstance(docs, dict):
                raise DataError(f"judge script entry {qid!r} must be an object")
            for did, value in docs.items():
                if isinstance(value, bool) or not isinstance(value, (int, str)):
                    raise DataError(
                        f"judge script entry {qid!r}/{did!r} must be an "
                        "integer score or a raw reply string"
                    )
                flat[f"{qid}::{did}"] = (
                    value if isinstance(value, str) else json.dumps({"score": value})
                )
        return StubProvider(flat, name="judge-stub")
    if _cfg_get(cfg, "judge", "kind") == "http":
        return _build_provider(argparse.Namespace(stub=None), cfg, section="judge")
    return None


def _prompt_config(args, cfg) -> PromptConfig:
    return PromptConfig(
        task=_pick(getattr(args, "task", None), cfg, "enrich", "task", "general"),
        corpus_template=_cfg_get(cfg, "enrich", "corpus_template"),
        query_template=_cfg_get(cfg, "enrich", "query_template"),
        judge_template=_cfg_get(cfg, "judge", "template"),
    )


def _filter_config(args, cfg) -> FilterConfig:
    try:
        return FilterConfig(
            tau=_pick(getattr(args, "tau", None), cfg, "enrich", "tau", DEFAULT_TAU)
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _open_out(path):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


# ----------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    cfg = _load_cfg(args)
    stopwords_path = _pick(args.stopwords, cfg, "index", "stopwords", None)
    kwargs = {}
    if stopwords_path is not None:
        try:
            kwargs["stopwords"] = load_stopwords(stopwords_path)
        except OSError as exc:
            raise DataError(f"cannot read stopwords: {exc}") from None
    try:
        index_config = IndexConfig(
            slot_count=_pick(args.slot_count, cfg, "index", "slot_count", 2**23),
            ngram_min=_pick(args.ngram_min, cfg, "index", "ngram_min", 2),
            ngram_max=_pick(args.ngram_max, cfg, "index", "ngram_max", 4),
            **kwargs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        index = InvertedIndex.build(read_corpus_jsonl(args.corpus), index_config)
    except OSError as exc:
        raise DataError(f"cannot read corpus: {exc}") from None
    except (ValueError, IndexError_) as exc:
        raise DataError(str(exc)) from None
    index.save(args.index)
    stats = index.stats
    print(f"indexed {stats.n_docs} documents")
    print(f"avgdl {stats.avgdl}")
    print(f"unigram terms {index.unigram_term_count}")
    print(f"occupied hash slots {index.occupied_slot_count}")
    return EXIT_OK


def _verdict_dict(v):
    return {"phrase": v.phrase, "canonical": v.canonical, "df": v.df, "rule": v.rule}


def cmd_enrich(args) -> int:
    cfg = _load_cfg(args)
    index = _load_index(args.index)
    provider = _build_provider(args, cfg)
    if provider is None:
        raise UsageError("no provider: pass --stub or configure [provider]")
    reports = enrich_corpus(
        index,
        provider,
        prompt_config=_prompt_config(args, cfg),
        filter_config=_filter_config(args, cfg),
        max_phrases=_pick(
            args.max_phrases, cfg, "enrich", "max_phrases", DEFAULT_MAX_PHRASES
        ),
        max_workers=_pick(args.max_workers, cfg, "enrich", "max_workers", 1),
    )
    index.save(args.output or args.index)

    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(
                    json.dumps(
                        {
                            "subject_id": r.subject_id,
                            "proposed": r.proposed,
                            "accepted": r.accepted,
                            "rejected": r.rejected,
                            "registered_slots": r.registered_slots,
                            "provider_error": r.provider_error,
                            "verdicts": [_verdict_dict(v) for v in r.verdicts],
                        },
                        sort_keys=True,
                        ensure_ascii=False,
                    )
                    + "\n"
                )
    failures = sum(1 for r in reports if r.provider_error)
    slots = sum(r.registered_slots for r in reports)
    print(
        f"enriched {len(reports) - failures}/{len(reports)} documents, "
        f"registered {slots} slots, {failures} provider failures"
    )
    if reports and failures == len(reports):
        raise ProviderError("every document's provider request failed")
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = _load_cfg(args)
    if (args.query is None) == (args.queries is None):
        raise UsageError("pass exactly one of --query or --queries")
    index = _load_index(args.index).freeze()
    params = _scoring_params(args, cfg)
    weight = _pick(args.weight, cfg, "scoring", "weight", DEFAULT_WEIGHT)
    if weight < 0:
        raise UsageError("weight must be >= 0")
    k = _pick(args.k, cfg, "search", "k", DEFAULT_FINAL_K)
    depth = _pick(args.depth, cfg, "search", "depth", DEFAULT_DEPTH)
    if k < 1 or depth < 1:
        raise UsageError("k and depth must be >= 1")
    expand = _pick(args.expand, cfg, "search", "expand", False)
    do_rerank = _pick(args.rerank, cfg, "search", "rerank", False)

    if args.query is not None:
        queries = {"adhoc": args.query}
    else:
        try:
            queries = load_queries(args.queries)
        except OSError as exc:
            raise DataError(f"cannot read queries: {exc}") from None
        except ValueError as exc:
            raise DataError(str(exc)) from None

    provider = _build_provider(args, cfg) if expand else None
    if expand and provider is None:
        raise UsageError("--expand needs a provider (--stub or [provider] config)")
    judge = _judge_provider(args, cfg) if do_rerank else None
    if do_rerank and judge is None:
        raise UsageError("--rerank needs a judge (--judge-script or [judge] config)")
    prompt_config = _prompt_config(args, cfg)
    filter_config = _filter_config(args, cfg)
    max_phrases = _pick(
        args.max_phrases, cfg, "enrich", "max_phrases", DEFAULT_MAX_PHRASES
    )

    out = _open_out(args.output)
    try:
        for qid, text in queries.items():
            if expand:
                expansion = expand_query(
                    text,
                    index,
                    provider,
                    prompt_config=prompt_config,
                    filter_config=filter_config,
                    weight=weight,
                    max_phrases=max_phrases,
                    query_id=qid,
                )
                if expansion.degraded:
                    print(
                        f"warning: expansion degraded for {qid}: "
                        f"{expansion.provider_error}",
                        file=sys.stderr,
                    )
                query = expansion.query
            else:
                query = WeightedQuery.from_text(
                    text, weight=weight, stopwords=index.config.stopwords
                )
            candidates = weighted_search(query, index, params, top_k=depth)
            if do_rerank:
                outcome = rerank(
                    text,
                    candidates,
                    judge,
                    index,
                    prompt_config=prompt_config,
                    depth=depth,
                    final_k=k,
                    query_id=qid,
                )
                ranked = [e.result for e in outcome.entries]
            else:
                ranked = candidates[:k]
            for rank, result in enumerate(ranked, start=1):
                out.write(
                    json.dumps(
                        {
                            "query_id": qid,
                            "rank": rank,
                            "doc_id": result.doc_id,
                            "score": result.score,
                        },
                        sort_keys=True,
                        ensure_ascii=False,
                    )
                    + "\n"
                )
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _load_cfg(args)
    try:
        run = load_run(args.results)
        qrels = load_qrels(args.qrels)
        answers = load_answers(args.answers) if args.answers else None
    except OSError as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(str(exc)) from None

    if args.k is not None:
        try:
            k_values = [int(x) for x in args.k.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad k list: {args.k!r}") from None
    else:
        k_values = _cfg_get(cfg, "eval", "k", [10])
        if isinstance(k_values, (int, float)):
            k_values = [int(k_values)]
        k_values = [int(x) for x in k_values]
    if not k_values or any(k < 1 for k in k_values):
        raise UsageError("k values must be >= 1")

    doc_text = None
    if answers:
        if not args.index:
            raise UsageError("answer coverage needs --index for document text")
        index = _load_index(args.index)
        doc_text = lambda doc_id: index.get_document(doc_id).full_text

    exponential = bool(
        _pick(args.exponential_gain, cfg, "eval", "exponential", False)
    )
    try:
        report = evaluate_run(
            run,
            qrels,
            k_values=k_values,
            answers=answers,
            doc_text=doc_text,
            exponential=exponential,
            metadata={
                "results": str(args.results),
                "qrels": str(args.qrels),
                "answers": str(args.answers) if args.answers else None,
                "k": k_values,
                "gain": "exponential" if exponential else "linear",
            },
        )
    except IndexError_ as exc:
        raise DataError(str(exc)) from None
    if report.evaluated == 0:
        raise DataError(
            "no overlapping queries between results and qrels "
            f"(results: {len(run)}, qrels with relevant docs: "
            f"{sum(1 for g in qrels.values() if g)})"
        )
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    print(report.table())
    return EXIT_OK


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexbridge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a JSONL corpus", parents=[])
    p.add_argument("--corpus", required=True, help="corpus JSONL ({_id,title,text})")
    p.add_argument("--index", required=True, help="output index file")
    p.add_argument("--config", help="TOML-style manifest")
    p.add_argument("--slot-count", type=int, dest="slot_count")
    p.add_argument("--ngram-min", type=int, dest="ngram_min")
    p.add_argument("--ngram-max", type=int, dest="ngram_max")
    p.add_argument("--stopwords", help="custom stopword file, one word per line")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("enrich", help="register provider phrases into an index")
    p.add_argument("--index", required=True)
    p.add_argument("--output", help="enriched index path (default: in place)")
    p.add_argument("--config")
    p.add_argument("--stub", help="stub script JSON (doc_id -> phrases)")
    p.add_argument("--tau", type=float, help="DF bound fraction")
    p.add_argument("--max-phrases", type=int, dest="max_phrases")
    p.add_argument("--max-workers", type=int, dest="max_workers")
    p.add_argument("--task", help="prompt task variant")
    p.add_argument("--report", help="write per-document report JSONL here")
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("search", help="query an index")
    p.add_argument("--index", required=True)
    p.add_argument("--config")
    p.add_argument("--query", help="single query text (query_id 'adhoc')")
    p.add_argument("--queries", help="queries JSONL ({_id,text})")
    p.add_argument("--output", help="results JSONL (default: stdout)")
    p.add_argument("--k", type=int, help="results per query")
    p.add_argument("--depth", type=int, help="candidate depth")
    p.add_argument("--weight", type=float, help="expansion weight")
    p.add_argument("--k1", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--expand", action=argparse.BooleanOptionalAction)
    p.add_argument("--rerank", action=argparse.BooleanOptionalAction)
    p.add_argument("--stub", help="expansion stub script (query_id -> phrases)")
    p.add_argument(
        "--judge-script",
        dest="judge_script",
        help="judge stub JSON (query_id -> {doc_id: score or raw reply})",
    )
    p.add_argument("--tau", type=float)
    p.add_argument("--max-phrases", type=int, dest="max_phrases")
    p.add_argument("--task")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", help="score a results file against qrels")
    p.add_argument("--results", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--answers", help="gold answers JSONL ({_id,answers})")
    p.add_argument("--index", help="index file (needed for answer coverage)")
    p.add_argument("--k", help="comma-separated cutoffs, e.g. 1,5,10")
    p.add_argument(
        "--exponential-gain",
        dest="exponential_gain",
        action=argparse.BooleanOptionalAction,
    )
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--config")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ProviderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER


if __name__ == "__main__":
    sys.exit(main())
