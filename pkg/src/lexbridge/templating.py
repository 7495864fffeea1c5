"""Prompt-template selection and rendering.

Templates are plain text files with ``string.Template`` placeholders:
``$subject`` for the enrichment prompts, ``$query``/``$document`` for the
judge prompt. The packaged set covers one file per (role, task); any of
them can be overridden with an explicit file path. Template content is
deliberately unvalidated — prompts are data.
"""

from dataclasses import dataclass
from importlib import resources
from string import Template

TASKS = (
    "general",
    "factoid_qa",
    "multihop_qa",
    "claim_verification",
    "argument",
    "financial_qa",
    "citation_prediction",
    "duplicate_detection",
)

_ROLES = ("corpus", "query", "judge")


class UnknownTaskError(ValueError):
    def __init__(self, task: str):
        super().__init__(
            f"unknown prompt task {task!r}; available: {', '.join(TASKS)}"
        )
        self.task = task


def packaged_template(role: str, task: str) -> str:
    if role not in _ROLES:
        raise ValueError(f"unknown template role {role!r}")
    if task not in TASKS:
        raise UnknownTaskError(task)
    path = resources.files("lexbridge") / "prompts" / f"{role}_{task}.txt"
    return path.read_text(encoding="utf-8")


@dataclass(frozen=True)
class PromptConfig:
    task: str = "general"
    corpus_template: str | None = None  # file path overriding the packaged text
    query_template: str | None = None
    judge_template: str | None = None

    def _text(self, role: str) -> str:
        override = getattr(self, f"{role}_template")
        if override is not None:
            with open(override, encoding="utf-8") as fh:
                return fh.read()
        return packaged_template(role, self.task)

    def render_corpus(self, document_text: str) -> str:
        return Template(self._text("corpus")).substitute(subject=document_text)

    def render_query(self, query_text: str) -> str:
        return Template(self._text("query")).substitute(subject=query_text)

    def render_judge(self, query_text: str, document_text: str) -> str:
        return Template(self._text("judge")).substitute(
            query=query_text, document=document_text
        )
