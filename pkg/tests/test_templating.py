import pytest

from lexbridge.templating import TASKS, PromptConfig, UnknownTaskError, packaged_template


def test_all_roles_and_tasks_ship_templates():
    for task in TASKS:
        for role in ("corpus", "query", "judge"):
            text = packaged_template(role, task)
            assert text.strip()


def test_unknown_task():
    with pytest.raises(UnknownTaskError):
        packaged_template("corpus", "poetry")
    with pytest.raises(ValueError):
        packaged_template("oracle", "general")


def test_render_corpus_substitutes_subject():
    prompt = PromptConfig().render_corpus("A camera for night use.")
    assert "A camera for night use." in prompt
    assert "$subject" not in prompt


def test_render_query_substitutes_subject():
    prompt = PromptConfig(task="factoid_qa").render_query("who invented radar")
    assert "who invented radar" in prompt
    assert "$subject" not in prompt


def test_render_judge_substitutes_both():
    prompt = PromptConfig().render_judge("the query", "the document body")
    assert "the query" in prompt
    assert "the document body" in prompt
    assert '{"score":' in prompt


def test_override_file_wins(tmp_path):
    custom = tmp_path / "mine.txt"
    custom.write_text("CUSTOM $subject END", encoding="utf-8")
    config = PromptConfig(corpus_template=str(custom))
    assert config.render_corpus("doc text") == "CUSTOM doc text END"
    # other roles still come from the packaged set
    assert "doc text" in config.render_query("doc text")
