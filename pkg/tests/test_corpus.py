"""Corpus loading, label schemas, canonicalization."""

import json

import pytest

from styloboost.corpus import (
    BINARY_SCHEMA,
    MULTICLASS_SCHEMA,
    CorpusError,
    Document,
    LabelSchema,
    label_to_index,
    load_corpus,
    schema_for_task,
)


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")


class TestSchemas:
    def test_binary_classes(self):
        assert BINARY_SCHEMA.classes == ("human", "ai")

    def test_multiclass_classes(self):
        assert MULTICLASS_SCHEMA.classes == (
            "human",
            "gemma-2-9b",
            "gpt_4-o",
            "llama-8b",
            "mistral-7b",
            "qwen-2-72b",
            "yi-large",
        )

    def test_label_to_index(self):
        assert label_to_index("human", BINARY_SCHEMA) == 0
        assert label_to_index("ai", BINARY_SCHEMA) == 1
        assert label_to_index("yi-large", MULTICLASS_SCHEMA) == 6

    def test_round_trip_all_classes(self):
        for schema in (BINARY_SCHEMA, MULTICLASS_SCHEMA):
            for i, name in enumerate(schema.classes):
                assert label_to_index(name, schema) == i

    def test_unknown_label_reports_allowed_set(self):
        with pytest.raises(CorpusError, match="allowed"):
            label_to_index("gpt-5", BINARY_SCHEMA)

    def test_schema_for_task(self):
        assert schema_for_task("binary") is BINARY_SCHEMA
        assert schema_for_task("multiclass") is MULTICLASS_SCHEMA
        with pytest.raises(CorpusError):
            schema_for_task("ranking")


class TestLoadJsonl:
    def test_label_canonicalized(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "d1", "text": "Hi.", "label": "Human"}])
        docs = load_corpus(path, MULTICLASS_SCHEMA)
        assert docs == [Document("d1", "Hi.", "human")]

    def test_no_label_no_schema(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "d2", "text": "..."}])
        assert load_corpus(path)[0].label is None

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(
            path,
            [{"id": "d1", "text": "a"}, {"id": "d1", "text": "b"}],
        )
        with pytest.raises(CorpusError, match="d1"):
            load_corpus(path)

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "x"}\n{oops\n', encoding="utf-8")
        with pytest.raises(CorpusError, match=":2"):
            load_corpus(path)

    def test_unknown_label_named(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "d1", "text": "x", "label": "gpt-5"}])
        with pytest.raises(CorpusError, match="gpt-5"):
            load_corpus(path, MULTICLASS_SCHEMA)

    def test_empty_text_accepted(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "d1", "text": ""}])
        assert load_corpus(path)[0].text == ""

    def test_order_preserved_and_idempotent(self, tmp_path):
        path = tmp_path / "c.jsonl"
        rows = [{"id": f"d{i}", "text": f"t{i}"} for i in range(20)]
        write_jsonl(path, rows)
        first = load_corpus(path)
        second = load_corpus(path)
        assert first == second
        assert [d.id for d in first] == [f"d{i}" for i in range(20)]

    def test_collapse_ai(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(
            path,
            [
                {"id": "a", "text": "x", "label": "GPT_4-o"},
                {"id": "b", "text": "y", "label": "human"},
            ],
        )
        docs = load_corpus(path, BINARY_SCHEMA, collapse_ai=True)
        assert [d.label for d in docs] == ["ai", "human"]

    def test_no_collapse_rejects_model_names(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "a", "text": "x", "label": "yi-large"}])
        with pytest.raises(CorpusError, match="yi-large"):
            load_corpus(path, BINARY_SCHEMA)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorpusError, match="not found"):
            load_corpus(tmp_path / "absent.jsonl")


class TestLoadCsv:
    def test_basic(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,text,label\nd1,hello,HUMAN\n", encoding="utf-8")
        docs = load_corpus(path, BINARY_SCHEMA)
        assert docs == [Document("d1", "hello", "human")]

    def test_quoted_newline_cell(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text('id,text\nd1,"line one\nline two"\n', encoding="utf-8")
        docs = load_corpus(path)
        assert docs[0].text == "line one\nline two"

    def test_missing_required_column(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,label\nd1,human\n", encoding="utf-8")
        with pytest.raises(CorpusError, match="text"):
            load_corpus(path)

    def test_empty_label_cell_is_none(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,text,label\nd1,hello,\n", encoding="utf-8")
        assert load_corpus(path, BINARY_SCHEMA)[0].label is None


class TestValidation:
    def test_empty_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "", "text": "x"}])
        with pytest.raises(CorpusError, match="non-empty"):
            load_corpus(path)

    def test_non_string_text_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "a", "text": 5}])
        with pytest.raises(CorpusError, match="text"):
            load_corpus(path)

    def test_custom_schema_positions(self):
        schema = LabelSchema("multiclass", ("x", "y", "z"))
        assert label_to_index("z", schema) == 2
