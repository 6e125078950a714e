import json
import shutil
from pathlib import Path

import pytest

from arann.cli import main
from arann.htmldoc import parse_html
from arann.pipeline import convert_bundle
from arann.rdf import curie, parse_ntriples
from arann.rdfa import extract_rdfa
from conftest import FIXTURE_DIR, load_fixture


@pytest.fixture()
def workdir(tmp_path):
    shutil.copy(FIXTURE_DIR / "sample-article.json", tmp_path / "sample-article.json")
    shutil.copytree(FIXTURE_DIR / "media", tmp_path / "media")
    return tmp_path


def _convert(workdir, *flags):
    out = workdir / "out"
    code = main(["convert", str(workdir / "sample-article.json"), "-o", str(out), *flags])
    return code, out


def test_convert_fixture(workdir, capsys):
    code, out = _convert(workdir, "--emit-nt")
    assert code == 0
    assert (out / "article.html").exists()
    assert (out / "comments" / "comment-c1.html").exists()
    assert (out / "media" / "diagram.png").exists()
    assert (out / "css" / "style.css").exists()

    summary = capsys.readouterr().out.strip()
    graph = convert_bundle(load_fixture("sample-article.json")).graph
    assert summary == f"blocks=10 comments=2 triples={len(graph)}"

    sidecar = parse_ntriples((out / "triples.nt").read_text(encoding="utf-8"))
    assert sidecar == graph


def test_convert_then_extract_pipeline_composition(workdir, capsys):
    code, out = _convert(workdir, "--emit-nt")
    assert code == 0
    capsys.readouterr()
    nt_out = workdir / "extracted.nt"
    code = main(["extract", str(out / "article.html"), "-o", str(nt_out)])
    assert code == 0
    extracted = parse_ntriples(nt_out.read_text(encoding="utf-8"))
    sidecar = parse_ntriples((out / "triples.nt").read_text(encoding="utf-8"))
    assert extracted == sidecar
    # canonical serialization means the files are byte-identical too
    assert nt_out.read_bytes() == (out / "triples.nt").read_bytes()


def test_malformed_json_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"metadata": oops}', encoding="utf-8")
    code = main(["convert", str(bad), "-o", str(tmp_path / "out")])
    assert code == 1
    err = capsys.readouterr().err
    assert "byte offset" in err


def test_validation_failure_exit_2(tmp_path, capsys):
    doc = json.loads((FIXTURE_DIR / "sample-article.json").read_text(encoding="utf-8"))
    doc["comments"][0]["anchor"] = {"block_id": "p-99", "start": 0, "end": 3}
    bad = tmp_path / "dangling.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    shutil.copytree(FIXTURE_DIR / "media", tmp_path / "media")
    code = main(["convert", str(bad), "-o", str(tmp_path / "out")])
    assert code == 2
    err = capsys.readouterr().err
    assert "DanglingAnchor" in err and "p-99" in err


def test_validate_subcommand(workdir, capsys):
    assert main(["validate", str(workdir / "sample-article.json")]) == 0
    doc = json.loads((FIXTURE_DIR / "sample-article.json").read_text(encoding="utf-8"))
    doc["comments"][0]["anchor"]["end"] = 10 ** 6
    bad = workdir / "bad.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(bad)]) == 2
    assert "AnchorOutOfRange" in capsys.readouterr().err


def test_query_command(workdir, capsys):
    code, out = _convert(workdir, "--emit-nt")
    capsys.readouterr()
    qfile = workdir / "q.rq"
    qfile.write_text("?c rdf:type oa:Annotation\n", encoding="utf-8")
    code = main(["query", str(out / "triples.nt"), str(qfile)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "?c"
    assert len(lines) == 3  # header + two annotations
    # html input works too
    code = main(["query", str(out / "article.html"), str(qfile)])
    assert code == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 3


def test_query_empty_file_exit_1(workdir, capsys):
    code, out = _convert(workdir, "--emit-nt")
    capsys.readouterr()
    qfile = workdir / "empty.rq"
    qfile.write_text("", encoding="utf-8")
    assert main(["query", str(out / "triples.nt"), str(qfile)]) == 1
    assert "error" in capsys.readouterr().err


def test_report_command(workdir, capsys):
    code, out = _convert(workdir)
    capsys.readouterr()
    code = main(["report", str(out / "article.html"), "--kind", "comments_per_section"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "section\tcomments"
    assert lines[1].split("\t")[1] == "1"


def test_annotate_command(workdir, capsys):
    code, out = _convert(workdir)
    capsys.readouterr()
    comment_file = workdir / "late.json"
    comment_file.write_text(
        json.dumps(
            {
                "comment_id": "late-1",
                "author_name": "Late Reviewer",
                "created": "2023-01-01T00:00:00Z",
                "body_text": "A very late remark.",
                "anchor": {"block_id": "p-3", "start": 0, "end": 6, "exact": "Timing"},
            }
        ),
        encoding="utf-8",
    )
    updated = workdir / "updated.html"
    code = main(["annotate", str(out / "article.html"), str(comment_file), "-o", str(updated)])
    assert code == 0
    graph_before = extract_rdfa(parse_html((out / "article.html").read_text(encoding="utf-8")))
    graph_after = extract_rdfa(parse_html(updated.read_text(encoding="utf-8")))

    def annotations(graph):
        return {
            t.subject for t in graph
            if t.predicate == curie("rdf:type") and t.object == curie("oa:Annotation")
        }

    assert len(annotations(graph_after)) == len(annotations(graph_before)) + 1


def test_annotate_quote_mismatch_exit_1(workdir, capsys):
    code, out = _convert(workdir)
    capsys.readouterr()
    comment_file = workdir / "late.json"
    comment_file.write_text(
        json.dumps(
            {
                "comment_id": "late-1",
                "author_name": "R",
                "created": "2023-01-01T00:00:00Z",
                "body_text": "x",
                "anchor": {"block_id": "p-3", "start": 0, "end": 6, "exact": "Wrong!"},
            }
        ),
        encoding="utf-8",
    )
    assert main(["annotate", str(out / "article.html"), str(comment_file)]) == 1


def test_base_uri_override(workdir, capsys):
    out = workdir / "out2"
    code = main(
        ["convert", str(workdir / "sample-article.json"), "-o", str(out), "--base-uri",
         "https://other.example/published"]
    )
    assert code == 0
    html = (out / "article.html").read_text(encoding="utf-8")
    assert 'about="https://other.example/published"' in html


def test_gazetteer_env_fallback(workdir, monkeypatch, capsys):
    gaz = workdir / "custom.tsv"
    gaz.write_text("introduction\tdeo:Background\n", encoding="utf-8")
    monkeypatch.setenv("ARANN_GAZETTEER", str(gaz))
    out = workdir / "out3"
    code = main(["convert", str(workdir / "sample-article.json"), "-o", str(out)])
    assert code == 0
    html = (out / "article.html").read_text(encoding="utf-8")
    assert 'typeof="deo:Background"' in html
    assert "deo:Introduction" not in html


def test_zip_and_fixed_timestamp(workdir, capsys):
    code, out = _convert(workdir, "--zip", "--fixed-timestamp", "--emit-nt")
    assert code == 0
    assert (out / "article.zip").exists()
